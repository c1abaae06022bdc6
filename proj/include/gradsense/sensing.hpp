#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gradsense/geometry.hpp"
#include "gradsense/quadrature.hpp"
#include "gradsense/rational.hpp"
#include "gradsense/spectral.hpp"

namespace gradsense {

enum class SensorKind { InternalPointwise, InternalZone, BoundaryZone, BoundaryPointwise, Filament };

std::string sensor_kind_name(SensorKind k);
SensorKind sensor_kind_from_name(const std::string& name);

enum class DistributionKind { Dirac, Uniform, Analytic, Tabulated };

std::string distribution_kind_name(DistributionKind k);
DistributionKind distribution_kind_from_name(const std::string& name);

// Samples over a strictly increasing 1-D grid, evaluated by linear
// interpolation in the arc coordinate of the supporting segment.
struct Tabulated1D {
    std::vector<double> s;
    std::vector<double> values;
};

// Samples over a strictly increasing grid pair, evaluated bilinearly.
// values[i][j] corresponds to (xs[i], ys[j]).
struct Tabulated2D {
    std::vector<double> xs;
    std::vector<double> ys;
    std::vector<std::vector<double>> values;
};

// Spatial density f of a sensor. Dirac is point evaluation for pointwise
// sensors and the unit line density for filaments. Uniform is normalized by
// the support measure. `declared_symmetric` is the caller's statement that f
// is symmetric about the sensor's center; the locus rules only engage for
// declared-symmetric densities.
struct SpatialDistribution {
    DistributionKind kind = DistributionKind::Dirac;
    bool declared_symmetric = true;
    std::string analytic_id;                          // registry name, or "custom"
    std::function<double(double, double)> analytic_fn;
    std::optional<Tabulated1D> table1d;
    std::optional<Tabulated2D> table2d;

    static SpatialDistribution dirac();
    static SpatialDistribution uniform(bool symmetric = true);
    static SpatialDistribution analytic(std::string id, std::function<double(double, double)> fn,
                                        bool symmetric = false);
    static SpatialDistribution tabulated(Tabulated1D t, bool symmetric = false);
    static SpatialDistribution tabulated(Tabulated2D t, bool symmetric = false);
};

// Geometries. Coordinates that the locus rules inspect carry rationality
// annotations (fractions are relative to the axis length).
struct PointGeometry {
    Coord x, y;
};

struct BoundaryPointGeometry {
    Side side = Side::Bottom;
    Coord s;   // arc coordinate along the side
};

struct ZoneGeometry {
    Coord cx, cy;          // center
    double hx = 0, hy = 0; // half-widths
};

struct BoundarySegmentGeometry {
    Side side = Side::Top;
    Coord lo, hi;
    BoundaryRegion region(const RectDomain&) const { return BoundaryRegion{side, lo.value, hi.value}; }
};

struct BoundaryZoneGeometry {
    std::vector<BoundarySegmentGeometry> segments; // one or two
};

struct FilamentGeometry {
    std::vector<Vec2> vertices;                          // polyline, >= 2 vertices
    std::optional<std::array<Coord, 2>> symmetry_center; // declared center, if any
};

struct Sensor {
    SensorKind kind = SensorKind::InternalPointwise;
    std::variant<PointGeometry, BoundaryPointGeometry, ZoneGeometry, BoundaryZoneGeometry,
                 FilamentGeometry>
        geometry;
    SpatialDistribution distribution;

    static Sensor internal_pointwise(Coord x, Coord y);
    static Sensor boundary_pointwise(Side side, Coord s);
    static Sensor internal_zone(Coord cx, Coord cy, double hx, double hy, SpatialDistribution f);
    static Sensor boundary_zone(std::vector<BoundarySegmentGeometry> segments, SpatialDistribution f);
    static Sensor filament(std::vector<Vec2> vertices, SpatialDistribution f,
                           std::optional<std::array<Coord, 2>> symmetry_center = std::nullopt);
};

struct SensorSuite {
    std::vector<Sensor> sensors;
    int q() const { return static_cast<int>(sensors.size()); }
};

// Geometry/distribution validation shared by all evaluators: support inside
// the closed rectangle, positive measure, supported kind/distribution pairs,
// monotone tables covering the support. Throws OutOfDomain,
// UnsupportedCombination, QuadratureUnderflow or ValidationError.
void validate_sensor(const RectDomain& dom, const Sensor& sensor);

// Total measure of the sensor support: area for zones, arc length for
// boundary zones and filaments, 0 for pointwise sensors.
double sensor_support_measure(const RectDomain& dom, const Sensor& sensor);

// Gradient functional of one mode: sum over both spatial components of the
// eigenfunction gradient, evaluated at the point (pointwise kinds) or
// integrated against f over the support (zones, boundary zones, filaments).
double sensor_mode_entry(const RectDomain& dom, const Sensor& sensor, const ModeIndex& idx,
                         const QuadratureSpec& quad);

// Value functional of one mode: point evaluation of the eigenfunction, or
// <phi, f> over the support. This is what the sensor reads off a state.
double sensor_value_entry(const RectDomain& dom, const Sensor& sensor, const ModeIndex& idx,
                          const QuadratureSpec& quad);

// q x r matrix of gradient-functional entries for the modes of one group,
// rows ordered like the suite, columns like group.members. EmptySuite if the
// suite has no sensors.
Eigen::MatrixXd assemble_G(const RectDomain& dom, const SensorSuite& suite, const EigenGroup& group,
                           const QuadratureSpec& quad);

// q x mode_count matrix of value-functional entries over the whole mode set,
// columns in flat mode order.
Eigen::MatrixXd assemble_value_matrix(const RectDomain& dom, const SensorSuite& suite,
                                      const ModeSet& ms, const QuadratureSpec& quad);

// Per-sensor outputs of the state with the given coefficients (flat mode
// order): y_i = sum_k c_k * value_entry(sensor_i, mode_k).
// ModeSetMismatch if the coefficient count differs from the mode count.
Eigen::VectorXd apply_output(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                             const Eigen::VectorXd& coeffs, const QuadratureSpec& quad);

} // namespace gradsense
