#include "gradsense/sensing.hpp"

#include <algorithm>
#include <cmath>

#include "gradsense/errors.hpp"

namespace gradsense {

std::string sensor_kind_name(SensorKind k) {
    switch (k) {
        case SensorKind::InternalPointwise: return "internal_pointwise";
        case SensorKind::InternalZone:      return "internal_zone";
        case SensorKind::BoundaryZone:      return "boundary_zone";
        case SensorKind::BoundaryPointwise: return "boundary_pointwise";
        case SensorKind::Filament:          return "filament";
    }
    return "?";
}

SensorKind sensor_kind_from_name(const std::string& name) {
    if (name == "internal_pointwise") return SensorKind::InternalPointwise;
    if (name == "internal_zone") return SensorKind::InternalZone;
    if (name == "boundary_zone") return SensorKind::BoundaryZone;
    if (name == "boundary_pointwise") return SensorKind::BoundaryPointwise;
    if (name == "filament") return SensorKind::Filament;
    throw ParseError("unknown sensor kind '" + name + "'");
}

std::string distribution_kind_name(DistributionKind k) {
    switch (k) {
        case DistributionKind::Dirac:     return "dirac";
        case DistributionKind::Uniform:   return "uniform";
        case DistributionKind::Analytic:  return "analytic";
        case DistributionKind::Tabulated: return "tabulated";
    }
    return "?";
}

DistributionKind distribution_kind_from_name(const std::string& name) {
    if (name == "dirac") return DistributionKind::Dirac;
    if (name == "uniform") return DistributionKind::Uniform;
    if (name == "analytic") return DistributionKind::Analytic;
    if (name == "tabulated") return DistributionKind::Tabulated;
    throw ParseError("unknown distribution kind '" + name + "'");
}

SpatialDistribution SpatialDistribution::dirac() {
    SpatialDistribution d;
    d.kind = DistributionKind::Dirac;
    d.declared_symmetric = true;
    return d;
}

SpatialDistribution SpatialDistribution::uniform(bool symmetric) {
    SpatialDistribution d;
    d.kind = DistributionKind::Uniform;
    d.declared_symmetric = symmetric;
    return d;
}

SpatialDistribution SpatialDistribution::analytic(std::string id,
                                                  std::function<double(double, double)> fn,
                                                  bool symmetric) {
    SpatialDistribution d;
    d.kind = DistributionKind::Analytic;
    d.analytic_id = std::move(id);
    d.analytic_fn = std::move(fn);
    d.declared_symmetric = symmetric;
    return d;
}

SpatialDistribution SpatialDistribution::tabulated(Tabulated1D t, bool symmetric) {
    SpatialDistribution d;
    d.kind = DistributionKind::Tabulated;
    d.table1d = std::move(t);
    d.declared_symmetric = symmetric;
    return d;
}

SpatialDistribution SpatialDistribution::tabulated(Tabulated2D t, bool symmetric) {
    SpatialDistribution d;
    d.kind = DistributionKind::Tabulated;
    d.table2d = std::move(t);
    d.declared_symmetric = symmetric;
    return d;
}

Sensor Sensor::internal_pointwise(Coord x, Coord y) {
    Sensor s;
    s.kind = SensorKind::InternalPointwise;
    s.geometry = PointGeometry{x, y};
    s.distribution = SpatialDistribution::dirac();
    return s;
}

Sensor Sensor::boundary_pointwise(Side side, Coord arc) {
    Sensor s;
    s.kind = SensorKind::BoundaryPointwise;
    s.geometry = BoundaryPointGeometry{side, arc};
    s.distribution = SpatialDistribution::dirac();
    return s;
}

Sensor Sensor::internal_zone(Coord cx, Coord cy, double hx, double hy, SpatialDistribution f) {
    Sensor s;
    s.kind = SensorKind::InternalZone;
    s.geometry = ZoneGeometry{cx, cy, hx, hy};
    s.distribution = std::move(f);
    return s;
}

Sensor Sensor::boundary_zone(std::vector<BoundarySegmentGeometry> segments, SpatialDistribution f) {
    Sensor s;
    s.kind = SensorKind::BoundaryZone;
    s.geometry = BoundaryZoneGeometry{std::move(segments)};
    s.distribution = std::move(f);
    return s;
}

Sensor Sensor::filament(std::vector<Vec2> vertices, SpatialDistribution f,
                        std::optional<std::array<Coord, 2>> symmetry_center) {
    Sensor s;
    s.kind = SensorKind::Filament;
    s.geometry = FilamentGeometry{std::move(vertices), symmetry_center};
    s.distribution = std::move(f);
    return s;
}

namespace {

double underflow_threshold(const RectDomain& dom) {
    return 1e-13 * std::max(dom.a1, dom.a2);
}

void check_table_grid(const std::vector<double>& grid, const char* what) {
    if (grid.size() < 2) throw ValidationError(std::string(what) + ": table needs >= 2 samples");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw ValidationError(std::string(what) + ": table grid must be strictly increasing");
}

double interp1(const Tabulated1D& t, double s) {
    const auto& g = t.s;
    auto it = std::upper_bound(g.begin(), g.end(), s);
    std::size_t hi = std::clamp<std::size_t>(static_cast<std::size_t>(it - g.begin()), 1, g.size() - 1);
    const std::size_t lo = hi - 1;
    const double w = (s - g[lo]) / (g[hi] - g[lo]);
    return t.values[lo] * (1.0 - w) + t.values[hi] * w;
}

double interp2(const Tabulated2D& t, double x, double y) {
    auto cell = [](const std::vector<double>& g, double v) {
        auto it = std::upper_bound(g.begin(), g.end(), v);
        std::size_t hi =
            std::clamp<std::size_t>(static_cast<std::size_t>(it - g.begin()), 1, g.size() - 1);
        return hi - 1;
    };
    const std::size_t i = cell(t.xs, x);
    const std::size_t j = cell(t.ys, y);
    const double wx = (x - t.xs[i]) / (t.xs[i + 1] - t.xs[i]);
    const double wy = (y - t.ys[j]) / (t.ys[j + 1] - t.ys[j]);
    return t.values[i][j] * (1 - wx) * (1 - wy) + t.values[i + 1][j] * wx * (1 - wy) +
           t.values[i][j + 1] * (1 - wx) * wy + t.values[i + 1][j + 1] * wx * wy;
}

double filament_length(const FilamentGeometry& f) {
    double L = 0.0;
    for (std::size_t i = 1; i < f.vertices.size(); ++i)
        L += std::hypot(f.vertices[i][0] - f.vertices[i - 1][0],
                        f.vertices[i][1] - f.vertices[i - 1][1]);
    return L;
}

void require_distribution(const Sensor& s, std::initializer_list<DistributionKind> allowed) {
    for (DistributionKind k : allowed)
        if (s.distribution.kind == k) return;
    throw UnsupportedCombination("distribution '" + distribution_kind_name(s.distribution.kind) +
                                 "' not supported with sensor kind '" + sensor_kind_name(s.kind) +
                                 "'");
}

} // namespace

void validate_sensor(const RectDomain& dom, const Sensor& sensor) {
    const double tiny = underflow_threshold(dom);
    switch (sensor.kind) {
        case SensorKind::InternalPointwise: {
            require_distribution(sensor, {DistributionKind::Dirac});
            const auto& g = std::get<PointGeometry>(sensor.geometry);
            if (!dom.contains_open(g.x.value, g.y.value))
                throw OutOfDomain("internal pointwise sensor at (" + std::to_string(g.x.value) +
                                  "," + std::to_string(g.y.value) + ") not inside the open domain");
            break;
        }
        case SensorKind::BoundaryPointwise: {
            require_distribution(sensor, {DistributionKind::Dirac});
            const auto& g = std::get<BoundaryPointGeometry>(sensor.geometry);
            const double len = side_length(dom, g.side);
            if (!(g.s.value >= 0.0 && g.s.value <= len))
                throw OutOfDomain("boundary pointwise arc coordinate " +
                                  std::to_string(g.s.value) + " outside [0," + std::to_string(len) +
                                  "] on side " + side_name(g.side));
            break;
        }
        case SensorKind::InternalZone: {
            require_distribution(sensor, {DistributionKind::Uniform, DistributionKind::Analytic,
                                          DistributionKind::Tabulated});
            const auto& g = std::get<ZoneGeometry>(sensor.geometry);
            if (g.hx <= tiny || g.hy <= tiny)
                throw QuadratureUnderflow("zone support measure below machine resolution");
            if (g.cx.value - g.hx < 0.0 || g.cx.value + g.hx > dom.a1 ||
                g.cy.value - g.hy < 0.0 || g.cy.value + g.hy > dom.a2)
                throw OutOfDomain("zone support leaves the closed domain");
            if (sensor.distribution.kind == DistributionKind::Tabulated) {
                if (!sensor.distribution.table2d)
                    throw UnsupportedCombination("internal zone requires a 2-D table");
                const auto& t = *sensor.distribution.table2d;
                check_table_grid(t.xs, "zone table xs");
                check_table_grid(t.ys, "zone table ys");
                if (t.values.size() != t.xs.size())
                    throw ValidationError("zone table values/xs size mismatch");
                for (const auto& row : t.values)
                    if (row.size() != t.ys.size())
                        throw ValidationError("zone table values/ys size mismatch");
                if (t.xs.front() > g.cx.value - g.hx || t.xs.back() < g.cx.value + g.hx ||
                    t.ys.front() > g.cy.value - g.hy || t.ys.back() < g.cy.value + g.hy)
                    throw ValidationError("zone table grid does not cover the support");
            }
            if (sensor.distribution.kind == DistributionKind::Analytic &&
                !sensor.distribution.analytic_fn)
                throw ValidationError("analytic distribution without a function");
            break;
        }
        case SensorKind::BoundaryZone: {
            require_distribution(sensor, {DistributionKind::Uniform, DistributionKind::Analytic,
                                          DistributionKind::Tabulated});
            const auto& g = std::get<BoundaryZoneGeometry>(sensor.geometry);
            if (g.segments.empty() || g.segments.size() > 2)
                throw ValidationError("boundary zone needs one or two segments");
            double total = 0.0;
            for (const auto& seg : g.segments) {
                validate_region(dom, seg.region(dom));
                total += seg.hi.value - seg.lo.value;
            }
            if (total <= tiny)
                throw QuadratureUnderflow("boundary zone support below machine resolution");
            if (sensor.distribution.kind == DistributionKind::Tabulated) {
                if (g.segments.size() != 1)
                    throw UnsupportedCombination(
                        "tabulated boundary distributions support a single segment");
                if (!sensor.distribution.table1d)
                    throw UnsupportedCombination("boundary zone requires a 1-D table");
                const auto& t = *sensor.distribution.table1d;
                check_table_grid(t.s, "boundary table s");
                if (t.values.size() != t.s.size())
                    throw ValidationError("boundary table values/s size mismatch");
                if (t.s.front() > g.segments[0].lo.value || t.s.back() < g.segments[0].hi.value)
                    throw ValidationError("boundary table grid does not cover the segment");
            }
            if (sensor.distribution.kind == DistributionKind::Analytic &&
                !sensor.distribution.analytic_fn)
                throw ValidationError("analytic distribution without a function");
            break;
        }
        case SensorKind::Filament: {
            require_distribution(sensor, {DistributionKind::Dirac, DistributionKind::Uniform,
                                          DistributionKind::Analytic, DistributionKind::Tabulated});
            const auto& g = std::get<FilamentGeometry>(sensor.geometry);
            if (g.vertices.size() < 2) throw ValidationError("filament needs >= 2 vertices");
            for (const auto& v : g.vertices)
                if (!dom.contains_closed(v[0], v[1]))
                    throw OutOfDomain("filament vertex outside the closed domain");
            for (std::size_t i = 1; i < g.vertices.size(); ++i) {
                const double seg = std::hypot(g.vertices[i][0] - g.vertices[i - 1][0],
                                              g.vertices[i][1] - g.vertices[i - 1][1]);
                if (seg <= tiny) throw ValidationError("filament has a degenerate segment");
            }
            if (filament_length(g) <= tiny)
                throw QuadratureUnderflow("filament length below machine resolution");
            if (sensor.distribution.kind == DistributionKind::Tabulated) {
                if (!sensor.distribution.table1d)
                    throw UnsupportedCombination("filament requires a 1-D table");
                const auto& t = *sensor.distribution.table1d;
                check_table_grid(t.s, "filament table s");
                if (t.values.size() != t.s.size())
                    throw ValidationError("filament table values/s size mismatch");
                const double L = filament_length(g);
                if (t.s.front() > 0.0 || t.s.back() < L)
                    throw ValidationError("filament table grid does not cover arc [0,L]");
            }
            if (sensor.distribution.kind == DistributionKind::Analytic &&
                !sensor.distribution.analytic_fn)
                throw ValidationError("analytic distribution without a function");
            break;
        }
    }
}

double sensor_support_measure(const RectDomain& dom, const Sensor& sensor) {
    switch (sensor.kind) {
        case SensorKind::InternalPointwise:
        case SensorKind::BoundaryPointwise: return 0.0;
        case SensorKind::InternalZone: {
            const auto& g = std::get<ZoneGeometry>(sensor.geometry);
            return 4.0 * g.hx * g.hy;
        }
        case SensorKind::BoundaryZone: {
            const auto& g = std::get<BoundaryZoneGeometry>(sensor.geometry);
            double total = 0.0;
            for (const auto& seg : g.segments) total += seg.hi.value - seg.lo.value;
            return total;
        }
        case SensorKind::Filament:
            return filament_length(std::get<FilamentGeometry>(sensor.geometry));
    }
    return 0.0;
}

namespace {

// Density value at a support point. `arc` is the arc coordinate used by 1-D
// tables (side coordinate for boundary segments, cumulative length for
// filaments); `measure` normalizes the uniform density. Dirac reaching this
// path means a filament line density of 1.
double density_at(const SpatialDistribution& f, double x, double y, double arc, double measure) {
    switch (f.kind) {
        case DistributionKind::Dirac:   return 1.0;
        case DistributionKind::Uniform: return 1.0 / measure;
        case DistributionKind::Analytic: return f.analytic_fn(x, y);
        case DistributionKind::Tabulated:
            if (f.table2d) return interp2(*f.table2d, x, y);
            return interp1(*f.table1d, arc);
    }
    return 0.0;
}

// Shared evaluator: integrates `field` (a pointwise functional of the mode,
// either the gradient-component sum or the eigenfunction value) against the
// sensor's density, or evaluates it at the sensor point.
double sensor_entry_impl(const RectDomain& dom, const Sensor& sensor, const QuadratureSpec& quad,
                         const std::function<double(double, double)>& field) {
    validate_sensor(dom, sensor);
    const double measure = sensor_support_measure(dom, sensor);
    switch (sensor.kind) {
        case SensorKind::InternalPointwise: {
            const auto& g = std::get<PointGeometry>(sensor.geometry);
            return field(g.x.value, g.y.value);
        }
        case SensorKind::BoundaryPointwise: {
            const auto& g = std::get<BoundaryPointGeometry>(sensor.geometry);
            const Vec2 p = boundary_point(dom, g.side, g.s.value);
            return field(p[0], p[1]);
        }
        case SensorKind::InternalZone: {
            const auto& g = std::get<ZoneGeometry>(sensor.geometry);
            return integrate_rect(
                [&](double x, double y) {
                    return field(x, y) * density_at(sensor.distribution, x, y, 0.0, measure);
                },
                g.cx.value - g.hx, g.cx.value + g.hx, g.cy.value - g.hy, g.cy.value + g.hy,
                quad.order);
        }
        case SensorKind::BoundaryZone: {
            const auto& g = std::get<BoundaryZoneGeometry>(sensor.geometry);
            double sum = 0.0;
            for (const auto& seg : g.segments) {
                sum += integrate_interval(
                    [&](double s) {
                        const Vec2 p = boundary_point(dom, seg.side, s);
                        return field(p[0], p[1]) *
                               density_at(sensor.distribution, p[0], p[1], s, measure);
                    },
                    seg.lo.value, seg.hi.value, quad.line_order);
            }
            return sum;
        }
        case SensorKind::Filament: {
            const auto& g = std::get<FilamentGeometry>(sensor.geometry);
            double sum = 0.0;
            double offset = 0.0;
            for (std::size_t i = 1; i < g.vertices.size(); ++i) {
                const Vec2 p0 = g.vertices[i - 1];
                const Vec2 p1 = g.vertices[i];
                const double len = std::hypot(p1[0] - p0[0], p1[1] - p0[1]);
                sum += integrate_interval(
                    [&](double t) {
                        const double x = p0[0] + (p1[0] - p0[0]) * t;
                        const double y = p0[1] + (p1[1] - p0[1]) * t;
                        return field(x, y) *
                               density_at(sensor.distribution, x, y, offset + t * len, measure) *
                               len;
                    },
                    0.0, 1.0, quad.line_order);
                offset += len;
            }
            return sum;
        }
    }
    return 0.0;
}

} // namespace

double sensor_mode_entry(const RectDomain& dom, const Sensor& sensor, const ModeIndex& idx,
                         const QuadratureSpec& quad) {
    return sensor_entry_impl(dom, sensor, quad, [&](double x, double y) {
        const Vec2 g = eval_eigengradient(dom, idx, x, y);
        return g[0] + g[1];
    });
}

double sensor_value_entry(const RectDomain& dom, const Sensor& sensor, const ModeIndex& idx,
                          const QuadratureSpec& quad) {
    return sensor_entry_impl(dom, sensor, quad, [&](double x, double y) {
        return eval_eigenfunction(dom, idx, x, y);
    });
}

Eigen::MatrixXd assemble_G(const RectDomain& dom, const SensorSuite& suite, const EigenGroup& group,
                           const QuadratureSpec& quad) {
    if (suite.sensors.empty()) throw EmptySuite("sensor suite is empty");
    Eigen::MatrixXd G(suite.q(), group.multiplicity());
    for (int i = 0; i < suite.q(); ++i)
        for (int j = 0; j < group.multiplicity(); ++j)
            G(i, j) = sensor_mode_entry(dom, suite.sensors[i], group.members[j], quad);
    return G;
}

Eigen::MatrixXd assemble_value_matrix(const RectDomain& dom, const SensorSuite& suite,
                                      const ModeSet& ms, const QuadratureSpec& quad) {
    if (suite.sensors.empty()) throw EmptySuite("sensor suite is empty");
    Eigen::MatrixXd V(suite.q(), static_cast<int>(ms.flat.size()));
    for (int i = 0; i < suite.q(); ++i)
        for (int k = 0; k < static_cast<int>(ms.flat.size()); ++k)
            V(i, k) = sensor_value_entry(dom, suite.sensors[i], ms.flat[k].index, quad);
    return V;
}

Eigen::VectorXd apply_output(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                             const Eigen::VectorXd& coeffs, const QuadratureSpec& quad) {
    if (coeffs.size() != static_cast<Eigen::Index>(ms.flat.size()))
        throw ModeSetMismatch("coefficient vector of size " + std::to_string(coeffs.size()) +
                              " does not match mode set of size " + std::to_string(ms.flat.size()));
    return assemble_value_matrix(dom, suite, ms, quad) * coeffs;
}

} // namespace gradsense
