#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "gradsense/sensing.hpp"
#include "gradsense/spectral.hpp"

namespace gradsense {

// Gradient-functional matrix of one eigenvalue group plus its singular values.
struct GMatrix {
    double lambda = 0.0;
    std::vector<ModeIndex> modes;  // column order
    Eigen::MatrixXd entries;       // q x multiplicity
    Eigen::VectorXd singular_values;
};

struct GroupVerdict {
    double lambda = 0.0;
    int multiplicity = 0;
    int numerical_rank = 0;
    double sigma_min = 0.0; // smallest singular value of the group matrix
    bool pass = false;      // numerical_rank == multiplicity
};

// Condition-number diagnostic for the finite completeness surrogate: the Gram
// matrix of traced gradient profiles on the region, whose numerical rank must
// reach the truncation level J for the declared assumption to be testable.
struct CompletenessSurrogate {
    int rank = 0;
    int required = 0;       // J
    bool full_rank = false; // rank >= required
    double condition = 0.0; // largest / J-th largest eigenvalue
};

// Outcome of the spectral rank test. The suite is strategic for the gradient
// trace on `region` iff q >= r and every group matrix has full column rank;
// the completeness of traced gradient profiles on the region is a declared
// assumption recorded alongside.
struct StrategicVerdict {
    bool strategic = false;
    int q = 0;
    int r = 0;              // max multiplicity over groups
    double sigma_max = 0.0; // global largest singular value
    double rank_tol = 0.0;
    bool simple_spectrum = false;
    BoundaryRegion region;
    std::string assumption; // text of the declared completeness assumption
    std::vector<GroupVerdict> groups;
    std::vector<int> failing_groups; // indices into `groups`
    double sigma_min_overall() const;
};

struct ObservabilityGramian {
    double horizon = 0.0;
    Eigen::MatrixXd matrix;      // mode_count x mode_count, symmetric PSD
    Eigen::VectorXd eigenvalues; // full-matrix spectrum, ascending
    // (offset, size) of each eigenvalue group's diagonal block in flat order;
    // empty means "treat the whole matrix as one block".
    std::vector<std::pair<int, int>> group_blocks;
};

// Numerical rank of every group matrix against rank_tol * sigma_max with the
// global sigma_max. Throws EmptySuite when the suite is empty.
StrategicVerdict rank_test(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                           const BoundaryRegion& gamma, const QuadratureSpec& quad,
                           double rank_tol = 1e-10);

// Detailed per-group matrices for diagnostics and tests.
std::vector<GMatrix> assemble_group_matrices(const RectDomain& dom, const SensorSuite& suite,
                                             const ModeSet& ms, const QuadratureSpec& quad);

// Truncated observability Gramian in spectral coordinates over [0,T]:
//   M[a,b] = sum_i g_i(a) g_i(b) (e^{(la+lb)T} - 1)/(la+lb)
// with g_i the value functional of sensor i. NonPositiveHorizon if T <= 0.
ObservabilityGramian gramian(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                             double T, const QuadratureSpec& quad);

// Decides whether the truncated observation map is injective, i.e. the
// Gramian is positive definite beyond roundoff. Injectivity splits across
// eigenvalue groups (exponentials with distinct rates are independent), so
// the test requires every group's diagonal block to have its smallest
// eigenvalue above pd_tol times the full matrix's largest eigenvalue. The
// naive whole-matrix minimum eigenvalue is reported in `eigenvalues` but not
// used: mixing groups makes the spectral floor collapse exponentially with
// the level even for injective maps. The zero matrix fails.
bool positive_definite_test(const ObservabilityGramian& g, double pd_tol = 1e-10);

// Smallest eigenvalue over the group diagonal blocks (whole matrix when no
// blocks are recorded); the PD test compares this against pd_tol * max.
double min_group_eigenvalue(const ObservabilityGramian& g);

// Gram matrix of traced gradient profiles of all modes on gamma; reports
// whether its numerical rank reaches J (the count of distinct trace shapes
// on one side) and the conditioning of the leading J-dimensional span.
CompletenessSurrogate completeness_surrogate(const RectDomain& dom, const ModeSet& ms,
                                             const BoundaryRegion& gamma,
                                             const QuadratureSpec& quad, double rank_tol = 1e-10);

// Locus rules ----------------------------------------------------------------

enum class LocusRule {
    None,
    Cor41,          // symmetric internal zone
    Cor42OneSide,   // one symmetric boundary segment
    Cor42TwoSide,   // two symmetric boundary segments
    Cor43Pointwise, // internal pointwise
    Cor43Filament,  // filament with declared symmetry center (interpreted)
    Cor44,          // boundary pointwise
};

std::string locus_rule_name(LocusRule r);

// Exact-rational non-strategic certificate for a single sensor at truncation
// level J. `applicable` states the sensor matches a rule's hypothesis shape;
// `fires` states the rationality condition annihilates the sensor's entry at
// some mode with n,m <= J (the blind mode), so the rank test at the same
// level must reject the single-sensor suite.
struct LocusReport {
    bool applicable = false;
    bool fires = false; // non-strategic by locus
    LocusRule rule = LocusRule::None;
    std::optional<ModeIndex> blind_mode;
    std::string witness;
};

// IrrationalUnsupported only for coordinates with no rationality annotation;
// declared-irrational coordinates simply cannot satisfy the conditions.
LocusReport locus_check(const RectDomain& dom, const Sensor& sensor, int J);

// Crossing check ---------------------------------------------------------------

// Verdicts for the collar omega_r = (union of balls of radius r around gamma)
// intersected with the domain, versus the boundary region itself. Since the
// rank predicate depends on gamma only through the declared assumption, the
// implication internal => boundary must always hold.
struct CrossingReport {
    double radius = 0.0;
    std::string collar_description;
    double collar_area = 0.0; // measured on an evaluation grid
    bool internal_pass = false;
    bool boundary_pass = false;
    bool implication_holds = false;
    CompletenessSurrogate internal_surrogate;
    CompletenessSurrogate boundary_surrogate;
};

// RadiusTooLarge when the collar covers the whole domain (r at least the
// largest corner distance to the segment).
CrossingReport crossing_check(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                              const BoundaryRegion& gamma, double r, const QuadratureSpec& quad,
                              double rank_tol = 1e-10);

// Location scan ---------------------------------------------------------------

struct ScanRecord {
    double x = 0.0; // grid point (arc coordinate in `x` for boundary scans)
    double y = 0.0;
    bool valid = false; // template placement admissible at this point
    bool strategic = false;
    double sigma_min = 0.0; // sigma_min_overall of the verdict
    std::string note;       // failure reason when !valid
};

struct ScanResult {
    std::vector<double> xs, ys; // grid axes (ys empty for boundary scans)
    std::vector<ScanRecord> records; // row-major: y outer, x inner
};

// Relocates the template sensor to every grid point and runs the rank test.
// Internal templates scan over (x,y) centers; boundary templates scan over
// the arc coordinate (xs only). Invalid placements produce failed records.
// `threads` caps worker count (>= 1); records keep grid order regardless.
ScanResult scan_locations(const RectDomain& dom, const Sensor& sensor_template, const ModeSet& ms,
                          const BoundaryRegion& gamma, const std::vector<double>& xs,
                          const std::vector<double>& ys, const QuadratureSpec& quad,
                          double rank_tol = 1e-10, int threads = 1);

} // namespace gradsense
