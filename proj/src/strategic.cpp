#include "gradsense/strategic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <sstream>
#include <thread>

#include "gradsense/errors.hpp"

namespace gradsense {

double StrategicVerdict::sigma_min_overall() const {
    double v = std::numeric_limits<double>::infinity();
    for (const GroupVerdict& g : groups) v = std::min(v, g.sigma_min);
    return groups.empty() ? 0.0 : v;
}

std::vector<GMatrix> assemble_group_matrices(const RectDomain& dom, const SensorSuite& suite,
                                             const ModeSet& ms, const QuadratureSpec& quad) {
    std::vector<GMatrix> out;
    out.reserve(ms.groups.size());
    for (const EigenGroup& g : ms.groups) {
        GMatrix gm;
        gm.lambda = g.lambda;
        gm.modes = g.members;
        gm.entries = assemble_G(dom, suite, g, quad);
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(gm.entries);
        gm.singular_values = svd.singularValues();
        out.push_back(std::move(gm));
    }
    return out;
}

StrategicVerdict rank_test(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                           const BoundaryRegion& gamma, const QuadratureSpec& quad,
                           double rank_tol) {
    validate_region(dom, gamma);
    if (suite.sensors.empty()) throw EmptySuite("rank test on an empty suite");
    if (rank_tol < 0.0) throw ValidationError("rank tolerance must be >= 0");

    const std::vector<GMatrix> mats = assemble_group_matrices(dom, suite, ms, quad);

    StrategicVerdict v;
    v.q = suite.q();
    v.rank_tol = rank_tol;
    v.region = gamma;
    v.simple_spectrum = is_simple_spectrum(ms);
    {
        std::ostringstream os;
        os << "traced gradient profiles up to level " << ms.level
           << " assumed complete on side " << side_name(gamma.side) << " [" << gamma.lo << ","
           << gamma.hi << "]";
        v.assumption = os.str();
    }

    // Global scale: largest singular value over every group matrix.
    double sigma_max = 0.0;
    for (const GMatrix& gm : mats)
        if (gm.singular_values.size() > 0)
            sigma_max = std::max(sigma_max, gm.singular_values(0));
    v.sigma_max = sigma_max;
    const double threshold = rank_tol * sigma_max;

    v.r = 0;
    bool all_pass = true;
    for (std::size_t gi = 0; gi < mats.size(); ++gi) {
        const GMatrix& gm = mats[gi];
        GroupVerdict gv;
        gv.lambda = gm.lambda;
        gv.multiplicity = static_cast<int>(gm.modes.size());
        v.r = std::max(v.r, gv.multiplicity);
        int rank = 0;
        double smin = 0.0;
        if (gm.singular_values.size() > 0) {
            smin = gm.singular_values(gm.singular_values.size() - 1);
            for (Eigen::Index k = 0; k < gm.singular_values.size(); ++k)
                if (gm.singular_values(k) > threshold) ++rank;
            if (sigma_max == 0.0) rank = 0; // all entries zero
        }
        // Fewer singular values than columns (q < multiplicity) already caps
        // the rank below the multiplicity.
        gv.numerical_rank = rank;
        gv.sigma_min = smin;
        gv.pass = (rank == gv.multiplicity);
        if (!gv.pass) {
            all_pass = false;
            v.failing_groups.push_back(static_cast<int>(gi));
        }
        v.groups.push_back(gv);
    }

    v.strategic = (v.q >= v.r) && all_pass;
    return v;
}

ObservabilityGramian gramian(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                             double T, const QuadratureSpec& quad) {
    if (!(T > 0.0)) throw NonPositiveHorizon("observation horizon must be positive");
    if (suite.sensors.empty()) throw EmptySuite("gramian of an empty suite");

    const Eigen::MatrixXd V = assemble_value_matrix(dom, suite, ms, quad);
    const Eigen::Index M = V.cols();
    Eigen::VectorXd lambda(M);
    for (Eigen::Index k = 0; k < M; ++k) lambda(k) = ms.flat[static_cast<std::size_t>(k)].lambda;

    ObservabilityGramian g;
    g.horizon = T;
    g.matrix.resize(M, M);
    for (Eigen::Index a = 0; a < M; ++a) {
        for (Eigen::Index b = a; b < M; ++b) {
            const double s = lambda(a) + lambda(b);
            // integral of e^{s t} over [0,T]; s < 0 for every mode pair here
            const double w = (s == 0.0) ? T : (std::exp(s * T) - 1.0) / s;
            const double prod = V.col(a).dot(V.col(b));
            g.matrix(a, b) = prod * w;
            g.matrix(b, a) = g.matrix(a, b);
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(g.matrix, Eigen::EigenvaluesOnly);
    g.eigenvalues = es.eigenvalues();
    int offset = 0;
    for (const EigenGroup& grp : ms.groups) {
        g.group_blocks.emplace_back(offset, grp.multiplicity());
        offset += grp.multiplicity();
    }
    return g;
}

double min_group_eigenvalue(const ObservabilityGramian& g) {
    std::vector<std::pair<int, int>> blocks = g.group_blocks;
    if (blocks.empty()) blocks.emplace_back(0, static_cast<int>(g.matrix.rows()));
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& [off, sz] : blocks) {
        const Eigen::MatrixXd block = g.matrix.block(off, off, sz, sz);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(block, Eigen::EigenvaluesOnly);
        worst = std::min(worst, es.eigenvalues()(0));
    }
    return std::isfinite(worst) ? worst : 0.0;
}

bool positive_definite_test(const ObservabilityGramian& g, double pd_tol) {
    if (g.eigenvalues.size() == 0) return false;
    const double max_eig = g.eigenvalues(g.eigenvalues.size() - 1);
    if (!(max_eig > 0.0)) return false; // zero (or negative-roundoff) matrix
    return min_group_eigenvalue(g) > pd_tol * max_eig;
}

CompletenessSurrogate completeness_surrogate(const RectDomain& dom, const ModeSet& ms,
                                             const BoundaryRegion& gamma,
                                             const QuadratureSpec& quad, double rank_tol) {
    validate_region(dom, gamma);
    const int M = static_cast<int>(ms.flat.size());
    const int panels = std::max(1, ms.level);
    const int per_panel = quad.line_order;
    const int P = panels * per_panel;

    // Rows: sqrt(weight)-scaled gradient components at the quadrature points;
    // the Gram matrix of the traced profiles is then B^T B.
    Eigen::MatrixXd B(2 * P, M);
    const GaussRule& rule = gauss_legendre(per_panel);
    const double h = gamma.length() / panels;
    int row = 0;
    for (int p = 0; p < panels; ++p) {
        const double mid = gamma.lo + (p + 0.5) * h;
        for (int i = 0; i < per_panel; ++i) {
            const double s = mid + 0.5 * h * rule.nodes[i];
            const double w = std::sqrt(rule.weights[i] * 0.5 * h);
            for (int a = 0; a < M; ++a) {
                const Vec2 gr = boundary_trace_gradient(dom, gamma, ms.flat[a].index, s);
                B(row, a) = w * gr[0];
                B(row + 1, a) = w * gr[1];
            }
            row += 2;
        }
    }
    const Eigen::MatrixXd K = B.transpose() * B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues(); // ascending

    CompletenessSurrogate cs;
    cs.required = ms.level;
    const double emax = std::max(0.0, ev(M - 1));
    int rank = 0;
    for (int k = 0; k < M; ++k)
        if (ev(k) > rank_tol * emax && ev(k) > 0.0) ++rank;
    if (emax == 0.0) rank = 0;
    cs.rank = rank;
    cs.full_rank = rank >= cs.required;
    const double ej = (cs.required <= M) ? ev(M - cs.required) : 0.0; // J-th largest
    cs.condition = (ej > 0.0) ? emax / ej : std::numeric_limits<double>::infinity();
    return cs;
}

// Locus rules -----------------------------------------------------------------

std::string locus_rule_name(LocusRule r) {
    switch (r) {
        case LocusRule::None:          return "none";
        case LocusRule::Cor41:         return "cor_4_1";
        case LocusRule::Cor42OneSide:  return "cor_4_2_one_side";
        case LocusRule::Cor42TwoSide:  return "cor_4_2_two_side";
        case LocusRule::Cor43Pointwise:return "cor_4_3_pointwise";
        case LocusRule::Cor43Filament: return "cor_4_3_filament";
        case LocusRule::Cor44:         return "cor_4_4";
    }
    return "?";
}

namespace {

// Tangential axis of a side: 0 = x (ratios of a1), 1 = y (ratios of a2).
int tangential_axis(Side s) { return (s == Side::Bottom || s == Side::Top) ? 0 : 1; }

std::optional<Rational> coord_ratio(const Coord& c, const char* what) {
    switch (c.tag) {
        case CoordTag::Rational: return c.frac;
        case CoordTag::Irrational: return std::nullopt;
        case CoordTag::Unspecified:
            throw IrrationalUnsupported(std::string(what) +
                                        " has no rationality annotation; exact locus test declined");
    }
    return std::nullopt;
}

// Structurally annihilated mode of the two-axis gradient pattern
//   entry ~ cos(n pi r1) sin(m pi r2) * A + sin(n pi r1) cos(m pi r2) * B:
// zero for arbitrary A, B iff both products vanish, i.e. the sines vanish on
// both axes or the cosines do.
std::optional<ModeIndex> blind_mode_two_axis(const Rational& r1, const Rational& r2, int J) {
    for (int n = 1; n <= J; ++n)
        for (int m = 1; m <= J; ++m) {
            const bool ss = sin_multiple_vanishes(n, r1) && sin_multiple_vanishes(m, r2);
            const bool cc = cos_multiple_vanishes(n, r1) && cos_multiple_vanishes(m, r2);
            if (ss || cc) return ModeIndex{n, m};
        }
    return std::nullopt;
}

LocusReport two_axis_report(LocusRule rule, const std::optional<Rational>& r1,
                            const std::optional<Rational>& r2, int J, const char* c1name,
                            const char* c2name) {
    LocusReport rep;
    rep.applicable = true;
    rep.rule = rule;
    if (!r1 || !r2) {
        rep.witness = std::string(!r1 ? c1name : c2name) +
                      " declared irrational; rationality condition unsatisfiable";
        return rep;
    }
    const auto blind = blind_mode_two_axis(*r1, *r2, J);
    if (blind) {
        rep.fires = true;
        rep.blind_mode = blind;
        std::ostringstream os;
        os << c1name << " = " << r1->str() << ", " << c2name << " = " << r2->str()
           << " annihilate the gradient entry of mode (" << blind->n << "," << blind->m
           << ") within level " << J;
        rep.witness = os.str();
    } else {
        std::ostringstream os;
        os << c1name << " = " << r1->str() << ", " << c2name << " = " << r2->str()
           << ": no annihilated mode within level " << J;
        rep.witness = os.str();
    }
    return rep;
}

// Center ratio (lo+hi)/2 relative to the side length; nullopt if either end
// is declared irrational.
std::optional<Rational> segment_center_ratio(const BoundarySegmentGeometry& seg) {
    const auto lo = coord_ratio(seg.lo, "segment lo");
    const auto hi = coord_ratio(seg.hi, "segment hi");
    if (!lo || !hi) return std::nullopt;
    return (*lo + *hi) * Rational(1, 2);
}

// A segment's entry factor at (n,m) vanishes structurally iff the sine of the
// tangential index at the center ratio vanishes.
bool segment_factor_vanishes(const BoundarySegmentGeometry& seg,
                             const std::optional<Rational>& center, int n, int m) {
    if (!center) return false;
    const int k = tangential_axis(seg.side) == 0 ? n : m;
    return sin_multiple_vanishes(k, *center);
}

} // namespace

LocusReport locus_check(const RectDomain& dom, const Sensor& sensor, int J) {
    if (J < 1) throw ValidationError("locus check needs level J >= 1");
    LocusReport rep;

    switch (sensor.kind) {
        case SensorKind::InternalPointwise: {
            const auto& g = std::get<PointGeometry>(sensor.geometry);
            return two_axis_report(LocusRule::Cor43Pointwise, coord_ratio(g.x, "b1/a1"),
                                   coord_ratio(g.y, "b2/a2"), J, "b1/a1", "b2/a2");
        }
        case SensorKind::InternalZone: {
            if (!sensor.distribution.declared_symmetric) {
                rep.witness = "zone density not declared symmetric";
                return rep;
            }
            const auto& g = std::get<ZoneGeometry>(sensor.geometry);
            return two_axis_report(LocusRule::Cor41, coord_ratio(g.cx, "c1/a1"),
                                   coord_ratio(g.cy, "c2/a2"), J, "c1/a1", "c2/a2");
        }
        case SensorKind::Filament: {
            const auto& g = std::get<FilamentGeometry>(sensor.geometry);
            if (!sensor.distribution.declared_symmetric || !g.symmetry_center) {
                rep.witness = "filament without a declared symmetry center";
                return rep;
            }
            return two_axis_report(LocusRule::Cor43Filament,
                                   coord_ratio((*g.symmetry_center)[0], "b1/a1"),
                                   coord_ratio((*g.symmetry_center)[1], "b2/a2"), J, "b1/a1",
                                   "b2/a2");
        }
        case SensorKind::BoundaryPointwise: {
            const auto& g = std::get<BoundaryPointGeometry>(sensor.geometry);
            rep.applicable = true;
            rep.rule = LocusRule::Cor44;
            const char* rname = tangential_axis(g.side) == 0 ? "b1/a1" : "b2/a2";
            const auto ratio = coord_ratio(g.s, rname);
            if (!ratio) {
                rep.witness = std::string(rname) +
                              " declared irrational; rationality condition unsatisfiable";
                return rep;
            }
            for (int k = 1; k <= J && !rep.fires; ++k) {
                if (sin_multiple_vanishes(k, *ratio)) {
                    rep.fires = true;
                    rep.blind_mode = tangential_axis(g.side) == 0 ? ModeIndex{k, 1} : ModeIndex{1, k};
                    std::ostringstream os;
                    os << rname << " = " << ratio->str() << " annihilates every entry with "
                       << (tangential_axis(g.side) == 0 ? "n" : "m") << " = " << k;
                    rep.witness = os.str();
                }
            }
            if (!rep.fires)
                rep.witness = std::string(rname) + " = " + ratio->str() +
                              ": no annihilated mode within level " + std::to_string(J);
            return rep;
        }
        case SensorKind::BoundaryZone: {
            if (!sensor.distribution.declared_symmetric) {
                rep.witness = "boundary density not declared symmetric";
                return rep;
            }
            const auto& g = std::get<BoundaryZoneGeometry>(sensor.geometry);
            if (g.segments.size() == 1) {
                rep.applicable = true;
                rep.rule = LocusRule::Cor42OneSide;
                const auto center = segment_center_ratio(g.segments[0]);
                if (!center) {
                    rep.witness = "segment center declared irrational; condition unsatisfiable";
                    return rep;
                }
                const int axis = tangential_axis(g.segments[0].side);
                for (int k = 1; k <= J && !rep.fires; ++k) {
                    if (sin_multiple_vanishes(k, *center)) {
                        rep.fires = true;
                        rep.blind_mode = axis == 0 ? ModeIndex{k, 1} : ModeIndex{1, k};
                        std::ostringstream os;
                        os << "segment center ratio " << center->str()
                           << " annihilates every entry with " << (axis == 0 ? "n" : "m") << " = "
                           << k;
                        rep.witness = os.str();
                    }
                }
                if (!rep.fires)
                    rep.witness = "segment center ratio " + center->str() +
                                  ": no annihilated mode within level " + std::to_string(J);
                return rep;
            }
            rep.applicable = true;
            rep.rule = LocusRule::Cor42TwoSide;
            const auto c0 = segment_center_ratio(g.segments[0]);
            const auto c1 = segment_center_ratio(g.segments[1]);
            if (!c0 || !c1) {
                rep.witness = "a segment center is declared irrational; condition unsatisfiable";
                return rep;
            }
            for (int n = 1; n <= J && !rep.fires; ++n)
                for (int m = 1; m <= J && !rep.fires; ++m) {
                    if (segment_factor_vanishes(g.segments[0], c0, n, m) &&
                        segment_factor_vanishes(g.segments[1], c1, n, m)) {
                        rep.fires = true;
                        rep.blind_mode = ModeIndex{n, m};
                        std::ostringstream os;
                        os << "segment center ratios " << c0->str() << " and " << c1->str()
                           << " annihilate the entry of mode (" << n << "," << m << ")";
                        rep.witness = os.str();
                    }
                }
            if (!rep.fires)
                rep.witness = "segment center ratios " + c0->str() + ", " + c1->str() +
                              ": no jointly annihilated mode within level " + std::to_string(J);
            return rep;
        }
    }
    return rep;
}

// Crossing check ---------------------------------------------------------------

namespace {

// Gram of the full gradients over the collar, integrated with a midpoint rule
// masked to {dist(p, gamma) <= r}. Returns the measured collar area too.
CompletenessSurrogate collar_surrogate(const RectDomain& dom, const ModeSet& ms,
                                       const BoundaryRegion& gamma, double r, double rank_tol,
                                       double* area_out) {
    const int M = static_cast<int>(ms.flat.size());
    const int N = 160;

    const Vec2 p0 = boundary_point(dom, gamma.side, gamma.lo);
    const Vec2 p1 = boundary_point(dom, gamma.side, gamma.hi);
    const double ax = std::max(0.0, std::min(p0[0], p1[0]) - r);
    const double bx = std::min(dom.a1, std::max(p0[0], p1[0]) + r);
    const double ay = std::max(0.0, std::min(p0[1], p1[1]) - r);
    const double by = std::min(dom.a2, std::max(p0[1], p1[1]) + r);
    const double hx = (bx - ax) / N, hy = (by - ay) / N;
    const double cell = hx * hy;

    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(M, M);
    Eigen::VectorXd gx(M), gy(M);
    double area = 0.0;
    for (int i = 0; i < N; ++i) {
        const double x = ax + (i + 0.5) * hx;
        for (int j = 0; j < N; ++j) {
            const double y = ay + (j + 0.5) * hy;
            if (distance_to_region(dom, gamma, x, y) > r) continue;
            area += cell;
            for (int a = 0; a < M; ++a) {
                const Vec2 gr = eval_eigengradient(dom, ms.flat[a].index, x, y);
                gx(a) = gr[0];
                gy(a) = gr[1];
            }
            K.noalias() += cell * (gx * gx.transpose() + gy * gy.transpose());
        }
    }
    if (area_out) *area_out = area;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
    const Eigen::VectorXd ev = es.eigenvalues();
    CompletenessSurrogate cs;
    cs.required = M; // gradients over an open set stay independent
    const double emax = std::max(0.0, ev(M - 1));
    int rank = 0;
    for (int k = 0; k < M; ++k)
        if (ev(k) > rank_tol * emax && ev(k) > 0.0) ++rank;
    if (emax == 0.0) rank = 0;
    cs.rank = rank;
    cs.full_rank = rank >= cs.required;
    const double emin = ev(0);
    cs.condition = (emin > 0.0) ? emax / emin : std::numeric_limits<double>::infinity();
    return cs;
}

} // namespace

CrossingReport crossing_check(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                              const BoundaryRegion& gamma, double r, const QuadratureSpec& quad,
                              double rank_tol) {
    validate_region(dom, gamma);
    if (!(r > 0.0)) throw ValidationError("crossing radius must be positive");
    const double reach = max_distance_to_region(dom, gamma);
    if (r >= reach)
        throw RadiusTooLarge("radius " + std::to_string(r) +
                             " covers the whole domain (max corner distance " +
                             std::to_string(reach) + ")");

    CrossingReport rep;
    rep.radius = r;

    // The rank predicate reads the region only as the declared completeness
    // assumption, so the internal (collar) and boundary verdicts share one
    // G-matrix computation.
    const StrategicVerdict verdict = rank_test(dom, suite, ms, gamma, quad, rank_tol);
    rep.internal_pass = verdict.strategic;
    rep.boundary_pass = verdict.strategic;
    rep.implication_holds = !(rep.internal_pass && !rep.boundary_pass);

    rep.boundary_surrogate = completeness_surrogate(dom, ms, gamma, quad, rank_tol);
    rep.internal_surrogate = collar_surrogate(dom, ms, gamma, r, rank_tol, &rep.collar_area);

    std::ostringstream os;
    os << "points of the domain within " << r << " of side " << side_name(gamma.side) << " ["
       << gamma.lo << "," << gamma.hi << "], area ~= " << rep.collar_area;
    rep.collar_description = os.str();
    return rep;
}

// Location scan ---------------------------------------------------------------

namespace {

Sensor relocate_template(const Sensor& tpl, double x, double y) {
    Sensor s = tpl;
    switch (tpl.kind) {
        case SensorKind::InternalPointwise:
            s.geometry = PointGeometry{Coord::unspecified(x), Coord::unspecified(y)};
            break;
        case SensorKind::InternalZone: {
            auto g = std::get<ZoneGeometry>(tpl.geometry);
            g.cx = Coord::unspecified(x);
            g.cy = Coord::unspecified(y);
            s.geometry = g;
            break;
        }
        case SensorKind::BoundaryPointwise: {
            auto g = std::get<BoundaryPointGeometry>(tpl.geometry);
            g.s = Coord::unspecified(x);
            s.geometry = g;
            break;
        }
        case SensorKind::BoundaryZone: {
            auto g = std::get<BoundaryZoneGeometry>(tpl.geometry);
            if (g.segments.size() != 1)
                throw ValidationError("scan templates support single-segment boundary zones");
            const double half = 0.5 * (g.segments[0].hi.value - g.segments[0].lo.value);
            g.segments[0].lo = Coord::unspecified(x - half);
            g.segments[0].hi = Coord::unspecified(x + half);
            s.geometry = g;
            break;
        }
        case SensorKind::Filament: {
            auto g = std::get<FilamentGeometry>(tpl.geometry);
            double cx = 0.0, cy = 0.0;
            for (const Vec2& v : g.vertices) {
                cx += v[0];
                cy += v[1];
            }
            cx /= g.vertices.size();
            cy /= g.vertices.size();
            for (Vec2& v : g.vertices) {
                v[0] += x - cx;
                v[1] += y - cy;
            }
            g.symmetry_center.reset();
            s.geometry = g;
            break;
        }
    }
    return s;
}

bool is_boundary_template(const Sensor& tpl) {
    return tpl.kind == SensorKind::BoundaryPointwise || tpl.kind == SensorKind::BoundaryZone;
}

} // namespace

ScanResult scan_locations(const RectDomain& dom, const Sensor& sensor_template, const ModeSet& ms,
                          const BoundaryRegion& gamma, const std::vector<double>& xs,
                          const std::vector<double>& ys, const QuadratureSpec& quad,
                          double rank_tol, int threads) {
    validate_region(dom, gamma);
    const bool boundary = is_boundary_template(sensor_template);
    if (xs.empty() || (!boundary && ys.empty()))
        throw ValidationError("scan grid must be non-empty");

    ScanResult res;
    res.xs = xs;
    res.ys = boundary ? std::vector<double>{} : ys;

    std::vector<std::pair<double, double>> points;
    if (boundary) {
        for (double x : xs) points.emplace_back(x, 0.0);
    } else {
        for (double y : ys)
            for (double x : xs) points.emplace_back(x, y); // row-major: y outer
    }
    res.records.resize(points.size());

    const int nthreads =
        std::clamp(threads, 1, static_cast<int>(std::max<std::size_t>(points.size(), 1)));
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= points.size()) break;
            ScanRecord rec;
            rec.x = points[k].first;
            rec.y = points[k].second;
            try {
                const Sensor s = relocate_template(sensor_template, rec.x, rec.y);
                SensorSuite suite;
                suite.sensors.push_back(s);
                const StrategicVerdict v = rank_test(dom, suite, ms, gamma, quad, rank_tol);
                rec.valid = true;
                rec.strategic = v.strategic;
                rec.sigma_min = v.sigma_min_overall();
            } catch (const Error& e) {
                rec.valid = false;
                rec.note = e.what();
                rec.sigma_min = std::numeric_limits<double>::quiet_NaN();
            }
            res.records[k] = std::move(rec);
        }
    };
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(nthreads);
        for (int t = 0; t < nthreads; ++t) pool.emplace_back(worker);
        for (std::thread& t : pool) t.join();
    }
    return res;
}

} // namespace gradsense
