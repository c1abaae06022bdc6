#include "gradsense/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "gradsense/errors.hpp"
#include "gradsense/quadrature.hpp"

namespace gradsense {

namespace {

void require_sizes(const ModeSet& ms, const Eigen::VectorXd& c, const char* what) {
    if (c.size() != static_cast<Eigen::Index>(ms.flat.size()))
        throw ModeSetMismatch(std::string(what) + ": coefficient count " +
                              std::to_string(c.size()) + " != mode count " +
                              std::to_string(ms.flat.size()));
}

double bilinear(const Tabulated2D& t, double x, double y) {
    const auto cell = [](const std::vector<double>& g, double v) {
        auto it = std::upper_bound(g.begin(), g.end(), v);
        std::size_t j = static_cast<std::size_t>(std::distance(g.begin(), it));
        if (j == 0) j = 1;
        if (j >= g.size()) j = g.size() - 1;
        return j;
    };
    const std::size_t i = cell(t.xs, x), j = cell(t.ys, y);
    const double x0 = t.xs[i - 1], x1 = t.xs[i], y0 = t.ys[j - 1], y1 = t.ys[j];
    const double tx = (x - x0) / (x1 - x0), ty = (y - y0) / (y1 - y0);
    const double v00 = t.values[i - 1][j - 1];
    const double v01 = t.values[i - 1][j];
    const double v10 = t.values[i][j - 1];
    const double v11 = t.values[i][j];
    return (1 - tx) * ((1 - ty) * v00 + ty * v01) + tx * ((1 - ty) * v10 + ty * v11);
}

StateCoeffs project_fn(const ModeSet& ms, const std::function<double(double, double)>& x0,
                       const QuadratureSpec& quad) {
    const RectDomain& dom = ms.domain;
    StateCoeffs c;
    c.values.resize(static_cast<Eigen::Index>(ms.flat.size()));
    // Two panels per axis keep the rule accurate through the highest mode at
    // the default order.
    const double mx = 0.5 * dom.a1, my = 0.5 * dom.a2;
    for (std::size_t a = 0; a < ms.flat.size(); ++a) {
        const ModeIndex idx = ms.flat[a].index;
        auto f = [&](double x, double y) { return x0(x, y) * eval_eigenfunction(dom, idx, x, y); };
        double v = 0.0;
        v += integrate_rect(f, 0.0, mx, 0.0, my, quad.order);
        v += integrate_rect(f, mx, dom.a1, 0.0, my, quad.order);
        v += integrate_rect(f, 0.0, mx, my, dom.a2, quad.order);
        v += integrate_rect(f, mx, dom.a1, my, dom.a2, quad.order);
        c.values(static_cast<Eigen::Index>(a)) = v;
    }
    return c;
}

} // namespace

StateCoeffs project_initial_state(const ModeSet& ms, const std::function<double(double, double)>& x0,
                                  const QuadratureSpec& quad) {
    if (!x0) throw ValidationError("initial state function is empty");
    return project_fn(ms, x0, quad);
}

StateCoeffs project_initial_state(const ModeSet& ms, const Tabulated2D& x0,
                                  const QuadratureSpec& quad) {
    const RectDomain& dom = ms.domain;
    const std::size_t need = static_cast<std::size_t>(2 * ms.level + 1);
    if (x0.xs.size() < need || x0.ys.size() < need)
        throw QuadratureUnderResolved("tabulated state needs at least " + std::to_string(need) +
                                      " samples per axis for level " + std::to_string(ms.level));
    if (x0.values.size() != x0.xs.size())
        throw ValidationError("tabulated state values do not match the grid");
    for (const std::vector<double>& row : x0.values)
        if (row.size() != x0.ys.size())
            throw ValidationError("tabulated state values do not match the grid");
    for (std::size_t k = 1; k < x0.xs.size(); ++k)
        if (!(x0.xs[k] > x0.xs[k - 1])) throw ValidationError("tabulated x grid not increasing");
    for (std::size_t k = 1; k < x0.ys.size(); ++k)
        if (!(x0.ys[k] > x0.ys[k - 1])) throw ValidationError("tabulated y grid not increasing");
    const double tolx = 1e-9 * dom.a1, toly = 1e-9 * dom.a2;
    if (x0.xs.front() > tolx || x0.xs.back() < dom.a1 - tolx || x0.ys.front() > toly ||
        x0.ys.back() < dom.a2 - toly)
        throw ValidationError("tabulated state does not cover the domain");
    return project_fn(ms, [&](double x, double y) { return bilinear(x0, x, y); }, quad);
}

StateCoeffs evolve_coeffs(const ModeSet& ms, const StateCoeffs& c, double t) {
    require_sizes(ms, c.values, "evolve");
    if (t < 0.0) throw ValidationError("semigroup runs forward in time only");
    StateCoeffs out;
    out.values.resize(c.values.size());
    for (Eigen::Index a = 0; a < c.values.size(); ++a)
        out.values(a) = c.values(a) * std::exp(ms.flat[static_cast<std::size_t>(a)].lambda * t);
    return out;
}

OutputRecord simulate_outputs(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                              const StateCoeffs& c0, double T, double dt,
                              const QuadratureSpec& quad) {
    require_sizes(ms, c0.values, "simulate");
    if (!(T > 0.0)) throw NonPositiveHorizon("horizon must be positive");
    if (!(dt > 0.0) || dt > T) throw NonPositiveHorizon("time step must lie in (0, T]");
    const long K = std::max<long>(1, std::lround(T / dt));
    const Eigen::MatrixXd V = assemble_value_matrix(dom, suite, ms, quad);

    OutputRecord rec;
    rec.times.resize(static_cast<std::size_t>(K) + 1);
    rec.samples.resize(K + 1, V.rows());
    Eigen::VectorXd ct(c0.values.size());
    for (long k = 0; k <= K; ++k) {
        const double t = (static_cast<double>(k) / static_cast<double>(K)) * T;
        rec.times[static_cast<std::size_t>(k)] = t;
        for (Eigen::Index a = 0; a < ct.size(); ++a)
            ct(a) = c0.values(a) * std::exp(ms.flat[static_cast<std::size_t>(a)].lambda * t);
        rec.samples.row(k) = (V * ct).transpose();
    }
    return rec;
}

OutputRecord add_noise(const OutputRecord& rec, double sigma, std::uint64_t seed) {
    if (sigma < 0.0) throw ValidationError("noise level must be >= 0");
    if (sigma == 0.0) return rec;
    OutputRecord out = rec;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (Eigen::Index k = 0; k < out.samples.rows(); ++k)
        for (Eigen::Index i = 0; i < out.samples.cols(); ++i)
            out.samples(k, i) += sigma * gauss(rng);
    out.noise_sigma = std::hypot(rec.noise_sigma, sigma);
    return out;
}

GradientTrace trace_state_gradient(const RectDomain& dom, const ModeSet& ms, const StateCoeffs& c,
                                   const BoundaryRegion& region, int samples) {
    require_sizes(ms, c.values, "trace");
    validate_region(dom, region);
    if (samples < 2) throw ValidationError("trace needs at least two samples");
    GradientTrace tr;
    tr.region = region;
    tr.arc.resize(static_cast<std::size_t>(samples));
    tr.values.resize(static_cast<std::size_t>(samples));
    const double len = region.length();
    for (int j = 0; j < samples; ++j) {
        // endpoints land exactly on the region ends; rounding in the interior
        // formula must never push a sample outside the region it came from
        double s = j == samples - 1
                       ? region.hi
                       : region.lo + len * static_cast<double>(j) / (samples - 1);
        s = std::clamp(s, region.lo, region.hi);
        tr.arc[static_cast<std::size_t>(j)] = s;
        Vec2 g{0.0, 0.0};
        for (std::size_t a = 0; a < ms.flat.size(); ++a) {
            const Vec2 ga = boundary_trace_gradient(dom, region, ms.flat[a].index, s);
            const double ca = c.values(static_cast<Eigen::Index>(a));
            g[0] += ca * ga[0];
            g[1] += ca * ga[1];
        }
        tr.values[static_cast<std::size_t>(j)] = g;
    }
    return tr;
}

double trace_error_norm_over(const RectDomain& dom, const ModeSet& ms, const Eigen::VectorXd& dc,
                             const std::vector<BoundaryRegion>& segments,
                             const QuadratureSpec& quad) {
    require_sizes(ms, dc, "trace norm");
    const int panels = std::max(1, ms.level);
    double total = 0.0;
    for (const BoundaryRegion& seg : segments) {
        validate_region(dom, seg);
        auto sq = [&](double s) {
            Vec2 g{0.0, 0.0};
            for (std::size_t a = 0; a < ms.flat.size(); ++a) {
                const Vec2 ga = boundary_trace_gradient(dom, seg, ms.flat[a].index, s);
                const double ca = dc(static_cast<Eigen::Index>(a));
                g[0] += ca * ga[0];
                g[1] += ca * ga[1];
            }
            return g[0] * g[0] + g[1] * g[1];
        };
        total += integrate_interval_panels(sq, seg.lo, seg.hi, quad.line_order, panels);
    }
    return std::sqrt(std::max(0.0, total));
}

namespace {

// Full boundary as a segment list, the gamma side split at gamma's endpoints
// so the gamma piece is integrated with identical panels in both norms.
void boundary_segments_split(const RectDomain& dom, const BoundaryRegion& gamma,
                             std::vector<BoundaryRegion>& gamma_part,
                             std::vector<BoundaryRegion>& rest) {
    gamma_part.push_back(gamma);
    const double tiny = 1e-13 * std::max(dom.a1, dom.a2);
    for (Side s : {Side::Bottom, Side::Right, Side::Top, Side::Left}) {
        const double len = side_length(dom, s);
        if (s == gamma.side) {
            if (gamma.lo > tiny) rest.push_back(BoundaryRegion{s, 0.0, gamma.lo});
            if (gamma.hi < len - tiny) rest.push_back(BoundaryRegion{s, gamma.hi, len});
        } else {
            rest.push_back(BoundaryRegion{s, 0.0, len});
        }
    }
}

} // namespace

ErrorNorms error_norms(const RectDomain& dom, const ModeSet& ms, const StateCoeffs& truth,
                       const StateCoeffs& estimate, const BoundaryRegion& gamma,
                       const QuadratureSpec& quad, double spectral_weight_s) {
    require_sizes(ms, truth.values, "error norm");
    require_sizes(ms, estimate.values, "error norm");
    validate_region(dom, gamma);
    Eigen::VectorXd dc = truth.values - estimate.values;
    if (spectral_weight_s != 0.0)
        for (Eigen::Index a = 0; a < dc.size(); ++a)
            dc(a) *= std::pow(1.0 + std::abs(ms.flat[static_cast<std::size_t>(a)].lambda),
                              0.5 * spectral_weight_s);

    std::vector<BoundaryRegion> gamma_part, rest;
    boundary_segments_split(dom, gamma, gamma_part, rest);
    ErrorNorms e;
    e.err_gamma = trace_error_norm_over(dom, ms, dc, gamma_part, quad);
    const double rest_norm = trace_error_norm_over(dom, ms, dc, rest, quad);
    e.err_boundary = std::hypot(e.err_gamma, rest_norm);
    return e;
}

ReconstructionResult reconstruct_gradient(const RectDomain& dom, const SensorSuite& suite,
                                          const ModeSet& ms, const OutputRecord& rec,
                                          const BoundaryRegion& gamma, const QuadratureSpec& quad,
                                          const ReconstructOptions& opts) {
    validate_region(dom, gamma);
    if (suite.sensors.empty()) throw EmptySuite("reconstruction with an empty suite");
    const Eigen::Index q = static_cast<Eigen::Index>(suite.q());
    const Eigen::Index rows = rec.samples.rows();
    if (rec.samples.cols() != q)
        throw HorizonMismatch("record width " + std::to_string(rec.samples.cols()) +
                              " != suite size " + std::to_string(q));
    if (rec.times.size() != static_cast<std::size_t>(rows) || rows < 1)
        throw HorizonMismatch("time grid does not match the sample rows");
    const double T = rec.times.back();
    if (!(T > 0.0)) throw HorizonMismatch("final sample time must be positive");
    if (std::abs(rec.times.front()) > 1e-12 * T)
        throw HorizonMismatch("time grid must start at zero");
    for (std::size_t k = 1; k < rec.times.size(); ++k)
        if (!(rec.times[k] > rec.times[k - 1]))
            throw HorizonMismatch("time grid must be strictly increasing");

    const Eigen::Index M = static_cast<Eigen::Index>(ms.flat.size());
    const Eigen::MatrixXd V = assemble_value_matrix(dom, suite, ms, quad);

    Eigen::MatrixXd A(rows * q, M);
    Eigen::VectorXd b(rows * q);
    for (Eigen::Index k = 0; k < rows; ++k) {
        const double t = rec.times[static_cast<std::size_t>(k)];
        for (Eigen::Index a = 0; a < M; ++a) {
            const double decay = std::exp(ms.flat[static_cast<std::size_t>(a)].lambda * t);
            for (Eigen::Index i = 0; i < q; ++i) A(k * q + i, a) = V(i, a) * decay;
        }
        for (Eigen::Index i = 0; i < q; ++i) b(k * q + i) = rec.samples(k, i);
    }

    double reg = opts.reg_lambda;
    if (reg < 0.0) reg = rec.noise_sigma * rec.noise_sigma * static_cast<double>(rows * q);

    ReconstructionResult res;
    if (reg == 0.0) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
        const Eigen::VectorXd& sv = svd.singularValues();
        const double smax = sv.size() > 0 ? sv(0) : 0.0;
        const double smin = sv.size() > 0 ? sv(sv.size() - 1) : 0.0;
        if (smax == 0.0 || smin <= 1e-12 * smax || sv.size() < M)
            throw SingularSystem("design matrix numerically rank-deficient (sigma_min/sigma_max = " +
                                 std::to_string(smax > 0.0 ? smin / smax : 0.0) + ")");
        res.estimated.values = svd.solve(b);
    } else {
        Eigen::MatrixXd Aug(rows * q + M, M);
        Aug.topRows(rows * q) = A;
        Aug.bottomRows(M) = std::sqrt(reg) * Eigen::MatrixXd::Identity(M, M);
        Eigen::VectorXd baug = Eigen::VectorXd::Zero(rows * q + M);
        baug.head(rows * q) = b;
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Aug, Eigen::ComputeThinU | Eigen::ComputeThinV);
        res.estimated.values = svd.solve(baug);
    }
    res.residual = (A * res.estimated.values - b).norm();

    res.trace_on_gamma = trace_state_gradient(dom, ms, res.estimated, gamma, opts.trace_samples);
    for (Side s : {Side::Bottom, Side::Right, Side::Top, Side::Left})
        res.trace_on_boundary.push_back(trace_state_gradient(
            dom, ms, res.estimated, BoundaryRegion{s, 0.0, side_length(dom, s)},
            opts.trace_samples));

    if (opts.true_coeffs) {
        const ErrorNorms e = error_norms(dom, ms, *opts.true_coeffs, res.estimated, gamma, quad);
        res.err_gamma = e.err_gamma;
        res.err_boundary = e.err_boundary;
    }
    return res;
}

} // namespace gradsense
