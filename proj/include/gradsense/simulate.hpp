#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <vector>

#include "gradsense/sensing.hpp"
#include "gradsense/spectral.hpp"

namespace gradsense {

// Spectral coefficients of a state, flat mode order of one ModeSet.
struct StateCoeffs {
    Eigen::VectorXd values;
};

// Uniformly sampled sensor outputs: samples(k, i) = y_i(t_k).
struct OutputRecord {
    std::vector<double> times; // t_0 = 0 < ... < t_K = T
    Eigen::MatrixXd samples;   // (K+1) x q
    double noise_sigma = 0.0;
};

// Gradient trace sampled along one boundary segment.
struct GradientTrace {
    BoundaryRegion region;
    std::vector<double> arc;  // sample arc coordinates, within [lo,hi]
    std::vector<Vec2> values; // gradient at each sample
};

struct ReconstructionResult {
    StateCoeffs estimated;
    double residual = 0.0; // sqrt(sum_k |y_k - yhat_k|^2)
    GradientTrace trace_on_gamma;
    std::vector<GradientTrace> trace_on_boundary; // one segment per side
    std::optional<double> err_gamma;              // set in diagnostic mode
    std::optional<double> err_boundary;
};

// L2 projection of an initial state onto the mode set. The analytic overload
// integrates with the tensor rule; the tabulated overload interpolates the
// samples bilinearly and requires at least 2*J+1 grid points per axis
// (two samples per half-wave at level J), else QuadratureUnderResolved.
StateCoeffs project_initial_state(const ModeSet& ms, const std::function<double(double, double)>& x0,
                                  const QuadratureSpec& quad);
StateCoeffs project_initial_state(const ModeSet& ms, const Tabulated2D& x0,
                                  const QuadratureSpec& quad);

// Coefficients advanced by the diagonal semigroup: c_k(t) = e^{lambda_k t} c_k.
StateCoeffs evolve_coeffs(const ModeSet& ms, const StateCoeffs& c, double t);

// Outputs at K+1 uniform times covering [0,T], K = round(T/dt) >= 1, so both
// endpoints are sampled exactly. NonPositiveHorizon unless 0 < dt <= T.
OutputRecord simulate_outputs(const RectDomain& dom, const SensorSuite& suite, const ModeSet& ms,
                              const StateCoeffs& c0, double T, double dt,
                              const QuadratureSpec& quad);

// Additive iid Gaussian noise on every sample, deterministic per seed.
// sigma = 0 returns the record unchanged. Negative sigma is invalid.
OutputRecord add_noise(const OutputRecord& rec, double sigma, std::uint64_t seed);

struct ReconstructOptions {
    double reg_lambda = 0.0; // Tikhonov weight; <0 selects sigma^2 * sample count
    int trace_samples = 201; // per segment
    std::optional<StateCoeffs> true_coeffs; // diagnostic mode
};

// Least-squares inversion of the sampled outputs for the initial
// coefficients (Tikhonov-regularized when reg_lambda > 0), followed by the
// boundary map: gradient traces of the reconstructed state on gamma and on
// all four sides. err_gamma/err_boundary are L2 line-integral norms of the
// trace error against true_coeffs when provided; the gamma side is split at
// gamma's endpoints so err_gamma <= err_boundary holds by construction.
// SingularSystem when reg_lambda = 0 and the design matrix is numerically
// rank-deficient; HorizonMismatch when the record's time grid or width is
// inconsistent with the suite.
ReconstructionResult reconstruct_gradient(const RectDomain& dom, const SensorSuite& suite,
                                          const ModeSet& ms, const OutputRecord& rec,
                                          const BoundaryRegion& gamma, const QuadratureSpec& quad,
                                          const ReconstructOptions& opts = {});

// Trace of the state with given coefficients on one region (helper shared by
// reconstruction and tests).
GradientTrace trace_state_gradient(const RectDomain& dom, const ModeSet& ms, const StateCoeffs& c,
                                   const BoundaryRegion& region, int samples);

struct ErrorNorms {
    double err_gamma = 0.0;
    double err_boundary = 0.0;
};

// L2-type line-integral norms of the gradient-trace discrepancy between two
// coefficient vectors, on gamma and on the whole boundary. spectral_weight_s
// scales each modal coefficient difference by (1+|lambda|)^{s/2} before
// tracing (s = 0 is the plain norm). ModeSetMismatch on size mismatch.
ErrorNorms error_norms(const RectDomain& dom, const ModeSet& ms, const StateCoeffs& truth,
                       const StateCoeffs& estimate, const BoundaryRegion& gamma,
                       const QuadratureSpec& quad, double spectral_weight_s = 0.0);

// Norm over an explicit segment list (the boundary norm uses the four full
// sides, splitting the gamma side at gamma's endpoints).
double trace_error_norm_over(const RectDomain& dom, const ModeSet& ms, const Eigen::VectorXd& dc,
                             const std::vector<BoundaryRegion>& segments, const QuadratureSpec& quad);

} // namespace gradsense
