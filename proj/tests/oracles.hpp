#pragma once

// Reference computations the test suites compare the library against. None of
// this uses the library's quadrature, spectral, or simulation code: closed
// forms, dense trapezoid/Simpson sums, and an explicit finite-difference heat
// solver, so a shared bug cannot cancel out.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <utility>
#include <vector>

namespace oracle {

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Dirichlet eigenpairs on ]0,a1[ x ]0,a2[.
inline double lambda_nm(double a1, double a2, int n, int m) {
    return -(n * n / (a1 * a1) + m * m / (a2 * a2)) * kPi * kPi;
}

inline double phi(double a1, double a2, int n, int m, double x, double y) {
    const double c = 2.0 / std::sqrt(a1 * a2);
    return c * std::sin(n * kPi * x / a1) * std::sin(m * kPi * y / a2);
}

inline double phi_dx(double a1, double a2, int n, int m, double x, double y) {
    const double c = 2.0 / std::sqrt(a1 * a2);
    return c * (n * kPi / a1) * std::cos(n * kPi * x / a1) * std::sin(m * kPi * y / a2);
}

inline double phi_dy(double a1, double a2, int n, int m, double x, double y) {
    const double c = 2.0 / std::sqrt(a1 * a2);
    return c * (m * kPi / a2) * std::sin(n * kPi * x / a1) * std::cos(m * kPi * y / a2);
}

// Sum of the gradient components, the entry a pointwise gradient sensor reads.
inline double grad_sum(double a1, double a2, int n, int m, double x, double y) {
    return phi_dx(a1, a2, n, m, x, y) + phi_dy(a1, a2, n, m, x, y);
}

// Uniform trapezoid sum with N panels. For products of the eigenfunctions the
// integrand is a trigonometric polynomial vanishing at the ends, where the
// trapezoid rule is exact once N exceeds the bandwidth.
inline double trapezoid_interval(const std::function<double(double)>& f, double a, double b,
                                 int N) {
    const double h = (b - a) / N;
    double sum = 0.5 * (f(a) + f(b));
    for (int k = 1; k < N; ++k) sum += f(a + k * h);
    return sum * h;
}

inline double trapezoid_rect(const std::function<double(double, double)>& f, double ax, double bx,
                             double ay, double by, int N) {
    return trapezoid_interval(
        [&](double x) {
            return trapezoid_interval([&](double y) { return f(x, y); }, ay, by, N);
        },
        ax, bx, N);
}

// Composite Simpson with N (even) intervals; used for time integrals of
// smooth exponentials where fourth-order accuracy is needed.
inline double simpson_interval(const std::function<double(double)>& f, double a, double b, int N) {
    if (N % 2) ++N;
    const double h = (b - a) / N;
    double sum = f(a) + f(b);
    for (int k = 1; k < N; ++k) sum += f(a + k * h) * (k % 2 ? 4.0 : 2.0);
    return sum * h / 3.0;
}

// Explicit finite-difference heat solver: 5-point Laplacian on an
// (nx+1) x (ny+1) lattice over [0,a1] x [0,a2], zero Dirichlet boundary,
// forward Euler at `safety` times the stability limit. Returns the solution
// sampled at K+1 uniform times at the requested lattice nodes.
struct FDSeries {
    std::vector<double> times;                 // K+1 sample times, 0..T
    std::vector<std::vector<double>> values;   // values[sample][probe]
};

inline FDSeries fd_heat_solve(double a1, double a2, int nx, int ny,
                              const std::function<double(double, double)>& u0,
                              const std::vector<std::array<int, 2>>& probes, double T, int K,
                              double safety = 0.125) {
    const double h1 = a1 / nx;
    const double h2 = a2 / ny;
    const double dt_max = 1.0 / (2.0 * (1.0 / (h1 * h1) + 1.0 / (h2 * h2)));
    const double tau = T / K;
    const int steps = static_cast<int>(std::ceil(tau / (safety * dt_max)));
    const double dt = tau / steps;
    const double cx = dt / (h1 * h1);
    const double cy = dt / (h2 * h2);

    const int W = ny + 1;
    std::vector<double> u(static_cast<std::size_t>(nx + 1) * W, 0.0);
    std::vector<double> v(u.size(), 0.0);
    for (int i = 1; i < nx; ++i)
        for (int j = 1; j < ny; ++j) u[static_cast<std::size_t>(i) * W + j] = u0(i * h1, j * h2);

    FDSeries out;
    auto record = [&](double t) {
        out.times.push_back(t);
        std::vector<double> row;
        row.reserve(probes.size());
        for (const auto& p : probes) row.push_back(u[static_cast<std::size_t>(p[0]) * W + p[1]]);
        out.values.push_back(std::move(row));
    };
    record(0.0);
    for (int k = 1; k <= K; ++k) {
        for (int s = 0; s < steps; ++s) {
            for (int i = 1; i < nx; ++i) {
                const std::size_t row = static_cast<std::size_t>(i) * W;
                for (int j = 1; j < ny; ++j) {
                    const std::size_t c = row + j;
                    v[c] = u[c] + cx * (u[c + W] - 2.0 * u[c] + u[c - W]) +
                           cy * (u[c + 1] - 2.0 * u[c] + u[c - 1]);
                }
            }
            u.swap(v);
        }
        record(k * tau);
    }
    return out;
}

} // namespace oracle
