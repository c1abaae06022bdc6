#pragma once

#include <functional>
#include <vector>

#include "gradsense/errors.hpp"

namespace gradsense {

// Node/weight pairs of the n-point Gauss-Legendre rule on [-1,1].
// Cached per order; exact for polynomials of degree 2n-1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int n);

// Per-axis order for area integrals and per-segment order for line integrals.
// The default for truncation level J resolves products of eigenfunction
// factors up to mode J against smooth densities.
struct QuadratureSpec {
    int order = 8;
    int line_order = 8;

    QuadratureSpec() = default;
    QuadratureSpec(int order_, int line_order_) : order(order_), line_order(line_order_) {
        if (order < 2 || line_order < 2)
            throw ValidationError("quadrature order must be >= 2");
    }

    static QuadratureSpec for_level(int J) {
        const int n = 2 * J + 2;
        return QuadratureSpec(n, n);
    }
};

// Integral of f over [a,b], single Gauss panel of the given order.
double integrate_interval(const std::function<double(double)>& f, double a, double b, int order);

// Integral of f over [a,b] split into `panels` equal Gauss panels.
double integrate_interval_panels(const std::function<double(double)>& f, double a, double b,
                                 int order, int panels);

// Tensor-product integral of f over [ax,bx] x [ay,by].
double integrate_rect(const std::function<double(double, double)>& f, double ax, double bx,
                      double ay, double by, int order);

} // namespace gradsense
