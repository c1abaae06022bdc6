#include "gradsense/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "gradsense/errors.hpp"

namespace gradsense {

namespace {
const double kPi = std::acos(-1.0);
}

std::size_t ModeSet::flat_index(const ModeIndex& idx) const {
    for (std::size_t k = 0; k < flat.size(); ++k)
        if (flat[k].index == idx) return k;
    throw ModeSetMismatch("mode (" + std::to_string(idx.n) + "," + std::to_string(idx.m) +
                          ") not in mode set of level " + std::to_string(level));
}

ModeSet build_mode_set(const RectDomain& dom, int J, double grouping_tol) {
    if (J < 1) throw ValidationError("truncation level J must be >= 1");
    if (grouping_tol < 0.0) throw ValidationError("grouping tolerance must be >= 0");

    struct Entry {
        ModeIndex idx;
        double lambda;
    };
    std::vector<Entry> all;
    all.reserve(static_cast<std::size_t>(J) * J);
    for (int n = 1; n <= J; ++n)
        for (int m = 1; m <= J; ++m) {
            const double lam = -(n * n / (dom.a1 * dom.a1) + m * m / (dom.a2 * dom.a2)) * kPi * kPi;
            all.push_back({ModeIndex{n, m}, lam});
        }

    // Decreasing eigenvalue (these are negative, so increasing magnitude);
    // lexicographic (n,m) breaks exact ties deterministically.
    std::sort(all.begin(), all.end(), [](const Entry& a, const Entry& b) {
        if (a.lambda != b.lambda) return a.lambda > b.lambda;
        if (a.idx.n != b.idx.n) return a.idx.n < b.idx.n;
        return a.idx.m < b.idx.m;
    });

    ModeSet ms;
    ms.domain = dom;
    ms.level = J;
    ms.grouping_tol = grouping_tol;
    for (const Entry& e : all) {
        bool open_new = ms.groups.empty();
        if (!open_new) {
            const double head = ms.groups.back().lambda;
            const double tol = grouping_tol * std::max(std::abs(head), std::abs(e.lambda));
            open_new = std::abs(e.lambda - head) > tol;
        }
        if (open_new) {
            EigenGroup g;
            g.lambda = e.lambda;
            ms.groups.push_back(g);
        }
        ms.groups.back().members.push_back(e.idx);
        ms.flat.push_back(Mode{e.idx, ms.groups.back().lambda});
    }

    // Members inside a group in lexicographic order (sort above already
    // guarantees it for exact ties; enforce for tolerance-merged ones).
    for (EigenGroup& g : ms.groups)
        std::sort(g.members.begin(), g.members.end(), [](const ModeIndex& a, const ModeIndex& b) {
            if (a.n != b.n) return a.n < b.n;
            return a.m < b.m;
        });

    return ms;
}

bool is_simple_spectrum(const ModeSet& ms) {
    return std::all_of(ms.groups.begin(), ms.groups.end(),
                       [](const EigenGroup& g) { return g.multiplicity() == 1; });
}

namespace {

void check_point(const RectDomain& dom, double x, double y) {
    if (!dom.contains_closed(x, y))
        throw OutOfDomain("point (" + std::to_string(x) + "," + std::to_string(y) +
                          ") outside closed domain [0," + std::to_string(dom.a1) + "]x[0," +
                          std::to_string(dom.a2) + "]");
}

void check_mode(const ModeIndex& idx) {
    if (idx.n < 1 || idx.m < 1) throw ValidationError("mode indices must be >= 1");
}

} // namespace

double eval_eigenfunction(const RectDomain& dom, const ModeIndex& idx, double x, double y) {
    check_mode(idx);
    check_point(dom, x, y);
    const double c = 2.0 / std::sqrt(dom.a1 * dom.a2);
    return c * std::sin(idx.n * kPi * x / dom.a1) * std::sin(idx.m * kPi * y / dom.a2);
}

Vec2 eval_eigengradient(const RectDomain& dom, const ModeIndex& idx, double x, double y) {
    check_mode(idx);
    check_point(dom, x, y);
    const double c = 2.0 / std::sqrt(dom.a1 * dom.a2);
    const double sx = std::sin(idx.n * kPi * x / dom.a1);
    const double cx = std::cos(idx.n * kPi * x / dom.a1);
    const double sy = std::sin(idx.m * kPi * y / dom.a2);
    const double cy = std::cos(idx.m * kPi * y / dom.a2);
    return {c * (idx.n * kPi / dom.a1) * cx * sy, c * (idx.m * kPi / dom.a2) * sx * cy};
}

Vec2 boundary_trace_gradient(const RectDomain& dom, const BoundaryRegion& region,
                             const ModeIndex& idx, double s) {
    validate_region(dom, region);
    if (!region.contains(s))
        throw OutOfRegion("arc coordinate " + std::to_string(s) + " outside [" +
                          std::to_string(region.lo) + "," + std::to_string(region.hi) + "]");
    const Vec2 p = boundary_point(dom, region.side, s);
    return eval_eigengradient(dom, idx, p[0], p[1]);
}

} // namespace gradsense
