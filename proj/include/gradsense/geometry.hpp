#pragma once

#include <array>
#include <cmath>
#include <string>

#include "gradsense/errors.hpp"

namespace gradsense {

using Vec2 = std::array<double, 2>;

// Open rectangle ]0,a1[ x ]0,a2[ with homogeneous Dirichlet boundary.
struct RectDomain {
    double a1 = 1.0;
    double a2 = 1.0;

    RectDomain() = default;
    RectDomain(double a1_, double a2_) : a1(a1_), a2(a2_) {
        if (!(a1 > 0.0) || !(a2 > 0.0))
            throw NonPositiveDomain("domain side lengths must be positive, got a1=" +
                                    std::to_string(a1) + " a2=" + std::to_string(a2));
    }

    bool contains_closed(double x, double y) const {
        return x >= 0.0 && x <= a1 && y >= 0.0 && y <= a2;
    }
    bool contains_open(double x, double y) const {
        return x > 0.0 && x < a1 && y > 0.0 && y < a2;
    }
};

enum class Side { Bottom, Right, Top, Left };

std::string side_name(Side s);
Side side_from_name(const std::string& name);

// Length of a side's parameter interval: a1 for bottom/top, a2 for left/right.
inline double side_length(const RectDomain& dom, Side s) {
    return (s == Side::Bottom || s == Side::Top) ? dom.a1 : dom.a2;
}

// Sub-segment [lo,hi] of one side of the boundary, parameterized by arc
// length s from the side's low corner (x for bottom/top, y for left/right).
struct BoundaryRegion {
    Side side = Side::Top;
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double s) const { return s >= lo && s <= hi; }
    double length() const { return hi - lo; }
};

// Rejects empty or reversed intervals and intervals leaving the side.
inline void validate_region(const RectDomain& dom, const BoundaryRegion& r) {
    const double len = side_length(dom, r.side);
    if (!(r.lo >= 0.0) || !(r.hi <= len) || !(r.lo < r.hi))
        throw ValidationError("boundary region [" + std::to_string(r.lo) + "," +
                              std::to_string(r.hi) + "] invalid on side " +
                              side_name(r.side) + " of length " + std::to_string(len));
}

// Maps the arc coordinate of a region's side to a boundary point.
inline Vec2 boundary_point(const RectDomain& dom, Side side, double s) {
    switch (side) {
        case Side::Bottom: return {s, 0.0};
        case Side::Top:    return {s, dom.a2};
        case Side::Left:   return {0.0, s};
        case Side::Right:  return {dom.a1, s};
    }
    return {0.0, 0.0};
}

// Unit tangent along increasing arc coordinate and outward unit normal.
inline Vec2 side_tangent(Side side) {
    switch (side) {
        case Side::Bottom:
        case Side::Top:    return {1.0, 0.0};
        case Side::Left:
        case Side::Right:  return {0.0, 1.0};
    }
    return {0.0, 0.0};
}

inline Vec2 side_outward_normal(Side side) {
    switch (side) {
        case Side::Bottom: return {0.0, -1.0};
        case Side::Top:    return {0.0, 1.0};
        case Side::Left:   return {-1.0, 0.0};
        case Side::Right:  return {1.0, 0.0};
    }
    return {0.0, 0.0};
}

// Distance from a point to the closed segment described by a region.
double distance_to_region(const RectDomain& dom, const BoundaryRegion& r, double x, double y);

// Largest distance from any point of the closed rectangle to the region's
// segment; attained at a corner because the distance is convex.
double max_distance_to_region(const RectDomain& dom, const BoundaryRegion& r);

} // namespace gradsense
