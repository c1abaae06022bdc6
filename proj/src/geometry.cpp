#include "gradsense/geometry.hpp"

#include <algorithm>

namespace gradsense {

std::string side_name(Side s) {
    switch (s) {
        case Side::Bottom: return "bottom";
        case Side::Right:  return "right";
        case Side::Top:    return "top";
        case Side::Left:   return "left";
    }
    return "?";
}

Side side_from_name(const std::string& name) {
    if (name == "bottom") return Side::Bottom;
    if (name == "right") return Side::Right;
    if (name == "top") return Side::Top;
    if (name == "left") return Side::Left;
    throw ParseError("unknown side '" + name + "' (expected bottom/right/top/left)");
}

double distance_to_region(const RectDomain& dom, const BoundaryRegion& r, double x, double y) {
    const Vec2 p0 = boundary_point(dom, r.side, r.lo);
    const Vec2 p1 = boundary_point(dom, r.side, r.hi);
    // Segments are axis-aligned: clamp the running coordinate, then measure.
    const double dx = p1[0] - p0[0];
    const double dy = p1[1] - p0[1];
    const double len2 = dx * dx + dy * dy;
    double t = ((x - p0[0]) * dx + (y - p0[1]) * dy) / len2;
    t = std::clamp(t, 0.0, 1.0);
    const double cx = p0[0] + t * dx;
    const double cy = p0[1] + t * dy;
    return std::hypot(x - cx, y - cy);
}

double max_distance_to_region(const RectDomain& dom, const BoundaryRegion& r) {
    const double xs[2] = {0.0, dom.a1};
    const double ys[2] = {0.0, dom.a2};
    double best = 0.0;
    for (double x : xs)
        for (double y : ys) best = std::max(best, distance_to_region(dom, r, x, y));
    return best;
}

} // namespace gradsense
