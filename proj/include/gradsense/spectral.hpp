#pragma once

#include <cstddef>
#include <vector>

#include "gradsense/geometry.hpp"
#include "gradsense/quadrature.hpp"

namespace gradsense {

// Index (n,m), n,m >= 1, of the Dirichlet-Laplacian eigenfunction
//   phi_nm(x,y) = 2/sqrt(a1*a2) * sin(n*pi*x/a1) * sin(m*pi*y/a2)
// with eigenvalue lambda_nm = -(n^2/a1^2 + m^2/a2^2) * pi^2 < 0.
struct ModeIndex {
    int n = 1;
    int m = 1;
    friend bool operator==(const ModeIndex&, const ModeIndex&) = default;
};

struct Mode {
    ModeIndex index;
    double lambda = 0.0;
};

// Modes sharing one eigenvalue up to the grouping tolerance; `multiplicity`
// is the group size r_n.
struct EigenGroup {
    double lambda = 0.0;
    std::vector<ModeIndex> members;
    int multiplicity() const { return static_cast<int>(members.size()); }
};

// All J^2 modes with n,m in 1..J, partitioned into eigenvalue groups sorted
// by decreasing eigenvalue (groups closest to zero first). The flat mode
// order (concatenation of groups) indexes coefficient vectors everywhere.
struct ModeSet {
    RectDomain domain;
    int level = 0;                 // truncation J
    double grouping_tol = 1e-9;
    std::vector<EigenGroup> groups;

    std::size_t mode_count() const { return static_cast<std::size_t>(level) * level; }

    // Flat views, filled by build_mode_set in group order.
    std::vector<Mode> flat;
    std::size_t flat_index(const ModeIndex& idx) const; // throws ModeSetMismatch if absent
};

// Two modes share a group iff |la - lb| <= grouping_tol * max(|la|, |lb|).
ModeSet build_mode_set(const RectDomain& dom, int J, double grouping_tol = 1e-9);

// True iff every group has multiplicity 1.
bool is_simple_spectrum(const ModeSet& ms);

// Point evaluation on the closed rectangle; OutOfDomain outside it.
double eval_eigenfunction(const RectDomain& dom, const ModeIndex& idx, double x, double y);

// Gradient (d/dx, d/dy) at a point of the closed rectangle.
Vec2 eval_eigengradient(const RectDomain& dom, const ModeIndex& idx, double x, double y);

// Gradient trace on a boundary region at arc coordinate s; same code path as
// eval_eigengradient at the mapped point. OutOfRegion if s outside [lo,hi].
Vec2 boundary_trace_gradient(const RectDomain& dom, const BoundaryRegion& region,
                             const ModeIndex& idx, double s);

} // namespace gradsense
