// Symmetric periodic-orbit search: scan a symmetry-line window, bracket sign
// changes of the signed distance from f^k(curve(s)) to a target symmetry
// line, refine by bisection, and verify the implied period by iteration.
#ifndef REVLAB_SYMMETRY_SEARCH_HPP
#define REVLAB_SYMMETRY_SEARCH_HPP

#include <vector>

#include "revlab/orbit.hpp"
#include "revlab/planar_map.hpp"

namespace revlab {

enum class InvolutionChoice { g, h2 };

struct SymmetrySearchWindow {
    InvolutionChoice source = InvolutionChoice::g;
    double s_lo = -1.0;
    double s_hi = 1.0;
    int half_period = 1;       // k >= 1: distances of f^k(curve(s)) are scanned
    int scan_points = 512;
    double refine_tol = 1e-12; // bisection tolerance in the curve parameter
    double closure_tol = 1e-9; // accepted |f^N x - x| for a verified orbit
    double classify_tol = 1e-6;
    Vec2 curve_shift{0.0, 0.0}; // offset onto another branch of the fixed set

    void validate() const;
};

// All symmetric periodic orbits found in the window, searched against both
// target symmetry lines, de-duplicated, sorted by (period, first point).
std::vector<PeriodicOrbit> find_symmetric_periodic(const ReversibleSystem& sys,
                                                   const SymmetrySearchWindow& window);

// Period implied by the two symmetry lines: source=g,target=g -> 2k;
// g->h2 -> 2k-1; h2->h2 -> 2k; h2->g -> 2k+1.
int two_line_period(InvolutionChoice source, InvolutionChoice target, int k);

}  // namespace revlab

#endif
