// Planar map abstractions: maps, involutions with parametrized fixed sets,
// and reversible systems f with reversor g (f^{-1} = g o f o g).
#ifndef REVLAB_PLANAR_MAP_HPP
#define REVLAB_PLANAR_MAP_HPP

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "revlab/geometry.hpp"

namespace revlab {

struct Box {
    double xmin = -1.0, xmax = 1.0, ymin = -1.0, ymax = 1.0;
    bool contains(const Vec2& v) const {
        return v.x >= xmin && v.x <= xmax && v.y >= ymin && v.y <= ymax;
    }
};

struct PlanarMap {
    std::function<Vec2(const Vec2&)> forward;
    std::function<Mat2(const Vec2&)> jacobian;  // optional (null = use差 differences)
    std::function<Vec2(const Vec2&)> inverse;   // optional
};

// An involution together with a parametrization s -> point of (a branch of)
// its fixed set and a signed distance that vanishes exactly on the fixed set.
struct Involution {
    PlanarMap map;
    std::function<Vec2(double)> fixed_curve;
    double s_min = -1.0;
    double s_max = 1.0;
    std::function<double(const Vec2&)> signed_distance;
};

struct ReversibleSystem {
    std::string name;
    PlanarMap f;
    Involution g;
    Involution h2;  // the composed involution f o g
    Box domain;              // validated box for samples and orbits
    Box sample_box;          // where random test samples are drawn
    double residual_tol = 1e-12;  // expected size of the reversibility residual
    std::function<Vec2(const Vec2&)> wrap;  // optional canonical form (e.g. x mod 2*pi)
    std::map<std::string, double> params;   // parameter echo for reports

    Vec2 canonical(const Vec2& v) const { return wrap ? wrap(v) : v; }
};

struct CheckReport {
    double max_residual = 0.0;
    bool pass = false;
    int skipped = 0;     // samples skipped because an orbit left the domain
    std::string note;
};

// max |g(g(x)) - x| over samples; throws numerical_error naming the sample on
// non-finite output.
CheckReport check_involution(const Involution& g, const std::vector<Vec2>& samples, double tol);

// max |f(g(f(g(x)))) - x| over samples; samples whose images escape the domain
// are skipped and counted.
CheckReport check_reversibility(const ReversibleSystem& sys, const std::vector<Vec2>& samples,
                                double tol);

// Exact Jacobian when the map provides one, otherwise 4-point central
// differences with step h (h <= 0 selects 1e-6 * max(1, |x|)).
Mat2 map_jacobian(const PlanarMap& map, const Vec2& x, double h = 0.0);

// Central-difference Jacobian regardless of an exact one (used as an oracle).
Mat2 fd_jacobian(const PlanarMap& map, const Vec2& x, double h);

// Deterministic uniform samples in a box.
std::vector<Vec2> sample_box(const Box& box, int n, unsigned long long seed);

}  // namespace revlab

#endif
