// Orbit iteration, monodromy and multipliers of periodic orbits, stability
// classification, and the g-image pairing of non-symmetric orbits.
#ifndef REVLAB_ORBIT_HPP
#define REVLAB_ORBIT_HPP

#include <optional>
#include <string>
#include <vector>

#include "revlab/planar_map.hpp"

namespace revlab {

enum class OrbitClass { elliptic, saddle, sink, source, parabolic, borderline };
enum class SymmetryTag { via_g, via_h2, none };

const char* to_string(OrbitClass c);
const char* to_string(SymmetryTag t);

struct Classification {
    OrbitClass kind = OrbitClass::borderline;
    double angle = 0.0;  // rotation angle for elliptic orbits (|arg of multiplier|)
    double modulus1 = 0.0;
    double modulus2 = 0.0;
};

struct PeriodicOrbit {
    std::vector<Vec2> points;  // points[i+1] = f(points[i]), length = period
    int period = 1;
    Mat2 monodromy;            // product of Jacobians along the orbit
    cplx mult1, mult2;         // eigenvalues of the monodromy
    double jacobian_det = 1.0; // det(monodromy) = mult1 * mult2
    Classification cls;
    SymmetryTag symmetry = SymmetryTag::none;
    double closure_residual = 0.0;
};

struct IterationResult {
    std::vector<Vec2> points;  // x0, f(x0), ..., up to n or the escape point
    bool escaped = false;
    int escape_index = -1;     // first index whose image left the domain
};

// Forward orbit of length n (n+1 points); stops early with the escape index
// if the orbit leaves the validated domain.
IterationResult iterate(const ReversibleSystem& sys, const Vec2& x0, long n);

// Distance honouring the system's canonical form (e.g. cylinder wrap).
double system_distance(const ReversibleSystem& sys, const Vec2& a, const Vec2& b);

// Multiplier-based classification with a collar tol on the moduli.
Classification classify_multipliers(const cplx& l1, const cplx& l2, double tol = 1e-6);

// Product of Jacobians of f along the given points.
Mat2 orbit_monodromy(const ReversibleSystem& sys, const std::vector<Vec2>& points);

// Build a periodic orbit from a candidate point: verifies closure at the given
// period, reduces to the smallest verified period, fills monodromy/multipliers.
// Returns nothing when the closure check fails.
std::optional<PeriodicOrbit> build_periodic_orbit(const ReversibleSystem& sys, const Vec2& x0,
                                                  int period, SymmetryTag tag,
                                                  double closure_tol,
                                                  double classify_tol = 1e-6);

// Image orbit under g with recomputed monodromy. Checks that the image
// multipliers are the inverses of the originals within tol; symmetric orbits
// map to themselves (the same orbit is returned).
PeriodicOrbit g_pair(const ReversibleSystem& sys, const PeriodicOrbit& orbit,
                     double tol = 1e-8);

}  // namespace revlab

#endif
