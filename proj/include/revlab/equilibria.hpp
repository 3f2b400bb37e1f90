// Equilibria of the polar normal-form flow: the symmetric family at
// sin(phi) = 0 (2q plane points) and, in the degenerate case B != C, the
// asymmetric pair at rho^2 = A/(B-C).
#ifndef REVLAB_EQUILIBRIA_HPP
#define REVLAB_EQUILIBRIA_HPP

#include <vector>

#include "revlab/geometry.hpp"
#include "revlab/resonant_field.hpp"

namespace revlab {

enum class EquilibriumType { center, saddle, sink, source, degenerate };

const char* to_string(EquilibriumType t);

struct Equilibrium {
    double rho = 0.0;
    double phi = 0.0;          // rescaled angle, phi = q * polar_angle (mod 2*pi)
    double polar_angle = 0.0;  // angle of the plane point z = rho * e^{i polar_angle}
    Mat2 linearization;        // Jacobian of the (rho, phi) field at the root
    cplx eig1, eig2;
    EquilibriumType type = EquilibriumType::degenerate;
    bool symmetric = false;    // |sin(phi)| <= angle tolerance

    cplx location() const { return std::polar(rho, polar_angle); }
};

struct FindEquilibriaOptions {
    double rho_max = 0.0;      // 0 = auto: 3*sqrt(|mu/Psi_1|), widened for the asymmetric radius
    int scan_points = 400;
    double root_tol = 1e-15;   // relative tolerance of the radial bisection
    double angle_tol = 1e-10;  // |sin(phi)| threshold for the symmetric tag
    double collar = 1e-9;      // relative collar on eigenvalue real parts
};

// Analytic Jacobian of the (rho, phi) field (phi rescaled) at a point.
Mat2 polar_linearization(const ResonantParams& params, double rho, double phi);

// Classify from the linearization eigenvalues with a relative collar.
EquilibriumType classify_equilibrium(const cplx& e1, const cplx& e2, double collar);

// All equilibria with rho > 0, sorted by (rho, polar_angle). Requires Psi_1 != 0.
std::vector<Equilibrium> find_equilibria(const ResonantParams& params,
                                         const FindEquilibriaOptions& opts = {});

}  // namespace revlab

#endif
