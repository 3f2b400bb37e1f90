// Rescaling of the conservative resonant flow near rho* (mu + Psi(rho*) = 0)
// to pendulum form dphi/dtau = u, du/dtau = sin(q*phi), and the measured
// sup-norm deviation of the rescaled field from the pendulum field.
#ifndef REVLAB_PENDULUM_HPP
#define REVLAB_PENDULUM_HPP

#include "revlab/resonant_field.hpp"

namespace revlab {

struct PendulumRescaling {
    double rho_star = 0.0;  // root of mu + Psi(rho) = 0
    double u_scale = 0.0;   // rho = rho* + u_scale * u (sign follows A)
    double tau_scale = 0.0; // t = tau * tau_scale, tau_scale = 1/omega > 0
    double mu = 0.0;
};

struct DeviationBox {
    double phi_lo = 0.0, phi_hi = 0.0;  // defaults set from q when both zero
    double u_lo = -1.0, u_hi = 1.0;
    int n_phi = 41, n_u = 41;
};

// Solves the scales; requires mu*Psi_1 < 0, A*Psi_1 > 0 and B = C = 0.
PendulumRescaling solve_pendulum_rescaling(const ResonantParams& params, double mu);

// Rescaled field at (phi, u): exact evaluation of the polar field in the
// rescaled variables; components converge to (u, sin(q*phi)) as mu -> 0.
Vec2 rescaled_field(const ResonantParams& params, const PendulumRescaling& scales,
                    double phi, double u);

// Sup over the box of the componentwise deviation from the pendulum field.
double pendulum_deviation(const ResonantParams& params, double mu, const DeviationBox& box = {});

}  // namespace revlab

#endif
