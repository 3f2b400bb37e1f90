// The truncated resonant normal-form vector field near a p:q elliptic point,
//   dz/dt = i*mu*z + i*sum_j Psi_j |z|^{2j} z + i*A*conj(z)^{q-1}
//           + i*B*z^{q+1} + i*C*z*conj(z)^q,
// its polar form, analytic Jacobian/divergence, and the time-1 map composed
// with the rigid rotation by 2*pi*p/q.
#ifndef REVLAB_RESONANT_FIELD_HPP
#define REVLAB_RESONANT_FIELD_HPP

#include <vector>

#include "revlab/geometry.hpp"
#include "revlab/ode.hpp"

namespace revlab {

struct ResonantParams {
    int p = 1;
    int q = 5;
    double mu = 0.0;
    std::vector<double> psi = {1.0};  // Psi_1, Psi_2, ...
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;

    // Throws validation_error unless q >= 5, gcd(p,q) == 1, all values finite.
    void validate() const;

    bool conservative() const { return B == 0.0 && C == 0.0; }
    double rotation_angle() const { return two_pi() * double(p) / double(q); }

    // Psi(rho) = sum_j Psi_j rho^{2j} and its derivative.
    double psi_sum(double rho) const;
    double psi_sum_derivative(double rho) const;
};

struct PolarVelocity {
    double rho_dot = 0.0;
    double phi_dot = 0.0;
};

// Cartesian field evaluation; z finite required.
cplx eval_field_cartesian(const ResonantParams& params, cplx z);

// Polar evaluation in the rescaled angle phi = q * (polar angle of z):
//   rho_dot = rho^{q-1} (A + (C-B) rho^2) sin(phi)
//   phi_dot = q [ mu + Psi(rho) + rho^{q-2} (A + (B+C) rho^2) cos(phi) ]
// Requires rho > 0.
PolarVelocity eval_field_polar(const ResonantParams& params, double rho, double phi);

// Planar divergence of the field, closed form 2*Re(dV/dz).
double divergence_cartesian(const ResonantParams& params, cplx z);

// Real 2x2 Jacobian of the planar field at z (exact, via Wirtinger derivatives).
Mat2 field_jacobian(const ResonantParams& params, cplx z);

// Time-t flow map of the field.
cplx integrate_flow(const ResonantParams& params, cplx z0, double t,
                    const IntegratorOptions& opt = {});

// Flow map together with the tangent map (variational integration).
struct FlowResult {
    cplx z;
    Mat2 jacobian;
};
FlowResult integrate_flow_with_jacobian(const ResonantParams& params, cplx z0, double t,
                                        const IntegratorOptions& opt = {});

// T = R_{2 pi p / q} composed with the time-1 flow map.
cplx poincare_map(const ResonantParams& params, cplx z, const IntegratorOptions& opt = {});
FlowResult poincare_map_with_jacobian(const ResonantParams& params, cplx z,
                                      const IntegratorOptions& opt = {});

}  // namespace revlab

#endif
