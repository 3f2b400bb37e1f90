#include "revlab/pendulum.hpp"

#include <cmath>

#include "revlab/errors.hpp"

namespace revlab {

PendulumRescaling solve_pendulum_rescaling(const ResonantParams& params, double mu) {
    params.validate();
    if (params.psi.empty() || params.psi[0] == 0.0)
        throw validation_error("pendulum rescaling: Psi_1 must be nonzero");
    const double psi1 = params.psi[0];
    if (!(mu * psi1 < 0.0))
        throw validation_error("pendulum rescaling: requires mu * Psi_1 < 0");
    if (!(params.A * psi1 > 0.0))
        throw validation_error("pendulum rescaling: requires A * Psi_1 > 0");
    if (!params.conservative())
        throw validation_error("pendulum rescaling: requires B = C = 0");

    // rho*: bisection on mu + Psi(rho) over (0, 3*sqrt(|mu/Psi_1|)]
    const double cap = 3.0 * std::sqrt(std::abs(mu / psi1));
    double lo = 0.0, hi = cap;
    double flo = mu;
    if (!((mu + params.psi_sum(cap)) * flo < 0.0))
        throw numerical_error("pendulum rescaling: failed to bracket rho*");
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = mu + params.psi_sum(mid);
        if (fm == 0.0) { lo = hi = mid; break; }
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
        if (hi - lo <= 1e-16 * hi) break;
    }
    PendulumRescaling r;
    r.mu = mu;
    r.rho_star = 0.5 * (lo + hi);

    const double dpsi = params.psi_sum_derivative(r.rho_star);
    const double rq1 = std::pow(r.rho_star, params.q - 1);
    const double omega_sq = params.A * dpsi * rq1;
    if (!(omega_sq > 0.0))
        throw numerical_error("pendulum rescaling: non-positive time scale");
    const double omega = std::sqrt(omega_sq);
    r.tau_scale = 1.0 / omega;
    r.u_scale = params.A * rq1 / omega;
    return r;
}

Vec2 rescaled_field(const ResonantParams& params, const PendulumRescaling& s, double phi,
                    double u) {
    const double rho = s.rho_star + s.u_scale * u;
    if (!(rho > 0.0))
        throw domain_error("rescaled_field: u range leaves rho > 0");
    const double omega = 1.0 / s.tau_scale;
    const double qphi = params.q * phi;
    const double dphi = (s.mu + params.psi_sum(rho) +
                         params.A * std::pow(rho, params.q - 2) * std::cos(qphi)) / omega;
    const double du = params.A * std::pow(rho, params.q - 1) * std::sin(qphi) /
                      (s.u_scale * omega);
    return {dphi, du};
}

double pendulum_deviation(const ResonantParams& params, double mu, const DeviationBox& box_in) {
    ResonantParams p = params;
    p.mu = mu;
    const PendulumRescaling s = solve_pendulum_rescaling(p, mu);

    DeviationBox box = box_in;
    if (box.phi_lo == 0.0 && box.phi_hi == 0.0) {
        box.phi_lo = -pi() / double(p.q);
        box.phi_hi = pi() / double(p.q);
    }

    double sup = 0.0;
    for (int i = 0; i < box.n_phi; ++i) {
        const double phi = box.phi_lo + (box.phi_hi - box.phi_lo) * double(i) / double(box.n_phi - 1);
        for (int j = 0; j < box.n_u; ++j) {
            const double u = box.u_lo + (box.u_hi - box.u_lo) * double(j) / double(box.n_u - 1);
            const Vec2 v = rescaled_field(p, s, phi, u);
            const double d = std::max(std::abs(v.x - u), std::abs(v.y - std::sin(p.q * phi)));
            sup = std::max(sup, d);
        }
    }
    return sup;
}

}  // namespace revlab
