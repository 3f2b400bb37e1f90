#include "revlab/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "revlab/errors.hpp"

namespace revlab {

const char* to_string(EquilibriumType t) {
    switch (t) {
        case EquilibriumType::center: return "center";
        case EquilibriumType::saddle: return "saddle";
        case EquilibriumType::sink: return "sink";
        case EquilibriumType::source: return "source";
        case EquilibriumType::degenerate: return "degenerate";
    }
    return "?";
}

Mat2 polar_linearization(const ResonantParams& params, double rho, double phi) {
    const double A = params.A, B = params.B, C = params.C;
    const int q = params.q;
    const double s = std::sin(phi), c = std::cos(phi);
    const double rq3 = std::pow(rho, q - 3);
    const double rq2 = rq3 * rho, rq1 = rq2 * rho, rq = rq1 * rho;
    Mat2 J;
    J.a11 = (double(q - 1) * rq2 * (A + (C - B) * rho * rho) + 2.0 * (C - B) * rq) * s;
    J.a12 = rq1 * (A + (C - B) * rho * rho) * c;
    J.a21 = double(q) * (params.psi_sum_derivative(rho) +
                         (double(q - 2) * rq3 * (A + (B + C) * rho * rho) +
                          2.0 * (B + C) * rq1) * c);
    J.a22 = -double(q) * rq2 * (A + (B + C) * rho * rho) * s;
    return J;
}

EquilibriumType classify_equilibrium(const cplx& e1, const cplx& e2, double collar) {
    const double scale = std::max({std::abs(e1), std::abs(e2), 1e-300});
    const double tol = collar * scale;
    const double r1 = e1.real(), r2 = e2.real();
    const bool complex_pair = std::abs(e1.imag()) > tol;
    if (complex_pair) {
        if (std::abs(r1) <= tol) return EquilibriumType::center;
        return (r1 < 0.0) ? EquilibriumType::sink : EquilibriumType::source;
    }
    if (r1 < -tol && r2 < -tol) return EquilibriumType::sink;
    if (r1 > tol && r2 > tol) return EquilibriumType::source;
    if ((r1 < -tol && r2 > tol) || (r1 > tol && r2 < -tol)) return EquilibriumType::saddle;
    return EquilibriumType::degenerate;
}

namespace {

// Radial equation of the symmetric branch: mu + Psi(rho) + sgn*rho^{q-2}(A+(B+C)rho^2).
double symmetric_radial(const ResonantParams& p, double sgn, double rho) {
    return p.mu + p.psi_sum(rho) +
           sgn * std::pow(rho, p.q - 2) * (p.A + (p.B + p.C) * rho * rho);
}

Equilibrium make_equilibrium(const ResonantParams& params, double rho, double phi,
                             double polar_angle, const FindEquilibriaOptions& opts) {
    Equilibrium e;
    e.rho = rho;
    e.phi = wrap_period(phi, two_pi());
    e.polar_angle = wrap_period(polar_angle, two_pi());
    e.linearization = polar_linearization(params, rho, phi);
    auto [l1, l2] = eigenvalues(e.linearization);
    e.eig1 = l1;
    e.eig2 = l2;
    e.type = classify_equilibrium(l1, l2, opts.collar);
    e.symmetric = std::abs(std::sin(phi)) <= opts.angle_tol;
    return e;
}

}  // namespace

std::vector<Equilibrium> find_equilibria(const ResonantParams& params,
                                         const FindEquilibriaOptions& opts) {
    params.validate();
    if (params.psi.empty() || params.psi[0] == 0.0)
        throw validation_error("find_equilibria: Psi_1 must be nonzero");
    const double psi1 = params.psi[0];

    // Asymmetric radius (Eq.-level): rho0^2 = A/(B-C), present only when positive.
    double rho_asym = -1.0;
    if (params.B != params.C) {
        const double r2 = params.A / (params.B - params.C);
        if (r2 > 0.0) rho_asym = std::sqrt(r2);
    }

    double rho_max = opts.rho_max;
    if (rho_max <= 0.0) {
        rho_max = 3.0 * std::sqrt(std::abs(params.mu / psi1));
        if (rho_asym > 0.0) rho_max = std::max(rho_max, 2.0 * rho_asym);
    }

    std::vector<Equilibrium> out;
    if (rho_max <= 0.0) return out;

    // --- symmetric branch: sin(phi) = 0, cos(phi) = sgn ---
    for (double sgn : {1.0, -1.0}) {
        std::vector<double> roots;
        const int n = std::max(2, opts.scan_points);
        double prev_rho = rho_max / double(n);
        double prev_val = symmetric_radial(params, sgn, prev_rho);
        for (int i = 2; i <= n; ++i) {
            const double rho = rho_max * double(i) / double(n);
            const double val = symmetric_radial(params, sgn, rho);
            if (prev_val == 0.0) roots.push_back(prev_rho);
            if ((prev_val < 0.0 && val > 0.0) || (prev_val > 0.0 && val < 0.0)) {
                double lo = prev_rho, hi = rho, flo = prev_val;
                for (int it = 0; it < 200; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const double fm = symmetric_radial(params, sgn, mid);
                    if (fm == 0.0) { lo = hi = mid; break; }
                    if ((flo < 0.0) == (fm < 0.0)) { lo = mid; flo = fm; }
                    else hi = mid;
                    if (hi - lo <= opts.root_tol * hi) break;
                }
                roots.push_back(0.5 * (lo + hi));
            }
            prev_rho = rho;
            prev_val = val;
        }
        for (double rho : roots) {
            const double phi = (sgn > 0.0) ? 0.0 : pi();
            for (int k = 0; k < params.q; ++k) {
                const double polar = (phi + two_pi() * double(k)) / double(params.q);
                out.push_back(make_equilibrium(params, rho, phi, polar, opts));
            }
        }
    }

    // --- asymmetric branch: A + (C-B) rho^2 = 0, sin(phi) != 0 ---
    if (rho_asym > 0.0 && rho_asym <= rho_max) {
        const double denom = std::pow(rho_asym, params.q - 2) *
                             (params.A + (params.B + params.C) * rho_asym * rho_asym);
        if (denom != 0.0) {
            const double cphi = -(params.mu + params.psi_sum(rho_asym)) / denom;
            if (std::abs(cphi) < 1.0) {
                for (double sign_phi : {1.0, -1.0}) {
                    double rho = rho_asym;
                    double phi = sign_phi * std::acos(cphi);
                    // Newton on the full 2x2 polar system seeded at the leading order.
                    bool converged = false;
                    for (int it = 0; it < 60; ++it) {
                        const PolarVelocity v = eval_field_polar(params, rho, phi);
                        const double scale =
                            std::max({std::abs(v.rho_dot), std::abs(v.phi_dot), 1e-300});
                        const Mat2 J = polar_linearization(params, rho, phi);
                        Vec2 step;
                        try {
                            step = J.solve({v.rho_dot, v.phi_dot});
                        } catch (const std::runtime_error&) {
                            break;
                        }
                        rho -= step.x;
                        phi -= step.y;
                        if (!(rho > 0.0)) break;
                        if (scale <= 1e-14 * std::max(1.0, J.norm_inf() * rho) ||
                            (std::abs(step.x) <= 1e-15 * rho && std::abs(step.y) <= 1e-15)) {
                            converged = true;
                            break;
                        }
                    }
                    if (converged && rho > 0.0 && std::abs(std::sin(phi)) > opts.angle_tol) {
                        out.push_back(make_equilibrium(params, rho, phi, phi / double(params.q), opts));
                    }
                }
            }
        }
    }

    std::sort(out.begin(), out.end(), [](const Equilibrium& a, const Equilibrium& b) {
        if (a.rho != b.rho) return a.rho < b.rho;
        return a.polar_angle < b.polar_angle;
    });
    return out;
}

}  // namespace revlab
