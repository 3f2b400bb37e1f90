#include "revlab/resonant_field.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "revlab/errors.hpp"

namespace revlab {

void ResonantParams::validate() const {
    if (q < 5) throw validation_error("ResonantParams: q must be >= 5, got " + std::to_string(q));
    if (std::gcd(p, q) != 1)
        throw validation_error("ResonantParams: p and q must be coprime, got p=" +
                               std::to_string(p) + " q=" + std::to_string(q));
    if (!std::isfinite(mu) || !std::isfinite(A) || !std::isfinite(B) || !std::isfinite(C))
        throw validation_error("ResonantParams: non-finite coefficient");
    for (double v : psi)
        if (!std::isfinite(v)) throw validation_error("ResonantParams: non-finite Psi coefficient");
}

double ResonantParams::psi_sum(double rho) const {
    const double r2 = rho * rho;
    double acc = 0.0;
    for (std::size_t j = psi.size(); j-- > 0;) acc = acc * r2 + psi[j];
    return acc * r2;
}

double ResonantParams::psi_sum_derivative(double rho) const {
    const double r2 = rho * rho;
    double acc = 0.0;
    for (std::size_t j = psi.size(); j-- > 0;) acc = acc * r2 + double(2 * (j + 1)) * psi[j];
    return acc * rho;
}

cplx eval_field_cartesian(const ResonantParams& params, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error("eval_field_cartesian: non-finite input");
    const cplx zc = std::conj(z);
    const double r2 = std::norm(z);
    cplx zcq2 = 1.0;  // conj(z)^(q-2)
    for (int k = 0; k < params.q - 2; ++k) zcq2 *= zc;
    const cplx zcq1 = zcq2 * zc;       // conj(z)^(q-1)
    const cplx zcq = zcq1 * zc;        // conj(z)^q
    cplx zq1 = 1.0;                    // z^(q+1)
    for (int k = 0; k < params.q + 1; ++k) zq1 *= z;

    cplx v = params.mu * z + params.psi_sum(std::sqrt(r2)) * z + params.A * zcq1 +
             params.B * zq1 + params.C * z * zcq;
    return cplx(0.0, 1.0) * v;
}

PolarVelocity eval_field_polar(const ResonantParams& params, double rho, double phi) {
    if (!(rho > 0.0)) throw domain_error("eval_field_polar: rho must be positive");
    const double rq2 = std::pow(rho, params.q - 2);
    PolarVelocity v;
    v.rho_dot = rq2 * rho * (params.A + (params.C - params.B) * rho * rho) * std::sin(phi);
    v.phi_dot = params.q * (params.mu + params.psi_sum(rho) +
                            rq2 * (params.A + (params.B + params.C) * rho * rho) * std::cos(phi));
    return v;
}

namespace {

// Wirtinger derivatives of the field: dV/dz and dV/dzbar.
struct WirtingerPair {
    cplx dz;
    cplx dzbar;
};

WirtingerPair wirtinger(const ResonantParams& params, cplx z) {
    const cplx zc = std::conj(z);
    const double r2 = std::norm(z);

    // s1 = sum_j Psi_j (j+1) r2^j,  s2 = sum_j Psi_j j r2^{j-1}  (j from 1)
    double s1 = 0.0, s2 = 0.0;
    {
        double r2jm1 = 1.0;  // r2^{j-1}
        for (std::size_t idx = 0; idx < params.psi.size(); ++idx) {
            const double j = double(idx + 1);
            s2 += params.psi[idx] * j * r2jm1;
            r2jm1 *= r2;  // now r2^j
            s1 += params.psi[idx] * (j + 1.0) * r2jm1;
        }
    }

    cplx zq = 1.0, zcq2 = 1.0;
    for (int k = 0; k < params.q; ++k) zq *= z;
    for (int k = 0; k < params.q - 2; ++k) zcq2 *= zc;
    const cplx zcq1 = zcq2 * zc;

    WirtingerPair w;
    const cplx iu(0.0, 1.0);
    w.dz = iu * (params.mu + s1 + params.B * double(params.q + 1) * zq +
                 params.C * zcq1 * zc);
    w.dzbar = iu * (s2 * z * z + params.A * double(params.q - 1) * zcq2 +
                    params.C * double(params.q) * z * zcq1);
    return w;
}

}  // namespace

double divergence_cartesian(const ResonantParams& params, cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw domain_error("divergence_cartesian: non-finite input");
    return 2.0 * wirtinger(params, z).dz.real();
}

Mat2 field_jacobian(const ResonantParams& params, cplx z) {
    const WirtingerPair w = wirtinger(params, z);
    const cplx sum = w.dz + w.dzbar;
    const cplx dif = w.dz - w.dzbar;
    return {sum.real(), -dif.imag(), sum.imag(), dif.real()};
}

namespace {

struct FieldRhs {
    const ResonantParams& params;
    void operator()(double, const double* y, double* dydt) const {
        const cplx v = eval_field_cartesian(params, cplx(y[0], y[1]));
        dydt[0] = v.real();
        dydt[1] = v.imag();
    }
};

struct VariationalRhs {
    const ResonantParams& params;
    void operator()(double, const double* y, double* dydt) const {
        const cplx z(y[0], y[1]);
        const cplx v = eval_field_cartesian(params, z);
        const Mat2 J = field_jacobian(params, z);
        dydt[0] = v.real();
        dydt[1] = v.imag();
        // Columns of the tangent matrix X stored as (x11, x21, x12, x22).
        dydt[2] = J.a11 * y[2] + J.a12 * y[3];
        dydt[3] = J.a21 * y[2] + J.a22 * y[3];
        dydt[4] = J.a11 * y[4] + J.a12 * y[5];
        dydt[5] = J.a21 * y[4] + J.a22 * y[5];
    }
};

}  // namespace

cplx integrate_flow(const ResonantParams& params, cplx z0, double t,
                    const IntegratorOptions& opt) {
    std::array<double, 2> y{z0.real(), z0.imag()};
    integrate<2>(FieldRhs{params}, y, 0.0, t, opt);
    return {y[0], y[1]};
}

FlowResult integrate_flow_with_jacobian(const ResonantParams& params, cplx z0, double t,
                                        const IntegratorOptions& opt) {
    std::array<double, 6> y{z0.real(), z0.imag(), 1.0, 0.0, 0.0, 1.0};
    IntegratorOptions vopt = opt;
    vopt.guard_dims = 2;  // the guard radius applies to the position only
    integrate<6>(VariationalRhs{params}, y, 0.0, t, vopt);
    FlowResult r;
    r.z = {y[0], y[1]};
    r.jacobian = {y[2], y[4], y[3], y[5]};
    return r;
}

cplx poincare_map(const ResonantParams& params, cplx z, const IntegratorOptions& opt) {
    const cplx f = integrate_flow(params, z, 1.0, opt);
    return std::polar(1.0, params.rotation_angle()) * f;
}

FlowResult poincare_map_with_jacobian(const ResonantParams& params, cplx z,
                                      const IntegratorOptions& opt) {
    FlowResult r = integrate_flow_with_jacobian(params, z, 1.0, opt);
    const Mat2 rot = Mat2::rotation(params.rotation_angle());
    r.z = std::polar(1.0, params.rotation_angle()) * r.z;
    r.jacobian = rot * r.jacobian;
    return r;
}

}  // namespace revlab
