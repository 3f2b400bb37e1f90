#include "revlab/scan.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "revlab/errors.hpp"
#include "revlab/util.hpp"

namespace revlab {

EquilibriumCount count_equilibria(const ResonantParams& params,
                                  const FindEquilibriaOptions& opts) {
    EquilibriumCount c;
    c.mu = params.mu;
    std::vector<Equilibrium> eqs;
    try {
        eqs = find_equilibria(params, opts);
    } catch (const numerical_error&) {
        c.solver_failed = true;
        return c;
    }
    c.total = int(eqs.size());
    for (const Equilibrium& e : eqs) {
        switch (e.type) {
            case EquilibriumType::saddle: ++c.saddles; break;
            case EquilibriumType::center: ++c.centers; break;
            case EquilibriumType::sink: ++c.sinks; break;
            case EquilibriumType::source: ++c.sources; break;
            case EquilibriumType::degenerate: ++c.degenerate; break;
        }
        if (!e.symmetric) ++c.asymmetric;
    }
    return c;
}

MuSweepResult mu_sweep(const ResonantParams& params, const MuSweepOptions& opts) {
    params.validate();
    if (params.psi.empty() || params.psi[0] == 0.0)
        throw validation_error("mu_sweep: Psi_1 must be nonzero");
    if (params.A == 0.0) throw validation_error("mu_sweep: A must be nonzero");
    if (!params.conservative()) throw validation_error("mu_sweep: requires B = C = 0");
    if (opts.resolution < 2) throw validation_error("mu_sweep: resolution must be >= 2");
    if (!(opts.mu_lo < opts.mu_hi)) throw validation_error("mu_sweep: empty mu range");

    MuSweepResult out;
    out.table.resize(opts.resolution);
    parallel_for(opts.resolution, opts.threads, [&](std::size_t i) {
        ResonantParams p = params;
        p.mu = opts.mu_lo + (opts.mu_hi - opts.mu_lo) * double(i) / double(opts.resolution - 1);
        out.table[i] = count_equilibria(p, opts.eq);
    });

    for (int i = 0; i + 1 < opts.resolution; ++i) {
        const EquilibriumCount& a = out.table[i];
        const EquilibriumCount& b = out.table[i + 1];
        if (a.solver_failed || b.solver_failed) continue;
        if (a.total != b.total) {
            BifurcationEvent ev;
            ev.kind = "saddle-center-birth";
            ev.param_lo = a.mu;
            ev.param_hi = b.mu;
            ev.before = a;
            ev.after = b;
            out.events.push_back(ev);
        }
    }
    return out;
}

namespace {

int asymmetric_count(const ResonantParams& params, const FindEquilibriaOptions& opts) {
    int n = 0;
    for (const Equilibrium& e : find_equilibria(params, opts))
        if (!e.symmetric) ++n;
    return n;
}

}  // namespace

PitchforkScanResult pitchfork_scan(const ResonantParams& params,
                                   const PitchforkScanOptions& opts) {
    params.validate();
    if (params.B == params.C) throw validation_error("pitchfork_scan: requires B != C");
    if (params.psi.empty() || params.psi[0] == 0.0)
        throw validation_error("pitchfork_scan: Psi_1 must be nonzero");
    if (opts.A_values.empty()) throw validation_error("pitchfork_scan: no A values");
    if (opts.mu_resolution < 2) throw validation_error("pitchfork_scan: mu resolution must be >= 2");

    const double psi1 = params.psi[0];
    PitchforkScanResult out;

    // per-point count table over the (mu, A) grid
    double mu_lo = opts.mu_lo, mu_hi = opts.mu_hi;
    if (mu_lo == 0.0 && mu_hi == 0.0) {
        double lo = 0.0, hi = 0.0;
        for (double A : opts.A_values) {
            const double c = A * psi1 / (params.C - params.B);
            lo = std::min({lo, 2.0 * c});
            hi = std::max({hi, 2.0 * c});
        }
        mu_lo = lo;
        mu_hi = (hi == lo) ? lo + 1.0 : hi;
    }
    out.grid.resize(opts.A_values.size() * opts.mu_resolution);
    parallel_for(out.grid.size(), opts.threads, [&](std::size_t idx) {
        const std::size_t ia = idx / opts.mu_resolution;
        const std::size_t im = idx % opts.mu_resolution;
        ResonantParams p = params;
        p.A = opts.A_values[ia];
        p.mu = mu_lo + (mu_hi - mu_lo) * double(im) / double(opts.mu_resolution - 1);
        PitchforkGridCell& cell = out.grid[idx];
        cell.A = p.A;
        cell.mu = p.mu;
        try {
            for (const Equilibrium& e : find_equilibria(p, opts.eq)) {
                if (e.symmetric) ++cell.symmetric_count;
                else ++cell.asymmetric_count;
            }
        } catch (const numerical_error&) {
            cell.symmetric_count = cell.asymmetric_count = -1;
        }
    });

    // per-A boundary localization by bisection on the asymmetric count
    for (double A : opts.A_values) {
        PitchforkRow row;
        row.A = A;
        row.mu_center_predicted = A * psi1 / (params.C - params.B);
        ResonantParams p = params;
        p.A = A;

        const double r2 = A / (params.B - params.C);
        if (!(r2 > 0.0)) {
            out.rows.push_back(row);
            continue;
        }
        const double rho0 = std::sqrt(r2);
        const double mu_center = -p.psi_sum(rho0);  // exact center of the interval
        p.mu = mu_center;
        if (asymmetric_count(p, opts.eq) < 2) {
            out.rows.push_back(row);
            continue;
        }
        row.region_found = true;

        const double half_width_pred =
            std::abs(std::pow(rho0, p.q - 2) * (p.A + (p.B + p.C) * rho0 * rho0));
        double boundaries[2];
        double widths[2];
        for (int side = 0; side < 2; ++side) {
            const double dir = (side == 0) ? -1.0 : 1.0;
            double inside = mu_center;
            double step = std::max(half_width_pred * 4.0, std::abs(mu_center) * 1e-12 + 1e-300);
            double outside = mu_center + dir * step;
            ResonantParams pp = p;
            for (int tries = 0; tries < 200; ++tries) {
                pp.mu = outside;
                if (asymmetric_count(pp, opts.eq) < 2) break;
                step *= 4.0;
                outside = mu_center + dir * step;
            }
            for (int it = 0; it < 200 && std::abs(outside - inside) >
                                             1e-3 * std::numeric_limits<double>::epsilon() *
                                                 (std::abs(inside) + 1e-300); ++it) {
                const double mid = 0.5 * (inside + outside);
                if (mid == inside || mid == outside) break;
                pp.mu = mid;
                if (asymmetric_count(pp, opts.eq) >= 2) inside = mid;
                else outside = mid;
            }
            boundaries[side] = 0.5 * (inside + outside);
            widths[side] = std::abs(outside - inside);
        }
        row.mu_lo_boundary = boundaries[0];
        row.mu_hi_boundary = boundaries[1];
        row.bracket_width = std::max(widths[0], widths[1]);
        row.interval_width = row.mu_hi_boundary - row.mu_lo_boundary;
        row.contains_predicted = (row.mu_center_predicted >= row.mu_lo_boundary &&
                                  row.mu_center_predicted <= row.mu_hi_boundary);

        p.mu = mu_center;
        row.sink_source = certify_sink_source(p, opts.eq).certified;

        for (int side = 0; side < 2; ++side) {
            BifurcationEvent ev;
            ev.kind = "pitchfork";
            ev.param_lo = boundaries[side] - widths[side];
            ev.param_hi = boundaries[side] + widths[side];
            out.events.push_back(ev);
            if (row.sink_source) {
                ev.kind = "sink-source-onset";
                out.events.push_back(ev);
            }
        }
        out.rows.push_back(row);
    }
    return out;
}

CertifyResult certify_sink_source(const ResonantParams& params,
                                  const FindEquilibriaOptions& opts) {
    CertifyResult res;
    std::vector<Equilibrium> asym;
    for (const Equilibrium& e : find_equilibria(params, opts))
        if (!e.symmetric) asym.push_back(e);
    if (asym.empty())
        throw validation_error("certify_sink_source: no asymmetric equilibria exist");

    for (const Equilibrium& cand : asym) {
        // noise floor: relative to the eigenvalue scale plus a roundoff term of
        // the linearization entries (contraction rates scale like rho^q and an
        // absolute floor would reject genuine sinks)
        const double eig_scale = std::max(std::abs(cand.eig1), std::abs(cand.eig2));
        const double delta =
            1e-10 * eig_scale + 1e-14 * std::max(cand.linearization.norm_inf(), 1e-300);
        if (!(cand.eig1.real() < -delta && cand.eig2.real() < -delta)) continue;
        // reversor image: the partner at phi -> -phi
        for (const Equilibrium& partner : asym) {
            if (&partner == &cand) continue;
            if (std::abs(wrap_pi(partner.phi + cand.phi)) > 1e-6) continue;
            if (partner.eig1.real() > delta && partner.eig2.real() > delta) {
                SinkSourceCertificate cert;
                cert.sink = cand;
                cert.source = partner;
                cert.delta = delta;
                const double r1 = std::abs(cand.eig1.real() + partner.eig1.real());
                const double r2 = std::abs(cand.eig2.real() + partner.eig2.real());
                const double r1s = std::abs(cand.eig1.real() + partner.eig2.real());
                const double r2s = std::abs(cand.eig2.real() + partner.eig1.real());
                cert.symmetry_residual = std::min(std::max(r1, r2), std::max(r1s, r2s));
                res.certified = true;
                res.certificate = cert;
                return res;
            }
        }
    }
    res.reason = "no asymmetric equilibrium has strictly contracting eigenvalues with a "
                 "reversor-paired expanding partner (expected when B(B-C) <= 0)";
    return res;
}

MapConfirmReport map_level_confirm(const ResonantParams& params, const Equilibrium& eq,
                                   const ConfirmOptions& opts) {
    params.validate();
    IntegratorOptions iopt;
    iopt.rtol = opts.integrator_tol;
    iopt.atol = opts.integrator_tol * 1e-3;
    iopt.guard_norm = 10.0 * std::max(eq.rho, 1e-3);

    MapConfirmReport rep;
    rep.flow_class = eq.type;
    rep.period = params.q;

    // Newton refinement of the period-q condition T^q(z) = z (T^q is the
    // time-q flow map, the rotations cancel).
    cplx z = eq.location();
    auto residual = [&](cplx w) {
        return integrate_flow(params, w, double(params.q), iopt) - w;
    };
    cplx r = residual(z);
    rep.newton_residual = std::abs(r);
    std::vector<double> history;
    while (rep.newton_residual > opts.newton_tol && rep.newton_iterations < opts.newton_max_iter) {
        FlowResult fr = integrate_flow_with_jacobian(params, z, double(params.q), iopt);
        const Mat2 J = fr.jacobian - Mat2::identity();
        Vec2 step;
        try {
            step = J.solve(to_vec(fr.z - z));
        } catch (const std::runtime_error&) {
            break;  // derivative too close to identity; keep the seed
        }
        const cplx znew = z - to_cplx(step);
        const cplx rnew = residual(znew);
        if (std::abs(rnew) >= rep.newton_residual) break;  // no improvement
        z = znew;
        r = rnew;
        history.push_back(std::abs(rnew));
        rep.newton_residual = std::abs(rnew);
        ++rep.newton_iterations;
    }
    if (rep.newton_residual > 1e3 * opts.newton_tol) {
        std::string h;
        for (double v : history) h += " " + std::to_string(v);
        throw numerical_error("map_level_confirm: Newton did not converge; residual history:" + h);
    }

    // orbit of T and monodromy as the product of one-step tangent maps
    rep.points.clear();
    Mat2 mono = Mat2::identity();
    cplx w = z;
    for (int i = 0; i < params.q; ++i) {
        rep.points.push_back(to_vec(w));
        FlowResult fr = poincare_map_with_jacobian(params, w, iopt);
        mono = fr.jacobian * mono;
        w = fr.z;
    }
    auto [m1, m2] = eigenvalues(mono);
    rep.mult1 = m1;
    rep.mult2 = m2;
    rep.pairing_residual = std::abs(m1 * m2 - 1.0);

    // analytic route: the orbit sits at an equilibrium of the field, so the
    // monodromy is exp(q * DV) up to the truncation of the refinement
    const Mat2 expM = mat_exp(field_jacobian(params, to_cplx(rep.points[0])) * double(params.q));
    auto [a1, a2] = eigenvalues(expM);
    rep.analytic1 = a1;
    rep.analytic2 = a2;
    const double d1 = std::max(std::abs(std::abs(m1) - std::abs(a1)),
                               std::abs(std::abs(m2) - std::abs(a2)));
    const double d2 = std::max(std::abs(std::abs(m1) - std::abs(a2)),
                               std::abs(std::abs(m2) - std::abs(a1)));
    rep.route_disagreement = std::min(d1, d2);

    // Classification from trace and determinant: both are linear in the
    // monodromy entries, so they stay reliable when the multipliers crowd the
    // unit circle and the eigenvalue discriminant drowns in integration noise.
    // The sign of the Jury margin (1 - l1)(1 - l2), unmeasurable at O(rho^q)
    // contraction rates, comes from the analytic route, which is exact for the
    // truncated field.
    const double tr_m = mono.trace(), det_m = mono.det();
    const double tr_a = expM.trace(), det_a = expM.det();
    const double u =
        std::max(1e-12, 10.0 * (std::abs(tr_m - tr_a) + std::abs(det_m - det_a)));
    const double jury_in = ((1.0 - a1) * (1.0 - a2)).real();
    const double jury_out = ((1.0 - 1.0 / a1) * (1.0 - 1.0 / a2)).real();
    if (det_m < 1.0 - u && jury_in > 0.0) {
        rep.map_class = OrbitClass::sink;
        rep.delta = (1.0 - det_m) / 2.0;
    } else if (det_m > 1.0 + u && jury_out > 0.0) {
        rep.map_class = OrbitClass::source;
        rep.delta = (det_m - 1.0) / 2.0;
    } else if (std::abs(det_m - 1.0) <= u) {
        if (std::abs(tr_m) < 2.0 - u) {
            rep.map_class = OrbitClass::elliptic;
            rep.delta = std::abs(det_m - 1.0) / 2.0 + u;  // unit-circle deviation bound
        } else if (std::abs(tr_m) > 2.0 + u) {
            rep.map_class = OrbitClass::saddle;
            rep.delta = std::abs(tr_m) - 2.0;
        } else {
            rep.map_class = OrbitClass::borderline;
            rep.delta = 0.0;
        }
    } else {
        rep.map_class = OrbitClass::borderline;
        rep.delta = 0.0;
    }

    switch (rep.flow_class) {
        case EquilibriumType::center: rep.matches = rep.map_class == OrbitClass::elliptic; break;
        case EquilibriumType::saddle: rep.matches = rep.map_class == OrbitClass::saddle; break;
        case EquilibriumType::sink: rep.matches = rep.map_class == OrbitClass::sink; break;
        case EquilibriumType::source: rep.matches = rep.map_class == OrbitClass::source; break;
        case EquilibriumType::degenerate: rep.matches = false; break;
    }
    return rep;
}

}  // namespace revlab
