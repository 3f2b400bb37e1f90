#include "revlab/kam_ops.hpp"

#include <algorithm>
#include <cmath>

#include "revlab/errors.hpp"
#include "revlab/util.hpp"

namespace revlab {

TwistReport twist_check(const AnnulusChart& chart, const TwistOptions& opt) {
    if (opt.offsets_per_side < 1) throw validation_error("twist_check: need offsets");
    TwistReport rep;
    for (int side : {-1, 1}) {
        for (int j = 1; j <= opt.offsets_per_side; ++j) {
            const double rho = side * opt.rho_window * double(j) / double(opt.offsets_per_side);
            TwistSample s;
            s.rho = rho;
            const RotationNumberEstimate est = chart.rotation_number(0.0, rho, opt.iterates);
            s.rotation = est.psi0;
            s.error = est.error_bound;
            rep.samples.push_back(s);
        }
    }
    std::sort(rep.samples.begin(), rep.samples.end(),
              [](const TwistSample& a, const TwistSample& b) { return a.rho < b.rho; });

    double mr = 0.0;
    for (const TwistSample& s : rep.samples) mr += s.rho;
    mr /= double(rep.samples.size());
    double sxx = 0.0, sxy = 0.0, var = 0.0;
    for (const TwistSample& s : rep.samples) {
        sxx += (s.rho - mr) * (s.rho - mr);
        sxy += (s.rho - mr) * s.rotation;
        var += (s.rho - mr) * (s.rho - mr) * s.error * s.error;
    }
    rep.slope = sxy / sxx;
    rep.uncertainty = std::sqrt(var) / sxx;

    if (std::abs(rep.slope) > 3.0 * rep.uncertainty) rep.verdict = TwistVerdict::pass;
    else if (rep.uncertainty < 1e-4) rep.verdict = TwistVerdict::fail;
    else rep.verdict = TwistVerdict::inconclusive;
    return rep;
}

AnnulusBounds measure_annulus(const AnnulusChart& chart, double rho_in, double rho_out,
                              long iterates) {
    if (!(rho_in < rho_out)) throw validation_error("measure_annulus: require rho_in < rho_out");
    AnnulusBounds b;
    b.rho_in = rho_in;
    b.rho_out = rho_out;
    b.rot_in = chart.rotation_number(0.0, rho_in, iterates).psi0;
    b.rot_out = chart.rotation_number(0.0, rho_out, iterates).psi0;
    return b;
}

FmnReport find_fmn_fixed_points(const AnnulusChart& chart, const FmnSpec& spec,
                                const AnnulusBounds& bounds, const FmnOptions& opt) {
    if (spec.n < 1) throw validation_error("find_fmn_fixed_points: n must be >= 1");
    if (spec.n > opt.n_cap)
        throw validation_error("find_fmn_fixed_points: n exceeds the cap (" +
                               std::to_string(opt.n_cap) + "); conditioning degrades as trace->2");

    FmnReport rep;
    rep.spec = spec;
    rep.bounds = bounds;

    const double ratio = double(spec.m) / double(spec.n);
    const double lo = std::min(bounds.rot_in, bounds.rot_out);
    const double hi = std::max(bounds.rot_in, bounds.rot_out);
    if (!(ratio > lo && ratio < hi))
        throw validation_error("find_fmn_fixed_points: m/n = " + std::to_string(ratio) +
                               " does not lie strictly between the annulus rotation numbers [" +
                               std::to_string(lo) + ", " + std::to_string(hi) + "]");

    const double gate = std::abs(double(spec.n) * chart.psi0() - double(spec.m));
    if (gate > 1.0) {
        if (opt.gate_policy == GatePolicy::reject)
            throw validation_error("find_fmn_fixed_points: |n psi0 - m| = " +
                                   std::to_string(gate) + " > 1 (gate policy: reject)");
        rep.gate_note = "|n psi0 - m| = " + std::to_string(gate) +
                        " > 1: the positive-trace exclusion is not guaranteed";
    } else {
        rep.gate_note = "|n psi0 - m| = " + std::to_string(gate) + " <= 1";
    }

    const ReversibleSystem& sys = chart.system();
    const double period = two_pi();  // plane period of the angular coordinate

    // exact-resonance degeneracy probe: F_{m/n} = id on sampled chart points
    {
        bool all_fixed = true;
        for (int i = 0; i < 8 && all_fixed; ++i) {
            double th = double(i) / 8.0, rh = 0.4 * bounds.rho_out;
            const double th0 = th, rh0 = rh;
            for (long j = 0; j < spec.n; ++j) chart.map_chart(th, rh, th, rh);
            if (std::abs(th - th0 - double(spec.m)) > 1e-9 || std::abs(rh - rh0) > 1e-9)
                all_fixed = false;
        }
        if (all_fixed) {
            rep.degenerate_identity = true;
            return rep;
        }
    }
    if (chart.kind() != AnnulusChart::Kind::cylinder_graph)
        throw validation_error("find_fmn_fixed_points: requires a cylinder chart");

    auto fn_with_jacobian = [&](const Vec2& x0, Mat2& J) {
        Vec2 x = x0;
        J = Mat2::identity();
        for (long j = 0; j < spec.n; ++j) {
            J = map_jacobian(sys.f, x) * J;
            x = sys.f.forward(x);
        }
        return x;
    };

    const double twist = chart.twist_estimate();
    const double rho_pred = (ratio - chart.psi0()) / twist;
    std::vector<FmnRoot> roots;
    for (int it = 0; it < opt.theta_seeds; ++it) {
        for (double fac : opt.rho_seed_factors) {
            const double th0 = double(it) / double(opt.theta_seeds);
            const double rh0 = rho_pred * fac;
            Vec2 x = chart.from_chart(th0, rh0);
            bool converged = false;
            for (int nit = 0; nit < opt.newton_max_iter; ++nit) {
                Mat2 J;
                const Vec2 fx = fn_with_jacobian(x, J);
                const Vec2 g{fx.x - x.x - period * double(spec.m), fx.y - x.y};
                if (g.norm() <= opt.newton_tol) {
                    converged = true;
                    break;
                }
                Vec2 step;
                try {
                    step = (J - Mat2::identity()).solve(g);
                } catch (const std::runtime_error&) {
                    break;
                }
                const double cap = 0.5;
                const double sn = step.norm();
                if (sn > cap) step = step * (cap / sn);
                x = x - step;
            }
            if (!converged) continue;

            double th, rh;
            chart.to_chart(x, th, rh);
            if (std::abs(rh) > 1.5 * std::max(std::abs(bounds.rho_in), std::abs(bounds.rho_out)))
                continue;  // wandered out of the annulus

            // canonical representative and de-duplication
            const double th_mod = th - std::floor(th);
            bool dup = false;
            for (const FmnRoot& r : roots)
                if (std::abs(r.rho - rh) < 1e-7 &&
                    dist_to_int(r.theta - th_mod) < 1e-7) { dup = true; break; }
            if (dup) continue;

            FmnRoot root;
            root.plane_point = x;
            root.theta = th_mod;
            root.rho = rh;
            Mat2 J;
            const Vec2 fx = fn_with_jacobian(x, J);
            root.closure = Vec2{fx.x - x.x - period * double(spec.m), fx.y - x.y}.norm();
            root.trace = J.trace();
            auto [l1, l2] = eigenvalues(J);
            root.mult1 = l1;
            root.mult2 = l2;
            roots.push_back(root);
        }
    }
    rep.seeds_used = opt.theta_seeds * int(opt.rho_seed_factors.size());

    std::sort(roots.begin(), roots.end(), [](const FmnRoot& a, const FmnRoot& b) {
        if (a.theta != b.theta) return a.theta < b.theta;
        return a.rho < b.rho;
    });
    rep.roots = std::move(roots);
    for (const FmnRoot& r : rep.roots) {
        rep.max_radial_distance = std::max(rep.max_radial_distance, std::abs(r.rho));
        rep.max_trace_deviation = std::max(rep.max_trace_deviation, std::abs(r.trace - 2.0));
        const bool real_pair = r.mult1.imag() == 0.0;
        if (real_pair && r.mult1.real() < 0.0 && r.mult2.real() < 0.0)
            rep.any_negative_real_multipliers = true;
    }
    return rep;
}

AveragedFitReport averaged_form_fit(const AnnulusChart& chart, const AveragedFitOptions& opt) {
    if (opt.n_rho < 2)
        throw validation_error("averaged_form_fit: need samples at several rho offsets");
    AveragedFitReport rep;
    std::vector<double> mean_advance(opt.n_rho);
    std::vector<std::vector<double>> advances(opt.n_rho);

    for (int j = 0; j < opt.n_rho; ++j) {
        const double rho = opt.rho_max * std::pow(2.0, -0.5 * double(j));
        rep.rhos.push_back(rho);
        double rad = 0.0, madv = 0.0;
        advances[j].resize(opt.n_theta);
        for (int i = 0; i < opt.n_theta; ++i) {
            const double th = double(i) / double(opt.n_theta);
            double t2, r2;
            chart.map_chart(th, rho, t2, r2);
            rad = std::max(rad, std::abs(r2 - rho));
            advances[j][i] = t2 - th;
            madv += advances[j][i];
        }
        rep.radial_residuals.push_back(rad);
        mean_advance[j] = madv / double(opt.n_theta);
    }

    // Psi(rho) as a low-degree polynomial; 1/rho^3 weights keep the small-rho
    // residuals from being swamped by the large-rho fit error.
    std::vector<double> w(opt.n_rho);
    for (int j = 0; j < opt.n_rho; ++j) w[j] = std::pow(rep.rhos[j], -3.0);
    rep.psi_coefficients = fit_poly(rep.rhos, mean_advance, w, opt.poly_degree);

    for (int j = 0; j < opt.n_rho; ++j) {
        const double model = eval_poly(rep.psi_coefficients, rep.rhos[j]);
        double res = 0.0;
        for (double a : advances[j]) res = std::max(res, std::abs(a - model));
        rep.angular_residuals.push_back(res);
    }

    double max_res = 0.0;
    for (int j = 0; j < opt.n_rho; ++j)
        max_res = std::max({max_res, rep.radial_residuals[j], rep.angular_residuals[j]});
    if (max_res <= opt.floor) {
        rep.below_floor = true;
        rep.pass = true;
        return rep;
    }

    std::vector<double> lr, lrad, lang;
    for (int j = 0; j < opt.n_rho; ++j) {
        lr.push_back(std::log(rep.rhos[j]));
        lrad.push_back(std::log(std::max(rep.radial_residuals[j], 1e-300)));
        lang.push_back(std::log(std::max(rep.angular_residuals[j], 1e-300)));
    }
    rep.radial_slope = fit_line(lr, lrad).slope;
    rep.angular_slope = fit_line(lr, lang).slope;
    rep.pass = rep.radial_slope >= opt.slope_threshold && rep.angular_slope >= opt.slope_threshold;
    return rep;
}

}  // namespace revlab
