#include "revlab/annulus_chart.hpp"

#include <cmath>
#include <complex>

#include "revlab/errors.hpp"

namespace revlab {

double FourierSeries::eval(double theta) const {
    double v = c0;
    for (std::size_t k = 0; k < cosc.size(); ++k) {
        const double a = two_pi() * double(k + 1) * theta;
        v += cosc[k] * std::cos(a) + sinc[k] * std::sin(a);
    }
    return v;
}

double FourierSeries::deriv(double theta) const {
    double v = 0.0;
    for (std::size_t k = 0; k < cosc.size(); ++k) {
        const double w = two_pi() * double(k + 1);
        const double a = w * theta;
        v += w * (-cosc[k] * std::sin(a) + sinc[k] * std::cos(a));
    }
    return v;
}

void FourierSeries::accumulate(const FourierSeries& other) {
    c0 += other.c0;
    if (cosc.size() < other.cosc.size()) {
        cosc.resize(other.cosc.size(), 0.0);
        sinc.resize(other.sinc.size(), 0.0);
    }
    for (std::size_t k = 0; k < other.cosc.size(); ++k) {
        cosc[k] += other.cosc[k];
        sinc[k] += other.sinc[k];
    }
}

double FourierSeries::variation_bound() const {
    double s = 0.0;
    for (std::size_t k = 0; k < cosc.size(); ++k)
        s += std::abs(cosc[k]) + std::abs(sinc[k]);
    return s;
}

namespace {

// Discrete Fourier coefficients of grid values (uniform grid, k = 0..M).
struct GridSpectrum {
    double mean = 0.0;
    std::vector<std::complex<double>> modes;  // k = 1..M, f_hat(k)
};

GridSpectrum grid_dft(const std::vector<double>& vals, int order) {
    const int g = int(vals.size());
    GridSpectrum s;
    s.modes.resize(order);
    for (int i = 0; i < g; ++i) s.mean += vals[i];
    s.mean /= double(g);
    for (int k = 1; k <= order; ++k) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < g; ++i) {
            const double a = -two_pi() * double(k) * double(i) / double(g);
            acc += vals[i] * std::complex<double>(std::cos(a), std::sin(a));
        }
        s.modes[k - 1] = acc / double(g);
    }
    return s;
}

// Solve c(theta + psi0) - c(theta) = f(theta) - <f> mode by mode. Modes whose
// small divisor would blow the correction coefficient past coeff_cap are
// skipped: near a low-order resonance the averaging genuinely degrades, and a
// bounded chart with honestly larger residuals beats a non-invertible one.
FourierSeries solve_cohomological(const GridSpectrum& f, double psi0, int order,
                                  double denom_floor, double coeff_cap, int* skipped) {
    FourierSeries c;
    c.cosc.assign(order, 0.0);
    c.sinc.assign(order, 0.0);
    for (int k = 1; k <= order; ++k) {
        const double a = two_pi() * double(k) * psi0;
        const std::complex<double> denom(std::cos(a) - 1.0, std::sin(a));
        // invertibility of the near-identity modifier needs |rho * du/dtheta|
        // well below 1 over the working radii, so the admissible coefficient
        // shrinks with the mode number
        if (std::abs(denom) < denom_floor ||
            two_pi() * double(k) * std::abs(f.modes[k - 1]) > coeff_cap * std::abs(denom)) {
            if (skipped) ++(*skipped);
            continue;
        }
        const std::complex<double> ck = f.modes[k - 1] / denom;
        c.cosc[k - 1] = 2.0 * ck.real();
        c.sinc[k - 1] = -2.0 * ck.imag();
    }
    return c;
}

double grid_variation(const std::vector<double>& vals) {
    double lo = vals[0], hi = vals[0];
    for (double v : vals) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double grid_mean(const std::vector<double>& vals) {
    double s = 0.0;
    for (double v : vals) s += v;
    return s / double(vals.size());
}

}  // namespace

Vec2 AnnulusChart::base_from(double theta, double rho) const {
    if (kind_ == Kind::polar) {
        const double r = polar_r0_ + rho;
        const double a = two_pi() * theta;
        return {r * std::cos(a), r * std::sin(a)};
    }
    const double t = theta - std::floor(theta);
    return {plane_period_ * theta + curve_x_.eval(t),
            curve_y_.eval(t) + center_offset_ + rho};
}

void AnnulusChart::base_to(const Vec2& plane, double& theta, double& rho) const {
    if (kind_ == Kind::polar) {
        theta = std::atan2(plane.y, plane.x) / two_pi();
        if (theta < 0.0) theta += 1.0;
        rho = plane.norm() - polar_r0_;
        return;
    }
    // invert the strictly monotone X(theta) = plane_period*theta + periodic part
    double t = plane.x / plane_period_;
    for (int it = 0; it < 60; ++it) {
        const double frac = t - std::floor(t);
        const double fx = plane_period_ * t + curve_x_.eval(frac) - plane.x;
        const double dfx = plane_period_ + curve_x_.deriv(frac);
        const double step = fx / dfx;
        t -= step;
        if (std::abs(step) < 1e-15) break;
    }
    theta = t;
    rho = plane.y - curve_y_.eval(t - std::floor(t)) - center_offset_;
}

void AnnulusChart::base_map(double theta, double rho, double& theta_out, double& rho_out) const {
    const Vec2 p = base_from(theta, rho);
    const Vec2 q = sys_.f.forward(p);
    if (!q.finite()) throw numerical_error("annulus chart: non-finite image");
    if (kind_ == Kind::polar) {
        double tq = std::atan2(q.y, q.x) / two_pi();
        double tp = theta - std::floor(theta);
        double step = tq - tp;
        step -= std::round(step);
        if (std::abs(step) >= 0.45)
            throw numerical_error(
                "annulus chart: winding ambiguity (angular step >= 1/2); use a finer chart");
        theta_out = theta + step;
        rho_out = q.norm() - polar_r0_;
        return;
    }
    base_to(q, theta_out, rho_out);
}

void AnnulusChart::modifier_forward(double th, double rh, double& theta, double& rho) const {
    const double t = th - std::floor(th);
    theta = th + rh * u1_.eval(t) + rh * rh * u2_.eval(t);
    rho = rh * (1.0 + c1_.eval(t)) + rh * rh * c2_.eval(t);
}

void AnnulusChart::modifier_inverse(double theta, double rho, double& th, double& rh) const {
    th = theta;
    rh = rho;
    for (int it = 0; it < 50; ++it) {
        const double t = th - std::floor(th);
        const double u1 = u1_.eval(t), u2 = u2_.eval(t);
        const double c1 = c1_.eval(t), c2 = c2_.eval(t);
        const double f1 = th + rh * u1 + rh * rh * u2 - theta;
        const double f2 = rh * (1.0 + c1) + rh * rh * c2 - rho;
        const Mat2 J{1.0 + rh * u1_.deriv(t) + rh * rh * u2_.deriv(t), u1 + 2.0 * rh * u2,
                     rh * c1_.deriv(t) + rh * rh * c2_.deriv(t), 1.0 + c1 + 2.0 * rh * c2};
        Vec2 step;
        try {
            step = J.solve({f1, f2});
        } catch (const std::runtime_error&) {
            throw numerical_error("annulus chart: modifier inversion is singular");
        }
        th -= step.x;
        rh -= step.y;
        if (std::abs(step.x) < 1e-15 && std::abs(step.y) < 1e-15) return;
    }
    throw numerical_error("annulus chart: modifier inversion did not converge");
}

Vec2 AnnulusChart::from_chart(double theta, double rho) const {
    double t, r;
    modifier_forward(theta, rho, t, r);
    return base_from(t, r);
}

void AnnulusChart::to_chart(const Vec2& plane, double& theta, double& rho) const {
    double t, r;
    base_to(plane, t, r);
    modifier_inverse(t, r, theta, rho);
}

void AnnulusChart::map_chart(double theta, double rho, double& theta_out, double& rho_out) const {
    double t, r;
    modifier_forward(theta, rho, t, r);
    double t2, r2;
    base_map(t, r, t2, r2);
    modifier_inverse(t2, r2, theta_out, rho_out);
}

RotationNumberEstimate AnnulusChart::rotation_number(double theta0, double rho0,
                                                     long iterates) const {
    std::vector<double> lift;
    lift.reserve(iterates + 1);
    if (kind_ == Kind::cylinder_graph) {
        // iterate in the plane (the lift), convert angles directly
        Vec2 p = from_chart(theta0, rho0);
        double th, rh;
        to_chart(p, th, rh);
        lift.push_back(th);
        for (long i = 0; i < iterates; ++i) {
            p = sys_.f.forward(p);
            if (!p.finite() || !sys_.domain.contains(sys_.canonical(p)))
                throw domain_error("rotation_number: orbit left the chart domain at iterate " +
                                   std::to_string(i));
            base_to(p, th, rh);
            lift.push_back(th);
        }
    } else {
        double th = theta0, rh = rho0;
        lift.push_back(th);
        for (long i = 0; i < iterates; ++i) {
            map_chart(th, rh, th, rh);
            lift.push_back(th);
        }
    }
    return rotation_number_from_lift(lift);
}

RotationNumberEstimate AnnulusChart::rotation_number(const Vec2& x0, long iterates) const {
    double th, rh;
    to_chart(x0, th, rh);
    return rotation_number(th, rh, iterates);
}

AnnulusChart AnnulusChart::polar(const ReversibleSystem& sys, double r0) {
    if (!(r0 > 0.0)) throw validation_error("polar chart: r0 must be positive");
    AnnulusChart c;
    c.kind_ = Kind::polar;
    c.sys_ = sys;
    c.polar_r0_ = r0;
    RotationNumberEstimate est = c.rotation_number(0.0, 0.0, 4096);
    c.psi0_ = est.psi0;
    c.psi0_err_ = est.error_bound;
    // twist from two offset circles
    const double w = 0.05 * r0;
    const RotationNumberEstimate ep = c.rotation_number(0.0, w, 2048);
    const RotationNumberEstimate em = c.rotation_number(0.0, -w, 2048);
    c.b1_mean_ = (ep.psi0 - em.psi0) / (2.0 * w);
    return c;
}

AnnulusChart AnnulusChart::build_on_curve(const ReversibleSystem& sys, const BuildOptions& opt) {
    if (!(opt.seed_y_lo < opt.seed_y_hi))
        throw validation_error("chart build: empty seed window");
    if (opt.fourier_order < 1 || opt.grid < 4 * opt.fourier_order)
        throw validation_error("chart build: grid must be >= 4 * fourier_order");

    AnnulusChart chart;
    chart.kind_ = Kind::cylinder_graph;
    chart.sys_ = sys;
    chart.plane_period_ = opt.plane_period;
    chart.center_offset_ = opt.center_offset;

    auto rot_of_seed = [&](double y, long n) {
        std::vector<double> lift;
        lift.reserve(n + 1);
        Vec2 p{opt.seed_x, y};
        lift.push_back(p.x / opt.plane_period);
        for (long i = 0; i < n; ++i) {
            p = sys.f.forward(p);
            lift.push_back(p.x / opt.plane_period);
        }
        return rotation_number_from_lift(lift);
    };

    // seed bisection onto the target rotation number
    double lo = opt.seed_y_lo, hi = opt.seed_y_hi;
    const double rlo = rot_of_seed(lo, 4096).psi0;
    const double rhi = rot_of_seed(hi, 4096).psi0;
    if (!((rlo - opt.target_rotation) * (rhi - opt.target_rotation) < 0.0))
        throw validation_error("chart build: target rotation not bracketed by the seed window");
    const bool increasing = rhi > rlo;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double r = rot_of_seed(mid, 4096).psi0;
        if ((r < opt.target_rotation) == increasing) lo = mid;
        else hi = mid;
    }
    chart.seed_y_ = 0.5 * (lo + hi);

    RotationNumberEstimate est = rot_of_seed(chart.seed_y_, opt.rot_iterates);
    chart.psi0_ = est.psi0;
    chart.psi0_err_ = est.error_bound;

    // conjugated-angle Fourier fit of the curve from a long orbit
    const long n = opt.fit_iterates;
    std::vector<double> xs(n), ys(n), wts(n);
    {
        Vec2 p{opt.seed_x, chart.seed_y_};
        for (long i = 0; i < n; ++i) {
            xs[i] = p.x;
            ys[i] = p.y;
            const double t = (double(i) + 0.5) / double(n);
            wts[i] = std::exp(-1.0 / (t * (1.0 - t)));
            p = sys.f.forward(p);
        }
    }
    double wsum = 0.0;
    for (double w : wts) wsum += w;

    const int M = opt.fourier_order;
    auto project = [&](const std::vector<double>& vals) {
        FourierSeries s;
        s.cosc.assign(M, 0.0);
        s.sinc.assign(M, 0.0);
        double mean = 0.0;
        for (long i = 0; i < n; ++i) mean += wts[i] * vals[i];
        s.c0 = mean / wsum;
        for (int k = 1; k <= M; ++k) {
            std::complex<double> acc = 0.0;
            for (long i = 0; i < n; ++i) {
                const double a = -two_pi() * double(k) * chart.psi0_ * double(i);
                acc += wts[i] * vals[i] * std::complex<double>(std::cos(a), std::sin(a));
            }
            acc /= wsum;
            s.cosc[k - 1] = 2.0 * acc.real();
            s.sinc[k - 1] = -2.0 * acc.imag();
        }
        return s;
    };

    std::vector<double> xper(n);
    for (long i = 0; i < n; ++i)
        xper[i] = xs[i] - opt.plane_period * chart.psi0_ * double(i);
    chart.curve_x_ = project(xper);
    chart.curve_y_ = project(ys);

    // invariance of the fitted curve: f(curve(t)) vs curve(t + psi0)
    double resid = 0.0;
    for (int i = 0; i < 97; ++i) {
        const double t = double(i) / 97.0;
        const Vec2 p{opt.plane_period * t + chart.curve_x_.eval(t), chart.curve_y_.eval(t)};
        const Vec2 q = sys.f.forward(p);
        const double t2 = t + chart.psi0_;
        const Vec2 expect{opt.plane_period * t2 + chart.curve_x_.eval(t2 - std::floor(t2)),
                          chart.curve_y_.eval(t2 - std::floor(t2))};
        resid = std::max(resid, (q - expect).norm());
    }
    chart.fit_residual_ = resid;

    if (opt.center_offset == 0.0 && opt.normalize_order > 0) {
        chart.normalize(opt);
    } else {
        // crude twist estimate so F_{m/n} seeding still works on raw charts
        const double h = opt.extract_step;
        double acc = 0.0;
        for (int i = 0; i < 32; ++i) {
            const double th = double(i) / 32.0;
            double tp, rp, tm, rm;
            chart.map_chart(th, h, tp, rp);
            chart.map_chart(th, -h, tm, rm);
            acc += (tp - tm) / (2.0 * h);
        }
        chart.b1_mean_ = acc / 32.0;
    }
    return chart;
}

void AnnulusChart::normalize(const BuildOptions& opt) {
    const int G = opt.grid;
    const int M = opt.fourier_order;
    const double h = opt.extract_step;
    const double denom_floor = 1e-3;
    const double coeff_cap = 2.0;  // bound on the correction derivative
    int skipped_modes = 0;

    std::vector<double> a_vals(G), b_vals(G);
    auto extract = [&](int order) {
        for (int i = 0; i < G; ++i) {
            const double th = double(i) / double(G);
            double tp, rp, tm, rm;
            map_chart(th, h, tp, rp);
            map_chart(th, -h, tm, rm);
            if (order == 1) {
                a_vals[i] = (rp - rm) / (2.0 * h);
                b_vals[i] = (tp - tm) / (2.0 * h);
            } else {
                double t0, r0;
                map_chart(th, 0.0, t0, r0);
                a_vals[i] = (rp + rm - 2.0 * r0) / (2.0 * h * h);
                b_vals[i] = (tp + tm - 2.0 * t0) / (2.0 * h * h);
            }
        }
    };

    // one correction round at the given order; returns the pre-round variation
    auto correction_round = [&](int order) {
        extract(order);
        if (order == 1) b1_mean_ = grid_mean(b_vals);
        const double var = grid_variation(a_vals) + grid_variation(b_vals);
        std::vector<double> radial_goal = a_vals;
        if (order == 1) {
            for (int i = 0; i < G; ++i) {
                if (!(a_vals[i] > 0.0)) return -1.0;  // radial slope changed sign
                radial_goal[i] = std::log(a_vals[i]);
            }
        }
        const FourierSeries c_add = solve_cohomological(grid_dft(radial_goal, M), psi0_, M,
                                                        denom_floor, coeff_cap, &skipped_modes);
        std::vector<double> b_shift(G);
        for (int i = 0; i < G; ++i)
            b_shift[i] = b_vals[i] + b1_mean_ * c_add.eval(double(i) / double(G));
        const FourierSeries u_add = solve_cohomological(grid_dft(b_shift, M), psi0_, M,
                                                        denom_floor, coeff_cap, &skipped_modes);
        if (order == 1) {
            c1_.accumulate(c_add);
            u1_.accumulate(u_add);
        } else {
            c2_.accumulate(c_add);
            u2_.accumulate(u_add);
        }
        return var;
    };

    // Iterate each order until the theta-variation stops shrinking. Near a
    // low-order resonance the iteration is not contractive; rolling back the
    // last correction keeps the chart invertible with honest residuals.
    for (int order : {1, 2}) {
        if (order == 2 && opt.normalize_order < 2) break;
        const double tol = (order == 1) ? 1e-7 : 1e-5;
        const int max_rounds = (order == 1) ? 7 : 6;
        double prev_var = 1e300;
        for (int round = 0; round < max_rounds; ++round) {
            const FourierSeries u_save[2] = {u1_, u2_};
            const FourierSeries c_save[2] = {c1_, c2_};
            double var;
            try {
                var = correction_round(order);
            } catch (const numerical_error&) {
                var = 1e301;  // correction broke the chart, roll back below
            }
            if (var < 0.0) {
                notes_ += "normalization aborted: radial slope changed sign; ";
                break;
            }
            if (var < tol) break;
            if (var > prev_var) {
                u1_ = u_save[0];
                u2_ = u_save[1];
                c1_ = c_save[0];
                c2_ = c_save[1];
                notes_ += "order-" + std::to_string(order) +
                          " normalization stalled (non-contractive near a resonance); ";
                break;
            }
            prev_var = var;
        }
        extract(order);
        if (order == 1) {
            resid_o1_ = grid_variation(a_vals) + grid_variation(b_vals);
            b1_mean_ = grid_mean(b_vals);
        } else {
            resid_o2_ = grid_variation(a_vals) + grid_variation(b_vals);
        }
    }
    if (skipped_modes > 0)
        notes_ += std::to_string(skipped_modes) + " near-resonant Fourier mode(s) skipped; ";
}

}  // namespace revlab
