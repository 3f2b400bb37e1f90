#include "revlab/builtin_systems.hpp"

#include <cmath>
#include <memory>
#include <set>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab {

namespace {

double take(std::map<std::string, double>& params, const std::string& key, double fallback) {
    auto it = params.find(key);
    if (it == params.end()) return fallback;
    const double v = it->second;
    params.erase(it);
    return v;
}

void reject_leftovers(const std::map<std::string, double>& params, const std::string& name,
                      const std::string& known) {
    if (params.empty()) return;
    std::ostringstream os;
    os << "unknown parameter(s) for " << name << ":";
    for (const auto& [k, v] : params) os << " " << k;
    os << " (known: " << known << ")";
    throw validation_error(os.str());
}

}  // namespace

ReversibleSystem make_rigid_rotation(double psi) {
    if (!std::isfinite(psi)) throw validation_error("rigid-rotation: psi must be finite");
    ReversibleSystem sys;
    sys.name = "rigid-rotation";
    sys.params = {{"psi", psi}};
    sys.residual_tol = 1e-12;
    sys.domain = {-1e6, 1e6, -1e6, 1e6};
    sys.sample_box = {-1.0, 1.0, -1.0, 1.0};

    const Mat2 rot = Mat2::rotation(psi);
    sys.f.forward = [rot](const Vec2& v) { return rot * v; };
    sys.f.jacobian = [rot](const Vec2&) { return rot; };
    const Mat2 roti = Mat2::rotation(-psi);
    sys.f.inverse = [roti](const Vec2& v) { return roti * v; };

    sys.g.map.forward = [](const Vec2& v) { return Vec2{v.x, -v.y}; };
    sys.g.map.jacobian = [](const Vec2&) { return Mat2{1, 0, 0, -1}; };
    sys.g.map.inverse = sys.g.map.forward;
    sys.g.fixed_curve = [](double s) { return Vec2{s, 0.0}; };
    sys.g.s_min = -1e6;
    sys.g.s_max = 1e6;
    sys.g.signed_distance = [](const Vec2& v) { return v.y; };

    // h2 = f o g : z -> e^{i psi} conj(z); fixed line at angle psi/2.
    const Mat2 h2m = rot * Mat2{1, 0, 0, -1};
    sys.h2.map.forward = [h2m](const Vec2& v) { return h2m * v; };
    sys.h2.map.jacobian = [h2m](const Vec2&) { return h2m; };
    sys.h2.map.inverse = sys.h2.map.forward;
    const double half = psi / 2.0;
    const Vec2 dir{std::cos(half), std::sin(half)};
    sys.h2.fixed_curve = [dir](double s) { return dir * s; };
    sys.h2.s_min = -1e6;
    sys.h2.s_max = 1e6;
    sys.h2.signed_distance = [dir](const Vec2& v) { return dir.x * v.y - dir.y * v.x; };
    return sys;
}

ReversibleSystem make_twist_std(double k, double twist) {
    if (!(k >= 0.0 && k <= 4.0))
        throw validation_error("twist-std: k must lie in [0, 4], got " + std::to_string(k));
    if (!(twist > 0.0 && twist <= 8.0))
        throw validation_error("twist-std: twist must lie in (0, 8], got " + std::to_string(twist));
    ReversibleSystem sys;
    sys.name = "twist-std";
    sys.params = {{"k", k}, {"twist", twist}};
    sys.residual_tol = 1e-12;
    sys.domain = {-1e12, 1e12, -50.0, 50.0};
    sys.sample_box = {-pi(), pi(), -2.0, 2.0};
    sys.wrap = [](const Vec2& v) { return Vec2{wrap_period(v.x, two_pi()), v.y}; };

    const double tau = twist;
    sys.f.forward = [k, tau](const Vec2& v) {
        const double yn = v.y + k * std::sin(v.x);
        return Vec2{v.x + tau * yn, yn};
    };
    sys.f.jacobian = [k, tau](const Vec2& v) {
        const double c = k * std::cos(v.x);
        return Mat2{1.0 + tau * c, tau, c, 1.0};
    };
    sys.f.inverse = [k, tau](const Vec2& v) {
        const double xp = v.x - tau * v.y;
        return Vec2{xp, v.y - k * std::sin(xp)};
    };

    // g: (x, y) -> (-x, y + k sin x); Fix(g) = {sin x = 0}.
    sys.g.map.forward = [k](const Vec2& v) { return Vec2{-v.x, v.y + k * std::sin(v.x)}; };
    sys.g.map.jacobian = [k](const Vec2& v) { return Mat2{-1.0, 0.0, k * std::cos(v.x), 1.0}; };
    sys.g.map.inverse = sys.g.map.forward;
    sys.g.fixed_curve = [](double s) { return Vec2{0.0, s}; };
    sys.g.s_min = -50.0;
    sys.g.s_max = 50.0;
    sys.g.signed_distance = [](const Vec2& v) { return std::sin(v.x); };

    // h2 = f o g: (x, y) -> (tau*y - x, y); Fix(h2) = {2x = tau*y (mod 2*pi)}.
    sys.h2.map.forward = [tau](const Vec2& v) { return Vec2{tau * v.y - v.x, v.y}; };
    sys.h2.map.jacobian = [tau](const Vec2&) { return Mat2{-1.0, tau, 0.0, 1.0}; };
    sys.h2.map.inverse = sys.h2.map.forward;
    sys.h2.fixed_curve = [tau](double s) { return Vec2{tau * s / 2.0, s}; };
    sys.h2.s_min = -50.0;
    sys.h2.s_max = 50.0;
    sys.h2.signed_distance = [tau](const Vec2& v) {
        return std::sin((tau * v.y - 2.0 * v.x) / 2.0);
    };
    return sys;
}

ReversibleSystem make_nf_map(const ResonantParams& params, double integrator_tol,
                             double guard_radius) {
    params.validate();
    if (!(integrator_tol > 0.0)) throw validation_error("nf-map: tol must be positive");
    if (!(guard_radius > 0.0)) throw validation_error("nf-map: guard radius must be positive");

    IntegratorOptions opt;
    opt.rtol = integrator_tol;
    opt.atol = integrator_tol * 1e-2;
    opt.guard_norm = guard_radius;

    ReversibleSystem sys;
    sys.name = "nf-map";
    sys.params = {{"p", double(params.p)}, {"q", double(params.q)}, {"mu", params.mu},
                  {"A", params.A},         {"B", params.B},         {"C", params.C},
                  {"tol", integrator_tol}, {"guard", guard_radius}};
    for (std::size_t j = 0; j < params.psi.size(); ++j)
        sys.params["psi" + std::to_string(j + 1)] = params.psi[j];
    sys.residual_tol = 1e-6;
    const double rbox = 0.4 * guard_radius;
    sys.domain = {-guard_radius, guard_radius, -guard_radius, guard_radius};
    sys.sample_box = {-rbox, rbox, -rbox, rbox};

    auto pshared = std::make_shared<ResonantParams>(params);
    sys.f.forward = [pshared, opt](const Vec2& v) {
        return to_vec(poincare_map(*pshared, to_cplx(v), opt));
    };
    sys.f.jacobian = [pshared, opt](const Vec2& v) {
        return poincare_map_with_jacobian(*pshared, to_cplx(v), opt).jacobian;
    };
    const double alpha = params.rotation_angle();
    sys.f.inverse = [pshared, opt, alpha](const Vec2& v) {
        const cplx w = std::polar(1.0, -alpha) * to_cplx(v);
        return to_vec(integrate_flow(*pshared, w, -1.0, opt));
    };

    sys.g.map.forward = [](const Vec2& v) { return Vec2{v.x, -v.y}; };
    sys.g.map.jacobian = [](const Vec2&) { return Mat2{1, 0, 0, -1}; };
    sys.g.map.inverse = sys.g.map.forward;
    sys.g.fixed_curve = [](double s) { return Vec2{s, 0.0}; };
    sys.g.s_min = -rbox;
    sys.g.s_max = rbox;
    sys.g.signed_distance = [](const Vec2& v) { return v.y; };

    // h2 = T o conj: an involution fixed near the line at angle alpha/2.
    auto h2fwd = [pshared, opt](const Vec2& v) {
        return to_vec(poincare_map(*pshared, std::conj(to_cplx(v)), opt));
    };
    sys.h2.map.forward = h2fwd;
    sys.h2.map.jacobian = [pshared, opt](const Vec2& v) {
        const Mat2 J = poincare_map_with_jacobian(*pshared, std::conj(to_cplx(v)), opt).jacobian;
        return J * Mat2{1, 0, 0, -1};
    };
    sys.h2.map.inverse = h2fwd;
    const Vec2 dir{std::cos(alpha / 2.0), std::sin(alpha / 2.0)};
    // Averaging projection onto Fix(h2): p <- (p + h2(p))/2 converges
    // quadratically onto the fixed curve of an involution.
    sys.h2.fixed_curve = [h2fwd, dir](double s) {
        Vec2 p = dir * s;
        for (int it = 0; it < 40; ++it) {
            const Vec2 image = h2fwd(p);
            if ((image - p).norm() <= 1e-11) break;
            p = (p + image) * 0.5;
        }
        return p;
    };
    sys.h2.s_min = -rbox;
    sys.h2.s_max = rbox;
    sys.h2.signed_distance = [h2fwd, dir](const Vec2& v) {
        const Vec2 d = h2fwd(v) - v;
        return dir.x * d.y - dir.y * d.x;
    };
    return sys;
}

ReversibleSystem make_builtin(const BuiltinSpec& spec) {
    std::map<std::string, double> p = spec.params;
    if (spec.name == "rigid-rotation") {
        const double psi = take(p, "psi", 0.3);
        reject_leftovers(p, spec.name, "psi");
        return make_rigid_rotation(psi);
    }
    if (spec.name == "twist-std") {
        const double k = take(p, "k", 0.5);
        const double twist = take(p, "twist", 1.0);
        reject_leftovers(p, spec.name, "k, twist");
        return make_twist_std(k, twist);
    }
    if (spec.name == "nf-map") {
        ResonantParams rp;
        rp.p = int(std::lround(take(p, "p", 1)));
        rp.q = int(std::lround(take(p, "q", 5)));
        rp.mu = take(p, "mu", 0.0);
        rp.A = take(p, "A", 1.0);
        rp.B = take(p, "B", 0.0);
        rp.C = take(p, "C", 0.0);
        const double tol = take(p, "tol", 1e-12);
        const double guard = take(p, "guard", 1.0);
        take(p, "psi", 0.0);  // a single Psi_1 also lands in the scalar params
        reject_leftovers(p, spec.name, "p, q, mu, A, B, C, psi, tol, guard");
        rp.psi = spec.psi.empty() ? std::vector<double>{1.0} : spec.psi;
        return make_nf_map(rp, tol, guard);
    }
    throw validation_error("unknown built-in system '" + spec.name +
                           "' (known: rigid-rotation, twist-std, nf-map)");
}

}  // namespace revlab
