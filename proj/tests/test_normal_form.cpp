#include <doctest.h>

#include <cmath>
#include <random>

#include "revlab/equilibria.hpp"
#include "revlab/errors.hpp"
#include "revlab/pendulum.hpp"
#include "revlab/resonant_field.hpp"
#include "revlab/util.hpp"

using namespace revlab;

namespace {

ResonantParams q5_conservative(double mu) {
    ResonantParams p;
    p.p = 1;
    p.q = 5;
    p.mu = mu;
    p.psi = {1.0};
    p.A = 1.0;
    return p;
}

// independent oracle: scalar bisection for mu + Psi(rho) + sgn*A*rho^{q-2}... = 0
double radial_root_oracle(const ResonantParams& p, double sgn, double lo, double hi) {
    auto f = [&](double r) {
        return p.mu + p.psi_sum(r) + sgn * std::pow(r, p.q - 2) * (p.A + (p.B + p.C) * r * r);
    };
    double flo = f(lo);
    REQUIRE(flo * f(hi) < 0.0);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((fm < 0.0) == (flo < 0.0)) { lo = mid; flo = fm; }
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("cartesian field: hand values and reversibility identity") {
    ResonantParams p = q5_conservative(0.1);
    // z real 0.1: i*(mu*z + Psi1*z^3 + A*z^4) = i * 0.0111
    const cplx v = eval_field_cartesian(p, cplx(0.1, 0.0));
    CHECK(v.real() == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(v.imag() == doctest::Approx(0.0111).epsilon(1e-13));

    CHECK(std::abs(eval_field_cartesian(p, cplx(0, 0))) == 0.0);

    // conj(V(conj z)) = -V(z) for any parameter set
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    ResonantParams pd = p;
    pd.q = 6;
    pd.p = 1;
    pd.B = 0.7;
    pd.C = -0.3;
    pd.psi = {1.0, -0.4, 0.2};
    for (int i = 0; i < 100; ++i) {
        const cplx z(u(rng), u(rng));
        for (const ResonantParams* pp : {&p, &pd}) {
            const cplx lhs = std::conj(eval_field_cartesian(*pp, std::conj(z)));
            const cplx rhs = -eval_field_cartesian(*pp, z);
            CHECK(std::abs(lhs - rhs) <= 1e-14 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("rotational equivariance of the field") {
    ResonantParams p = q5_conservative(-0.03);
    p.B = 0.0;
    p.C = 0.0;
    ResonantParams pd;
    pd.q = 7;
    pd.p = 2;
    pd.mu = 0.01;
    pd.psi = {0.8, 0.1};
    pd.A = -0.6;
    pd.B = 0.5;
    pd.C = 0.25;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (const ResonantParams* pp : {&p, &pd}) {
        const cplx w = std::polar(1.0, two_pi() / double(pp->q));
        for (int i = 0; i < 200; ++i) {
            const cplx z(u(rng), u(rng));
            const cplx lhs = eval_field_cartesian(*pp, w * z);
            const cplx rhs = w * eval_field_cartesian(*pp, z);
            CHECK(std::abs(lhs - rhs) <= 1e-13 * std::max(1.0, std::abs(rhs)));
        }
    }
}

TEST_CASE("polar field: pinned example and cartesian consistency") {
    ResonantParams p = q5_conservative(-0.01);
    // rho=0.1, phi=pi/2 (rescaled angle): rho_dot = rho^4 * A = 1e-4, phi_dot = 0
    const PolarVelocity v = eval_field_polar(p, 0.1, pi() / 2.0);
    CHECK(v.rho_dot == doctest::Approx(1e-4).epsilon(1e-12));
    CHECK(v.phi_dot == doctest::Approx(0.0).epsilon(1e-12));

    // sin(phi) = 0 makes the radial component vanish exactly
    CHECK(eval_field_polar(p, 0.07, 0.0).rho_dot == 0.0);
    CHECK(eval_field_polar(p, 0.07, pi()).rho_dot == doctest::Approx(0.0).epsilon(1e-18));

    CHECK_THROWS_AS(eval_field_polar(p, -0.1, 0.0), domain_error);

    // coordinate-change oracle: polar vs cartesian at random points
    ResonantParams pd;
    pd.q = 6;
    pd.mu = -2e-4;
    pd.psi = {1.0, 0.3};
    pd.A = 2e-4;
    pd.B = 1.0;
    pd.C = -1.0;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ur(0.01, 0.5), ua(0.0, two_pi());
    for (const ResonantParams* pp : {&p, &pd}) {
        for (int i = 0; i < 1000; ++i) {
            const double rho = ur(rng), ang = ua(rng);
            const cplx z = std::polar(rho, ang);
            const cplx vc = eval_field_cartesian(*pp, z);
            const cplx e = std::polar(1.0, ang);
            const double rho_dot = (std::conj(e) * vc).real();
            const double phi_dot = double(pp->q) * (std::conj(e) * vc).imag() / rho;
            const PolarVelocity pv = eval_field_polar(*pp, rho, double(pp->q) * ang);
            const double scale = std::max({std::abs(rho_dot), std::abs(phi_dot), 1e-3});
            CHECK(std::abs(pv.rho_dot - rho_dot) <= 1e-12 * scale);
            CHECK(std::abs(pv.phi_dot - phi_dot) <= 1e-12 * scale);
        }
    }
}

TEST_CASE("divergence: closed form vs finite differences; conservative case vanishes") {
    ResonantParams pd;
    pd.q = 6;
    pd.mu = 0.01;
    pd.psi = {1.0, 0.2};
    pd.A = 0.3;
    pd.B = 1.2;
    pd.C = -0.4;
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> u(-0.4, 0.4);
    for (int i = 0; i < 200; ++i) {
        const cplx z(u(rng), u(rng));
        const double h = 1e-5;
        const cplx vxp = eval_field_cartesian(pd, z + cplx(h, 0));
        const cplx vxm = eval_field_cartesian(pd, z - cplx(h, 0));
        const cplx vyp = eval_field_cartesian(pd, z + cplx(0, h));
        const cplx vym = eval_field_cartesian(pd, z - cplx(0, h));
        const double div_fd = (vxp.real() - vxm.real()) / (2 * h) +
                              (vyp.imag() - vym.imag()) / (2 * h);
        CHECK(divergence_cartesian(pd, z) == doctest::Approx(div_fd).epsilon(1e-5));
    }

    // B = C = 0: divergence identically zero
    ResonantParams p = q5_conservative(-0.01);
    p.psi = {1.0, -0.5};
    for (int i = 0; i < 1000; ++i) {
        const cplx z(u(rng), u(rng));
        CHECK(std::abs(divergence_cartesian(p, z)) <= 1e-13);
    }
    // nonzero for B != 0 off the symmetry angles
    CHECK(std::abs(divergence_cartesian(pd, std::polar(0.3, 0.37))) > 1e-8);
    // vanishes on the real axis (sin q*phi = 0) for any parameters
    CHECK(std::abs(divergence_cartesian(pd, cplx(0.3, 0.0))) <= 1e-13);
}

TEST_CASE("field jacobian matches finite differences") {
    ResonantParams pd;
    pd.q = 5;
    pd.mu = -0.02;
    pd.psi = {0.9, 0.1};
    pd.A = 0.8;
    pd.B = 0.3;
    pd.C = 0.6;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-0.3, 0.3);
    for (int i = 0; i < 50; ++i) {
        const cplx z(u(rng), u(rng));
        const Mat2 J = field_jacobian(pd, z);
        const double h = 1e-6;
        const cplx vxp = eval_field_cartesian(pd, z + cplx(h, 0));
        const cplx vxm = eval_field_cartesian(pd, z - cplx(h, 0));
        const cplx vyp = eval_field_cartesian(pd, z + cplx(0, h));
        const cplx vym = eval_field_cartesian(pd, z - cplx(0, h));
        CHECK(J.a11 == doctest::Approx((vxp.real() - vxm.real()) / (2 * h)).epsilon(1e-6));
        CHECK(J.a12 == doctest::Approx((vyp.real() - vym.real()) / (2 * h)).epsilon(1e-6));
        CHECK(J.a21 == doctest::Approx((vxp.imag() - vxm.imag()) / (2 * h)).epsilon(1e-6));
        CHECK(J.a22 == doctest::Approx((vyp.imag() - vym.imag()) / (2 * h)).epsilon(1e-6));
    }
}

TEST_CASE("flow map: zero field, pure rotation, reversibility, area preservation") {
    ResonantParams zero;
    zero.q = 5;
    zero.psi = {0.0};
    zero.A = 0.0;
    const cplx z0(0.3, -0.2);
    CHECK(std::abs(integrate_flow(zero, z0, 1.0) - z0) <= 1e-14);

    ResonantParams lin = zero;
    lin.mu = 0.37;
    const cplx expect = std::polar(1.0, 0.37) * z0;
    CHECK(std::abs(integrate_flow(lin, z0, 1.0) - expect) <= 1e-10);

    ResonantParams p = q5_conservative(-0.01);
    // time-1 map F: conj o F o conj = F^{-1}
    for (const cplx z : {cplx(0.1, 0.05), cplx(-0.12, 0.08), cplx(0.02, -0.15)}) {
        const cplx w = std::conj(integrate_flow(p, std::conj(z), 1.0));
        const cplx back = integrate_flow(p, w, 1.0);
        CHECK(std::abs(back - z) <= 1e-10);
    }
    // conservative flow preserves area: |det DF - 1| small (variational route)
    for (const cplx z : {cplx(0.1, 0.0), cplx(0.05, 0.1), cplx(-0.08, -0.03)}) {
        const FlowResult fr = integrate_flow_with_jacobian(p, z, 1.0);
        CHECK(std::abs(fr.jacobian.det() - 1.0) <= 1e-6);
        // cross-check the variational Jacobian against finite differences
        const double h = 1e-6;
        const cplx fxp = integrate_flow(p, z + cplx(h, 0), 1.0);
        const cplx fxm = integrate_flow(p, z - cplx(h, 0), 1.0);
        CHECK(fr.jacobian.a11 == doctest::Approx((fxp.real() - fxm.real()) / (2 * h)).epsilon(1e-5));
        CHECK(fr.jacobian.a21 == doctest::Approx((fxp.imag() - fxm.imag()) / (2 * h)).epsilon(1e-5));
    }
}

TEST_CASE("poincare map: exact rotation for zero field, reversibility") {
    ResonantParams zero;
    zero.q = 5;
    zero.p = 1;
    zero.psi = {0.0};
    zero.A = 0.0;
    cplx z(0.2, 0.1);
    cplx w = z;
    for (int i = 0; i < 5; ++i) w = poincare_map(zero, w);
    CHECK(std::abs(w - z) <= 1e-12);

    // conj o T o conj o T = id within integration error
    ResonantParams p = q5_conservative(-0.01);
    for (const cplx s : {cplx(0.09, 0.02), cplx(-0.1, 0.06)}) {
        const cplx t1 = poincare_map(p, s);
        const cplx t2 = poincare_map(p, std::conj(t1));
        CHECK(std::abs(std::conj(t2) - s) <= 1e-9);
    }
}

TEST_CASE("poincare map: flow equilibria are period-q points of T") {
    ResonantParams p = q5_conservative(-0.01);
    const auto eqs = find_equilibria(p);
    REQUIRE_FALSE(eqs.empty());
    for (const Equilibrium* e : {&eqs.front(), &eqs.back()}) {
        cplx z = std::polar(e->rho, e->polar_angle);
        for (int i = 0; i < p.q; ++i) z = poincare_map(p, z);
        CHECK(std::abs(z - std::polar(e->rho, e->polar_angle)) <= 1e-6);
    }
}

TEST_CASE("equilibria: 2q chain for mu*Psi1 < 0, none for mu*Psi1 > 0") {
    for (int q : {5, 6, 7}) {
        for (double sign : {1.0, -1.0}) {
            ResonantParams p;
            p.q = q;
            p.p = 1;
            p.psi = {sign};
            p.A = sign;
            p.mu = -0.01 * sign;  // mu*Psi1 = -0.01
            auto eqs = find_equilibria(p);
            CHECK(eqs.size() == std::size_t(2 * q));
            int saddles = 0, centers = 0;
            for (const Equilibrium& e : eqs) {
                CHECK(e.symmetric);
                CHECK(std::abs(std::sin(double(q) * e.polar_angle)) <= 1e-10);
                if (e.type == EquilibriumType::saddle) ++saddles;
                if (e.type == EquilibriumType::center) ++centers;
            }
            CHECK(saddles == q);
            CHECK(centers == q);

            // radii agree with the independent scalar bisection oracle
            ResonantParams pp = p;
            const double oracle_s = radial_root_oracle(pp, 1.0, 1e-4, 0.3);
            bool found = false;
            for (const Equilibrium& e : eqs)
                if (std::abs(e.rho - oracle_s) <= 1e-12) found = true;
            CHECK(found);

            pp.mu = -p.mu;  // mu*Psi1 > 0: no small-rho equilibria
            CHECK(find_equilibria(pp).empty());
        }
    }
}

TEST_CASE("equilibria: alternating saddle/center around the circle") {
    ResonantParams p = q5_conservative(-0.01);
    auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 10);
    // sort by polar angle; classification alternates
    std::vector<Equilibrium> by_angle = eqs;
    std::sort(by_angle.begin(), by_angle.end(),
              [](const Equilibrium& a, const Equilibrium& b) {
                  return a.polar_angle < b.polar_angle;
              });
    for (std::size_t i = 0; i + 1 < by_angle.size(); ++i)
        CHECK(by_angle[i].type != by_angle[i + 1].type);
}

TEST_CASE("equilibria: asymmetric pair of the degenerate form") {
    ResonantParams p;
    p.q = 6;
    p.p = 1;
    p.psi = {1.0};
    p.A = 2e-4;
    p.B = 1.0;
    p.C = -1.0;
    p.mu = -1e-4;  // A*Psi1/(C-B)
    auto eqs = find_equilibria(p);
    int asym = 0;
    int sinks = 0, sources = 0;
    for (const Equilibrium& e : eqs) {
        if (e.symmetric) continue;
        ++asym;
        CHECK(e.rho == doctest::Approx(0.01).epsilon(1e-10));
        if (e.type == EquilibriumType::sink) ++sinks;
        if (e.type == EquilibriumType::source) ++sources;
    }
    CHECK(asym == 2);
    CHECK(sinks == 1);   // B(B-C) = 2 > 0
    CHECK(sources == 1);
    CHECK(eqs.size() == std::size_t(2 * 6 + 2));

    // eigenvalue real parts of the pair are negatives of each other
    const Equilibrium* sink = nullptr;
    const Equilibrium* source = nullptr;
    for (const Equilibrium& e : eqs) {
        if (e.type == EquilibriumType::sink) sink = &e;
        if (e.type == EquilibriumType::source) source = &e;
    }
    REQUIRE(sink);
    REQUIRE(source);
    CHECK(std::abs(sink->eig1.real() + source->eig1.real()) <= 1e-8);
    CHECK(std::abs(sink->eig2.real() + source->eig2.real()) <= 1e-8);
}

TEST_CASE("pendulum rescaling: deviation scaling exponent near 1/4") {
    ResonantParams p = q5_conservative(-1.0);  // mu supplied per call
    std::vector<double> lmu, ldev;
    for (int j = 0; j < 8; ++j) {
        const double mu = -1e-6 * std::pow(1e3, double(j) / 7.0);  // 1e-6 .. 1e-3
        const double dev = pendulum_deviation(p, mu);
        CHECK(dev > 0.0);
        lmu.push_back(std::log(std::abs(mu)));
        ldev.push_back(std::log(dev));
    }
    const double slope = fit_line(lmu, ldev).slope;
    CHECK(slope >= 0.15);
    CHECK(slope <= 0.35);
    // deviation decreases monotonically toward mu -> 0
    for (int j = 0; j + 1 < 8; ++j) CHECK(ldev[j] < ldev[j + 1]);
}

TEST_CASE("pendulum rescaling: reversor symmetry of the deviation field") {
    ResonantParams p = q5_conservative(-1.0);
    const double mu = -1e-4;
    ResonantParams pm = p;
    pm.mu = mu;
    const PendulumRescaling s = solve_pendulum_rescaling(pm, mu);
    // the rescaled field satisfies sigma V(sigma x) = -V(x) with sigma(phi,u) = (-phi,u):
    // |D_phi| is even and D_u odd under the phi-mirror
    for (double phi : {0.1, 0.3, 0.55}) {
        for (double u : {-0.7, 0.2, 0.9}) {
            const Vec2 vp = rescaled_field(pm, s, phi, u);
            const Vec2 vm = rescaled_field(pm, s, -phi, u);
            CHECK(vm.x == doctest::Approx(vp.x).epsilon(1e-12));
            CHECK(vm.y == doctest::Approx(-vp.y).epsilon(1e-12));
        }
    }
    // hence the sup-deviation over a box is invariant under the phi-mirror
    DeviationBox right;
    right.phi_lo = 0.0;
    right.phi_hi = pi() / 5.0;
    DeviationBox left;
    left.phi_lo = -pi() / 5.0;
    left.phi_hi = 0.0;
    CHECK(pendulum_deviation(p, mu, right) ==
          doctest::Approx(pendulum_deviation(p, mu, left)).epsilon(1e-12));

    CHECK_THROWS_AS(solve_pendulum_rescaling(pm, +1e-4), validation_error);
}

TEST_CASE("resonant params validation") {
    ResonantParams p;
    p.q = 4;
    CHECK_THROWS_AS(p.validate(), validation_error);
    p.q = 6;
    p.p = 2;  // gcd 2
    CHECK_THROWS_AS(p.validate(), validation_error);
    p.p = 1;
    CHECK_NOTHROW(p.validate());
}
