#include <doctest.h>

#include <cmath>

#include "revlab/builtin_systems.hpp"
#include "revlab/errors.hpp"
#include "revlab/orbit.hpp"
#include "revlab/scan.hpp"

using namespace revlab;

namespace {
ResonantParams degenerate_q6(double A, double mu, double B = 1.0, double C = -1.0) {
    ResonantParams p;
    p.q = 6;
    p.p = 1;
    p.psi = {1.0};
    p.A = A;
    p.B = B;
    p.C = C;
    p.mu = mu;
    return p;
}
}  // namespace

TEST_CASE("mu sweep: single birth event bracketing mu = 0") {
    ResonantParams p;
    p.q = 5;
    p.p = 1;
    p.psi = {1.0};
    p.A = 1.0;
    MuSweepOptions opt;
    opt.mu_lo = -0.02;
    opt.mu_hi = 0.02;
    opt.resolution = 21;
    const MuSweepResult res = mu_sweep(p, opt);
    REQUIRE(res.events.size() == 1);
    CHECK(res.events[0].param_lo <= 0.0);
    CHECK(res.events[0].param_hi >= 0.0);
    for (const EquilibriumCount& c : res.table) {
        if (c.mu < 0.0) {
            CHECK(c.total == 10);
            CHECK(c.saddles == 5);
            CHECK(c.centers == 5);
        } else if (c.mu > 0.0) {
            CHECK(c.total == 0);
        }
    }

    // flipping Psi_1 flips the existence side
    ResonantParams pm = p;
    pm.psi = {-1.0};
    pm.A = -1.0;
    const MuSweepResult resm = mu_sweep(pm, opt);
    for (const EquilibriumCount& c : resm.table) {
        if (c.mu > 0.0) CHECK(c.total == 10);
        if (c.mu < 0.0) CHECK(c.total == 0);
    }

    // grid refinement: the event count is stable, the bracket tightens
    MuSweepOptions fine = opt;
    fine.resolution = 41;
    const MuSweepResult res2 = mu_sweep(p, fine);
    REQUIRE(res2.events.size() == 1);
    CHECK(res2.events[0].param_hi - res2.events[0].param_lo <
          res.events[0].param_hi - res.events[0].param_lo);
}

TEST_CASE("pitchfork scan: interval around A*Psi1/(C-B), widths shrink with A") {
    ResonantParams p = degenerate_q6(2e-4, 0.0);
    PitchforkScanOptions opt;
    for (int j = 0; j < 5; ++j) opt.A_values.push_back(2e-4 * std::pow(2.0, -j));
    const PitchforkScanResult res = pitchfork_scan(p, opt);
    REQUIRE(res.rows.size() == 5);
    double prev_width = 1e300;
    for (const PitchforkRow& row : res.rows) {
        CHECK(row.region_found);
        CHECK(row.contains_predicted);
        CHECK(row.sink_source);
        CHECK(row.interval_width > 0.0);
        CHECK(row.interval_width < prev_width);
        prev_width = row.interval_width;
        // interval center tracks the prediction to first order in A
        const double center = 0.5 * (row.mu_lo_boundary + row.mu_hi_boundary);
        CHECK(std::abs(center - row.mu_center_predicted) <=
              1e-6 * std::abs(row.mu_center_predicted) + 1e-18);
    }
    // pitchfork events were bracketed on both sides of every found interval
    int pitchforks = 0;
    for (const BifurcationEvent& ev : res.events)
        if (ev.kind == "pitchfork") ++pitchforks;
    CHECK(pitchforks == 10);

    // A = 0 degenerates: no asymmetric equilibria anywhere
    ResonantParams p0 = degenerate_q6(0.0, -1e-4);
    CHECK_THROWS_AS(certify_sink_source(p0), validation_error);
    PitchforkScanOptions zopt;
    zopt.A_values = {0.0};
    zopt.mu_lo = -1e-4;
    zopt.mu_hi = 1e-4;
    const PitchforkScanResult zres = pitchfork_scan(p0, zopt);
    REQUIRE(zres.rows.size() == 1);
    CHECK_FALSE(zres.rows[0].region_found);
}

TEST_CASE("pitchfork scan: center tracks A*Psi1/(C-B) to first order in A") {
    // with Psi_2 != 0 the true center -Psi(rho0) differs from the leading
    // order by -Psi_2 * rho0^4 = O(A^2); the deviation must shrink quadratically
    ResonantParams p = degenerate_q6(2e-4, 0.0);
    p.psi = {1.0, 0.5};
    PitchforkScanOptions opt;
    for (int j = 0; j < 4; ++j) opt.A_values.push_back(2e-4 * std::pow(2.0, -j));
    const PitchforkScanResult res = pitchfork_scan(p, opt);
    REQUIRE(res.rows.size() == 4);
    std::vector<double> devs;
    for (const PitchforkRow& row : res.rows) {
        REQUIRE(row.region_found);
        const double center = 0.5 * (row.mu_lo_boundary + row.mu_hi_boundary);
        devs.push_back(std::abs(center - row.mu_center_predicted));
        // the exact center still lies inside the measured interval shifted by
        // the second-order term, so containment of the prediction can fail;
        // what must hold is the quadratic tracking
        const double rho0sq = row.A / (p.B - p.C);
        CHECK(devs.back() == doctest::Approx(0.5 * rho0sq * rho0sq).epsilon(1e-3));
    }
    for (std::size_t i = 0; i + 1 < devs.size(); ++i)
        CHECK(devs[i] == doctest::Approx(4.0 * devs[i + 1]).epsilon(1e-2));
}

TEST_CASE("pitchfork boundary: a symmetric equilibrium loses hyperbolicity") {
    ResonantParams p = degenerate_q6(2e-4, 0.0);
    PitchforkScanOptions opt;
    opt.A_values = {2e-4};
    const PitchforkScanResult res = pitchfork_scan(p, opt);
    REQUIRE(res.rows.size() == 1);
    const PitchforkRow& row = res.rows[0];
    REQUIRE(row.region_found);
    // at the boundary, the merging symmetric equilibrium has an eigenvalue
    // within a bracket-width-proportional tolerance of zero
    ResonantParams pb = p;
    pb.mu = row.mu_hi_boundary;
    double min_eig = 1e300;
    for (const Equilibrium& e : find_equilibria(pb))
        if (e.symmetric)
            min_eig = std::min(min_eig, std::min(std::abs(e.eig1), std::abs(e.eig2)));
    // d(eig^2)/dmu is O(q * rho^{q-2}-ish); use a generous proportional bound
    const double dmu = std::max(row.bracket_width, 1e-18);
    CHECK(min_eig * min_eig <= 1e6 * dmu);
}

TEST_CASE("certify_sink_source: positive and negative cases") {
    const CertifyResult good = certify_sink_source(degenerate_q6(2e-4, -1e-4));
    REQUIRE(good.certified);
    CHECK(good.certificate->sink.type == EquilibriumType::sink);
    CHECK(good.certificate->source.type == EquilibriumType::source);
    CHECK(good.certificate->symmetry_residual <= 1e-8);
    CHECK(good.certificate->delta > 0.0);

    // B = 0: B(B-C) = 0 and the asymmetric branch degenerates (the angular
    // equation loses its cos(phi) term); no isolated pair exists off the exact
    // center, so certification reports the precondition failure
    CHECK_THROWS_AS(certify_sink_source(degenerate_q6(2e-4, -2e-4, 0.0, -1.0)),
                    validation_error);
    CHECK_THROWS_AS(certify_sink_source(degenerate_q6(2e-4, -2.1e-4, 0.0, -1.0)),
                    validation_error);

    // swapping B and C (with A flipped so the asymmetric radius stays real)
    // keeps B(B-C) = 2 > 0: still certified
    const CertifyResult swapped = certify_sink_source(degenerate_q6(-2e-4, -1e-4, -1.0, 1.0));
    CHECK(swapped.certified);

    // saddle pair when B(B-C) < 0: B=0.2, C=1.2 -> B(B-C) = -0.2
    ResonantParams psad = degenerate_q6(-2e-4, 0.0, 0.2, 1.2);
    const double rho0 = std::sqrt(psad.A / (psad.B - psad.C));
    psad.mu = -psad.psi_sum(rho0);
    const CertifyResult sad = certify_sink_source(psad);
    CHECK_FALSE(sad.certified);
}

TEST_CASE("map_level_confirm: flow classes match the Poincare-map classes") {
    // conservative q = 5 chain: saddle and center
    ResonantParams p;
    p.q = 5;
    p.p = 1;
    p.psi = {1.0};
    p.A = 1.0;
    p.mu = -0.01;
    const auto eqs = find_equilibria(p);
    REQUIRE(eqs.size() == 10);
    bool saw_saddle = false, saw_center = false;
    for (const Equilibrium& e : eqs) {
        if (e.type == EquilibriumType::saddle && !saw_saddle) {
            const MapConfirmReport rep = map_level_confirm(p, e);
            CHECK(rep.matches);
            CHECK(rep.map_class == OrbitClass::saddle);
            CHECK(rep.pairing_residual <= 1e-6);
            CHECK(rep.route_disagreement <= 1e-9);
            saw_saddle = true;
        }
        if (e.type == EquilibriumType::center && !saw_center) {
            const MapConfirmReport rep = map_level_confirm(p, e);
            CHECK(rep.matches);
            CHECK(rep.map_class == OrbitClass::elliptic);
            CHECK(std::abs(std::abs(rep.mult1) - 1.0) <= 1e-6);
            saw_center = true;
        }
    }
    CHECK(saw_saddle);
    CHECK(saw_center);
}

TEST_CASE("map_level_confirm: the degenerate sink survives at map level") {
    ResonantParams p = degenerate_q6(2e-4, -1e-4);
    const CertifyResult cert = certify_sink_source(p);
    REQUIRE(cert.certified);
    const MapConfirmReport rep = map_level_confirm(p, cert.certificate->sink);
    CHECK(rep.matches);
    CHECK(rep.map_class == OrbitClass::sink);
    CHECK(rep.delta > 0.0);
    CHECK(std::abs(rep.mult1) < 1.0);
    CHECK(std::abs(rep.mult2) < 1.0);

    const MapConfirmReport rep2 = map_level_confirm(p, cert.certificate->source);
    CHECK(rep2.matches);
    CHECK(rep2.map_class == OrbitClass::source);
}

TEST_CASE("g_pair inverts multipliers of the map-level sink/source orbits") {
    ResonantParams p = degenerate_q6(2e-4, -1e-4);
    const CertifyResult cert = certify_sink_source(p);
    REQUIRE(cert.certified);
    const MapConfirmReport sink_rep = map_level_confirm(p, cert.certificate->sink);

    ReversibleSystem sys = make_nf_map(p, 1e-13, 0.5);
    auto orbit = build_periodic_orbit(sys, sink_rep.points[0], p.q, SymmetryTag::none, 1e-8);
    REQUIRE(orbit.has_value());
    const PeriodicOrbit image = g_pair(sys, *orbit, 1e-6);
    // sink and source swap: the image orbit expands area where the original
    // contracts it (per-multiplier moduli sit too close to 1 for eigenvalues,
    // so the determinant carries the verdict)
    CHECK(orbit->jacobian_det < 1.0 - 1e-11);
    CHECK(image.jacobian_det > 1.0 + 1e-11);
    CHECK(std::abs(image.jacobian_det * orbit->jacobian_det - 1.0) <= 1e-8);
}
