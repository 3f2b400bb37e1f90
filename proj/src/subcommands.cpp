#include "revlab/subcommands.hpp"

#include <algorithm>
#include <cmath>

#include "revlab/annulus_chart.hpp"
#include "revlab/builtin_systems.hpp"
#include "revlab/diophantine.hpp"
#include "revlab/equilibria.hpp"
#include "revlab/errors.hpp"
#include "revlab/kam_ops.hpp"
#include "revlab/orbit.hpp"
#include "revlab/pendulum.hpp"
#include "revlab/report.hpp"
#include "revlab/scan.hpp"
#include "revlab/symmetry_search.hpp"
#include "revlab/util.hpp"

namespace revlab {

namespace {

json config_echo(const RunConfig& cfg) {
    json j;
    j["command"] = cfg.command;
    j["seed"] = cfg.seed;
    j["threads"] = cfg.threads;
    json sys;
    sys["name"] = cfg.system.name;
    for (const auto& [k, v] : cfg.system.params) sys[k] = v;
    if (!cfg.system.psi.empty()) sys["psi"] = cfg.system.psi;
    j["system"] = sys;
    if (!cfg.chart.empty()) {
        json ch;
        for (const auto& [k, v] : cfg.chart) ch[k] = v;
        j["chart"] = ch;
    }
    json op;
    for (const auto& [k, v] : cfg.op) op[k] = v;
    for (const auto& [k, v] : cfg.op_str) op[k] = v;
    for (const auto& [k, v] : cfg.op_list) op[k] = v;
    j["op"] = op;
    return j;
}

std::string csv_comment(const RunConfig& cfg) {
    return "revlab " + cfg.command + " seed=" + std::to_string(cfg.seed);
}

ResonantParams params_from_config(const RunConfig& cfg) {
    if (cfg.system.name != "nf-map")
        throw validation_error("command '" + cfg.command +
                               "' operates on the normal form; set [system] name = nf-map");
    ResonantParams p;
    auto get = [&](const std::string& k, double fb) {
        auto it = cfg.system.params.find(k);
        return it == cfg.system.params.end() ? fb : it->second;
    };
    p.p = int(std::lround(get("p", 1)));
    p.q = int(std::lround(get("q", 5)));
    p.mu = get("mu", 0.0);
    p.A = get("A", 1.0);
    p.B = get("B", 0.0);
    p.C = get("C", 0.0);
    p.psi = cfg.system.psi.empty() ? std::vector<double>{1.0} : cfg.system.psi;
    p.validate();
    return p;
}

AnnulusChart chart_from_config(const RunConfig& cfg, const ReversibleSystem& sys) {
    if (sys.name == "rigid-rotation") return AnnulusChart::polar(sys, cfg.chart.at("r0"));
    if (sys.name != "twist-std")
        throw validation_error("annulus charts support the twist-std and rigid-rotation systems");
    AnnulusChart::BuildOptions opt;
    opt.target_rotation = cfg.chart.at("target_rotation");
    if (opt.target_rotation == 0.0)
        throw validation_error("chart.target_rotation is required for twist-std charts");
    opt.seed_x = cfg.chart.at("seed_x");
    opt.seed_y_lo = cfg.chart.at("seed_y_lo");
    opt.seed_y_hi = cfg.chart.at("seed_y_hi");
    if (opt.seed_y_lo == 0.0 && opt.seed_y_hi == 0.0) {
        // default window from the small-k twist approximation psi = tau*y/(2*pi)
        const double tau = sys.params.count("twist") ? sys.params.at("twist") : 1.0;
        opt.seed_y_lo = two_pi() * (opt.target_rotation - 0.05) / tau;
        opt.seed_y_hi = two_pi() * (opt.target_rotation + 0.05) / tau;
    }
    opt.fit_iterates = long(cfg.chart.at("fit_iterates"));
    opt.rot_iterates = long(cfg.chart.at("rot_iterates"));
    opt.fourier_order = int(cfg.chart.at("fourier_order"));
    opt.grid = int(cfg.chart.at("grid"));
    opt.normalize_order = int(cfg.chart.at("normalize_order"));
    opt.extract_step = cfg.chart.at("extract_step");
    opt.center_offset = cfg.chart.at("center_offset");
    return AnnulusChart::build_on_curve(sys, opt);
}

json equilibrium_json(const Equilibrium& e) {
    json j;
    j["rho"] = e.rho;
    j["phi"] = e.phi;
    j["polar_angle"] = e.polar_angle;
    j["x"] = e.location().real();
    j["y"] = e.location().imag();
    j["type"] = to_string(e.type);
    j["symmetric"] = e.symmetric;
    j["eigenvalues"] = {{e.eig1.real(), e.eig1.imag()}, {e.eig2.real(), e.eig2.imag()}};
    j["linearization"] = {{e.linearization.a11, e.linearization.a12},
                          {e.linearization.a21, e.linearization.a22}};
    return j;
}

std::string classification_string(const PeriodicOrbit& o) {
    if (o.cls.kind == OrbitClass::elliptic) return fmt_double(o.cls.angle);
    return fmt_double(o.cls.modulus1) + ";" + fmt_double(o.cls.modulus2);
}

// ---- individual subcommands ----

RunResult run_check_rev(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    const int n = int(cfg.op.at("samples"));
    double tol = cfg.op.at("tol");
    if (tol == 0.0) tol = (sys.name == "nf-map") ? 1e-6 : 1e-9;
    const auto samples = sample_box(sys.sample_box, n, cfg.seed);

    const CheckReport rev = check_reversibility(sys, samples, tol);
    const CheckReport inv_g = check_involution(sys.g, samples, tol);
    const CheckReport inv_h2 = check_involution(sys.h2, samples, tol);

    json j;
    j["seed"] = cfg.seed;
    j["system"] = sys.name;
    j["samples"] = n;
    j["tol"] = tol;
    j["reversibility"] = {{"max_residual", rev.max_residual},
                          {"pass", rev.pass},
                          {"skipped", rev.skipped}};
    j["involution_g"] = {{"max_residual", inv_g.max_residual}, {"pass", inv_g.pass}};
    j["involution_h2"] = {{"max_residual", inv_h2.max_residual}, {"pass", inv_h2.pass}};
    const bool all = rev.pass && inv_g.pass && inv_h2.pass;
    j["pass"] = all;
    bundle.add_file("report.json", json_str(j));
    return {{}, std::string(all ? "PASS" : "FAIL") +
                    " max residual " + fmt_double(rev.max_residual)};
}

RunResult run_find_sym_orbits(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    SymmetrySearchWindow w;
    w.source = cfg.op_str.at("source") == "h2" ? InvolutionChoice::h2 : InvolutionChoice::g;
    w.s_lo = cfg.op.at("s_lo");
    w.s_hi = cfg.op.at("s_hi");
    w.half_period = int(cfg.op.at("k"));
    w.scan_points = int(cfg.op.at("scan_points"));
    w.refine_tol = cfg.op.at("refine_tol");
    w.closure_tol = cfg.op.at("closure_tol");
    w.classify_tol = cfg.op.at("classify_tol");
    w.curve_shift = {cfg.op.at("shift_x"), cfg.op.at("shift_y")};
    const auto orbits = find_symmetric_periodic(sys, w);

    CsvTable table({"orbit_id", "period", "symmetry", "class", "psi_or_moduli", "jacobian_det",
                    "points_ref"},
                   csv_comment(cfg));
    CsvTable points({"orbit_id", "index", "x", "y"}, csv_comment(cfg));
    int id = 0;
    for (const PeriodicOrbit& o : orbits) {
        table.add_row({std::to_string(id), std::to_string(o.period), to_string(o.symmetry),
                       to_string(o.cls.kind), classification_string(o),
                       CsvTable::cell(o.jacobian_det),
                       "orbit_points.csv#" + std::to_string(id)});
        for (std::size_t i = 0; i < o.points.size(); ++i)
            points.add_row({std::to_string(id), std::to_string(i),
                            CsvTable::cell(o.points[i].x), CsvTable::cell(o.points[i].y)});
        ++id;
    }
    bundle.add_file("orbits.csv", table.str());
    bundle.add_file("orbit_points.csv", points.str());
    return {{}, std::to_string(orbits.size()) + " orbit(s) found"};
}

RunResult run_nf_portrait(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    double rho_max = cfg.op.at("rho_max");
    if (rho_max == 0.0)
        rho_max = 3.0 * std::sqrt(std::abs(p.mu / (p.psi.empty() ? 1.0 : p.psi[0]))) + 1e-6;
    const int nr = int(cfg.op.at("grid_rho"));
    const int np = int(cfg.op.at("grid_phi"));

    CsvTable field({"rho", "phi", "rho_dot", "phi_dot"}, csv_comment(cfg));
    for (int i = 1; i <= nr; ++i) {
        const double rho = rho_max * double(i) / double(nr);
        for (int j = 0; j < np; ++j) {
            const double phi = two_pi() * double(j) / double(np);
            const PolarVelocity v = eval_field_polar(p, rho, phi);
            field.add_row({CsvTable::cell(rho), CsvTable::cell(phi), CsvTable::cell(v.rho_dot),
                           CsvTable::cell(v.phi_dot)});
        }
    }
    bundle.add_file("portrait.csv", field.str());

    // short flow trajectories for the stream plot, emitted as data first
    const int ntraj = int(cfg.op.at("trajectories"));
    const double t_max = cfg.op.at("t_max");
    CsvTable traj({"trajectory", "step", "x", "y"}, csv_comment(cfg));
    std::vector<std::vector<std::pair<double, double>>> paths;
    IntegratorOptions iopt;
    iopt.rtol = 1e-10;
    iopt.atol = 1e-12;
    iopt.guard_norm = 4.0 * rho_max;
    for (int s = 0; s < ntraj; ++s) {
        const double ang = two_pi() * double(s) / std::max(1, ntraj);
        const double rad = rho_max * (0.35 + 0.6 * double(s % 3) / 3.0);
        cplx z = std::polar(rad, ang);
        std::vector<std::pair<double, double>> path;
        const int steps = 160;
        for (int k = 0; k <= steps; ++k) {
            path.emplace_back(z.real(), z.imag());
            traj.add_row({std::to_string(s), std::to_string(k), CsvTable::cell(z.real()),
                          CsvTable::cell(z.imag())});
            try {
                z = integrate_flow(p, z, t_max / steps, iopt);
            } catch (const domain_error&) {
                break;
            }
        }
        paths.push_back(std::move(path));
    }
    bundle.add_file("trajectories.csv", traj.str());

    const auto eqs = find_equilibria(p, {rho_max});
    json ej;
    ej["seed"] = cfg.seed;
    ej["count"] = eqs.size();
    json elist = json::array();
    for (const Equilibrium& e : eqs) elist.push_back(equilibrium_json(e));
    ej["equilibria"] = elist;
    bundle.add_file("equilibria.json", json_str(ej));

    SvgCanvas svg(-1.1 * rho_max, 1.1 * rho_max, -1.1 * rho_max, 1.1 * rho_max, 600, 600);
    for (const auto& path : paths) svg.polyline(path, "#3366aa", 0.8);
    for (const Equilibrium& e : eqs) {
        const bool stable_center = e.type == EquilibriumType::center;
        svg.circle(e.location().real(), e.location().imag(), 3.0,
                   stable_center ? "#117733" : "#cc3311", e.type != EquilibriumType::saddle);
    }
    bundle.add_file("portrait.svg", "<!-- seed=" + std::to_string(cfg.seed) + " -->\n" + svg.str());
    return {{}, "portrait sampled on " + std::to_string(nr) + "x" + std::to_string(np) + " grid"};
}

RunResult run_nf_equilibria(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    FindEquilibriaOptions opt;
    opt.rho_max = cfg.op.at("rho_max");
    opt.scan_points = int(cfg.op.at("scan_points"));
    opt.angle_tol = cfg.op.at("angle_tol");
    opt.collar = cfg.op.at("collar");
    const auto eqs = find_equilibria(p, opt);
    json j;
    j["seed"] = cfg.seed;
    j["count"] = eqs.size();
    json list = json::array();
    for (const Equilibrium& e : eqs) list.push_back(equilibrium_json(e));
    j["equilibria"] = list;
    bundle.add_file("equilibria.json", json_str(j));
    return {{}, std::to_string(eqs.size()) + " equilibria"};
}

RunResult run_pendulum_check(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    const double lo = cfg.op.at("mu_abs_lo");
    const double hi = cfg.op.at("mu_abs_hi");
    const int n = int(cfg.op.at("points"));
    if (!(lo < hi)) throw validation_error("pendulum-check: require mu_abs_lo < mu_abs_hi");
    const double psi1 = p.psi.empty() ? 1.0 : p.psi[0];
    const double side = (psi1 > 0.0) ? -1.0 : 1.0;  // mu*Psi1 < 0

    DeviationBox box;
    box.u_lo = cfg.op.at("u_lo");
    box.u_hi = cfg.op.at("u_hi");
    box.n_phi = int(cfg.op.at("n_phi"));
    box.n_u = int(cfg.op.at("n_u"));

    CsvTable table({"mu", "deviation"}, csv_comment(cfg));
    std::vector<double> lmu, ldev;
    for (int i = 0; i < n; ++i) {
        const double mu_abs = lo * std::pow(hi / lo, double(i) / double(n - 1));
        const double dev = pendulum_deviation(p, side * mu_abs, box);
        table.add_row({CsvTable::cell(side * mu_abs), CsvTable::cell(dev)});
        lmu.push_back(std::log(mu_abs));
        ldev.push_back(std::log(dev));
    }
    const double slope = fit_line(lmu, ldev).slope;
    bundle.add_file("pendulum.csv", table.str());
    json j;
    j["seed"] = cfg.seed;
    j["slope"] = slope;
    j["points"] = n;
    j["pass"] = slope >= 0.15 && slope <= 0.35;
    bundle.add_file("pendulum.json", json_str(j));
    return {{}, "deviation slope " + fmt_double(slope)};
}

RunResult run_mu_sweep(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    MuSweepOptions opt;
    opt.mu_lo = cfg.op.at("mu_lo");
    opt.mu_hi = cfg.op.at("mu_hi");
    opt.resolution = int(cfg.op.at("resolution"));
    opt.threads = cfg.threads;
    const MuSweepResult res = mu_sweep(p, opt);

    CsvTable table({"mu", "total", "saddles", "centers", "sinks", "sources", "degenerate",
                    "asymmetric", "solver_failed"},
                   csv_comment(cfg));
    for (const EquilibriumCount& c : res.table)
        table.add_row({CsvTable::cell(c.mu), std::to_string(c.total), std::to_string(c.saddles),
                       std::to_string(c.centers), std::to_string(c.sinks),
                       std::to_string(c.sources), std::to_string(c.degenerate),
                       std::to_string(c.asymmetric), c.solver_failed ? "1" : "0"});
    bundle.add_file("sweep.csv", table.str());

    json ev = json::array();
    for (const BifurcationEvent& e : res.events)
        ev.push_back({{"kind", e.kind},
                      {"param_lo", e.param_lo},
                      {"param_hi", e.param_hi},
                      {"count_before", e.before.total},
                      {"count_after", e.after.total}});
    json j;
    j["seed"] = cfg.seed;
    j["events"] = ev;
    bundle.add_file("events.json", json_str(j));
    return {{}, std::to_string(res.events.size()) + " event(s)"};
}

RunResult run_pitchfork_scan(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    PitchforkScanOptions opt;
    opt.A_values = cfg.op_list.at("A_values");
    opt.mu_lo = cfg.op.at("mu_lo");
    opt.mu_hi = cfg.op.at("mu_hi");
    opt.mu_resolution = int(cfg.op.at("mu_resolution"));
    opt.threads = cfg.threads;
    const PitchforkScanResult res = pitchfork_scan(p, opt);

    CsvTable grid({"A", "mu", "symmetric_count", "asymmetric_count"}, csv_comment(cfg));
    for (const PitchforkGridCell& c : res.grid)
        grid.add_row({CsvTable::cell(c.A), CsvTable::cell(c.mu),
                      std::to_string(c.symmetric_count), std::to_string(c.asymmetric_count)});
    bundle.add_file("grid.csv", grid.str());

    CsvTable regions({"A", "mu_center_predicted", "region_found", "mu_lo_boundary",
                      "mu_hi_boundary", "interval_width", "bracket_width",
                      "contains_predicted", "sink_source"},
                     csv_comment(cfg));
    for (const PitchforkRow& r : res.rows)
        regions.add_row({CsvTable::cell(r.A), CsvTable::cell(r.mu_center_predicted),
                         r.region_found ? "1" : "0", CsvTable::cell(r.mu_lo_boundary),
                         CsvTable::cell(r.mu_hi_boundary), CsvTable::cell(r.interval_width),
                         CsvTable::cell(r.bracket_width), r.contains_predicted ? "1" : "0",
                         r.sink_source ? "1" : "0"});
    bundle.add_file("regions.csv", regions.str());

    json ev = json::array();
    for (const BifurcationEvent& e : res.events)
        ev.push_back({{"kind", e.kind}, {"param_lo", e.param_lo}, {"param_hi", e.param_hi}});
    json j;
    j["seed"] = cfg.seed;
    j["events"] = ev;
    bundle.add_file("events.json", json_str(j));

    // region map: asymmetric-pair existence interval (center +- width) per A
    if (!res.rows.empty()) {
        double amin = 1e300, amax = -1e300, cmin = 1e300, cmax = -1e300;
        for (const PitchforkRow& r : res.rows) {
            amin = std::min(amin, r.A);
            amax = std::max(amax, r.A);
            if (r.region_found) {
                cmin = std::min(cmin, r.mu_lo_boundary);
                cmax = std::max(cmax, r.mu_hi_boundary);
            }
        }
        if (cmin < cmax) {
            SvgCanvas svg(amin * 0.9, amax * 1.1, cmin - 0.1 * (cmax - cmin),
                          cmax + 0.1 * (cmax - cmin), 640, 480);
            std::vector<std::pair<double, double>> centers;
            for (const PitchforkRow& r : res.rows) {
                if (!r.region_found) continue;
                centers.emplace_back(r.A, 0.5 * (r.mu_lo_boundary + r.mu_hi_boundary));
                svg.line(r.A, r.mu_lo_boundary, r.A, r.mu_hi_boundary, "#cc3311", 2.0);
                svg.circle(r.A, r.mu_center_predicted, 2.0, "#117733");
            }
            svg.polyline(centers, "#3366aa", 1.0);
            svg.text(amin, cmax, "asymmetric-pair interval in mu vs A");
            bundle.add_file("region_map.svg",
                            "<!-- seed=" + std::to_string(cfg.seed) + " -->\n" + svg.str());
        }
    }
    int found = 0;
    for (const PitchforkRow& r : res.rows) found += r.region_found ? 1 : 0;
    return {{}, std::to_string(found) + "/" + std::to_string(res.rows.size()) +
                    " rows with asymmetric intervals"};
}

RunResult run_certify(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    const CertifyResult res = certify_sink_source(p);
    json j;
    j["seed"] = cfg.seed;
    j["certified"] = res.certified;
    j["reason"] = res.reason;
    if (res.certificate) {
        j["sink"] = equilibrium_json(res.certificate->sink);
        j["source"] = equilibrium_json(res.certificate->source);
        j["delta"] = res.certificate->delta;
        j["symmetry_residual"] = res.certificate->symmetry_residual;
    }
    bundle.add_file("certificate.json", json_str(j));
    return {{}, res.certified ? "certified sink/source pair" : ("no certificate: " + res.reason)};
}

RunResult run_map_confirm(const RunConfig& cfg, ReportBundle& bundle) {
    const ResonantParams p = params_from_config(cfg);
    ConfirmOptions opt;
    opt.integrator_tol = cfg.op.at("integrator_tol");
    opt.newton_tol = cfg.op.at("newton_tol");
    const std::string which = cfg.op_str.at("which");
    json list = json::array();
    bool all_match = true;
    for (const Equilibrium& e : find_equilibria(p)) {
        if (which == "symmetric" && !e.symmetric) continue;
        if (which == "asymmetric" && e.symmetric) continue;
        const MapConfirmReport rep = map_level_confirm(p, e, opt);
        json r;
        r["flow_class"] = to_string(rep.flow_class);
        r["map_class"] = to_string(rep.map_class);
        r["matches"] = rep.matches;
        r["period"] = rep.period;
        r["multipliers"] = {{rep.mult1.real(), rep.mult1.imag()},
                            {rep.mult2.real(), rep.mult2.imag()}};
        r["multipliers_analytic"] = {{rep.analytic1.real(), rep.analytic1.imag()},
                                     {rep.analytic2.real(), rep.analytic2.imag()}};
        r["route_disagreement"] = rep.route_disagreement;
        r["delta"] = rep.delta;
        r["pairing_residual"] = rep.pairing_residual;
        r["newton_residual"] = rep.newton_residual;
        r["equilibrium"] = equilibrium_json(e);
        json pts = json::array();
        for (const Vec2& q : rep.points) pts.push_back({q.x, q.y});
        r["orbit"] = pts;
        list.push_back(r);
        all_match = all_match && rep.matches;
    }
    json j;
    j["seed"] = cfg.seed;
    j["confirmations"] = list;
    j["all_match"] = all_match;
    bundle.add_file("confirm.json", json_str(j));
    return {{}, std::to_string(list.size()) + " orbit(s) confirmed, all_match=" +
                    (all_match ? "true" : "false")};
}

RunResult run_rotation(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    const AnnulusChart chart = chart_from_config(cfg, sys);
    const RotationNumberEstimate est = chart.rotation_number(
        cfg.op.at("theta0"), cfg.op.at("rho0"), long(cfg.op.at("iterates")));
    json j;
    j["seed"] = cfg.seed;
    j["psi0"] = est.psi0;
    j["error_bound"] = est.error_bound;
    j["iterates"] = est.iterates;
    j["method"] = est.method;
    j["chart_psi0"] = chart.psi0();
    bundle.add_file("rotation.json", json_str(j));
    return {{}, "psi0 = " + fmt_double(est.psi0)};
}

RunResult run_diophantine(const RunConfig& cfg, ReportBundle& bundle) {
    const DiophantineCertificate cert = diophantine_check(
        cfg.op.at("psi0"), cfg.op.at("alpha"), long(cfg.op.at("k_max")));
    json j;
    j["seed"] = cfg.seed;
    j["psi0"] = cert.psi0;
    j["alpha"] = cert.alpha;
    j["k_max"] = cert.k_max;
    j["certified"] = cert.certified;
    j["K"] = cert.K;
    j["argmin_k"] = cert.argmin_k;
    j["violating_k"] = cert.violating_k;
    j["reverified"] = cert.certified ? verify_certificate(cert) : false;
    bundle.add_file("certificate.json", json_str(j));
    return {{}, cert.certified ? ("K = " + fmt_double(cert.K))
                               : ("refused at k = " + std::to_string(cert.violating_k))};
}

RunResult run_twist(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    const AnnulusChart chart = chart_from_config(cfg, sys);
    TwistOptions opt;
    opt.rho_window = cfg.op.at("rho_window");
    opt.offsets_per_side = int(cfg.op.at("offsets"));
    opt.iterates = long(cfg.op.at("iterates"));
    const TwistReport rep = twist_check(chart, opt);
    json j;
    j["seed"] = cfg.seed;
    j["slope"] = rep.slope;
    j["uncertainty"] = rep.uncertainty;
    j["verdict"] = rep.verdict == TwistVerdict::pass
                       ? "pass"
                       : (rep.verdict == TwistVerdict::fail ? "fail" : "inconclusive");
    json samples = json::array();
    for (const TwistSample& s : rep.samples)
        samples.push_back({{"rho", s.rho}, {"rotation", s.rotation}, {"error", s.error}});
    j["samples"] = samples;
    bundle.add_file("twist.json", json_str(j));
    return {{}, "slope " + fmt_double(rep.slope) + " (" + std::string(j["verdict"]) + ")"};
}

RunResult run_fmn_roots(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    const AnnulusChart chart = chart_from_config(cfg, sys);
    const auto& ms = cfg.op_list.at("m");
    const auto& ns = cfg.op_list.at("n");
    if (ms.size() != ns.size())
        throw validation_error("fmn-roots: m and n lists must have equal length");
    const AnnulusBounds bounds = measure_annulus(chart, cfg.op.at("rho_in"),
                                                 cfg.op.at("rho_out"),
                                                 long(cfg.op.at("bound_iterates")));
    FmnOptions opt;
    opt.theta_seeds = int(cfg.op.at("theta_seeds"));
    opt.newton_tol = cfg.op.at("newton_tol");
    opt.gate_policy =
        cfg.op_str.at("gate_policy") == "reject" ? GatePolicy::reject : GatePolicy::warn;

    CsvTable roots({"n", "m", "theta", "rho", "x", "y", "closure", "trace", "modulus1",
                    "modulus2"},
                   csv_comment(cfg));
    // one representative per orbit, in the shared orbit-table schema
    CsvTable orbit_table({"orbit_id", "period", "symmetry", "class", "psi_or_moduli",
                          "jacobian_det", "points_ref"},
                         csv_comment(cfg));
    CsvTable orbit_points({"orbit_id", "index", "x", "y"}, csv_comment(cfg));
    int orbit_id = 0;
    json summary = json::array();
    std::vector<double> ln_n, ln_dist, ln_trace;
    for (std::size_t i = 0; i < ns.size(); ++i) {
        FmnSpec spec{long(ms[i]), long(ns[i])};
        const FmnReport rep = find_fmn_fixed_points(chart, spec, bounds, opt);
        for (const FmnRoot& r : rep.roots)
            roots.add_row({std::to_string(spec.n), std::to_string(spec.m), CsvTable::cell(r.theta),
                           CsvTable::cell(r.rho), CsvTable::cell(r.plane_point.x),
                           CsvTable::cell(r.plane_point.y), CsvTable::cell(r.closure),
                           CsvTable::cell(r.trace), CsvTable::cell(std::abs(r.mult1)),
                           CsvTable::cell(std::abs(r.mult2))});

        // Group roots into orbits. Near trace = 2 the fixed-point equation has
        // a soft mode along the chain, so root positions scatter too much for
        // point matching; the stability class separates the elliptic chain
        // from the hyperbolic one (one of each per m/n), so group by class
        // and keep the best-converged representative.
        std::vector<bool> used(rep.roots.size(), false);
        for (std::size_t a = 0; a < rep.roots.size(); ++a) {
            if (used[a]) continue;
            const OrbitClass cls_a =
                classify_multipliers(rep.roots[a].mult1, rep.roots[a].mult2).kind;
            std::size_t best = a;
            for (std::size_t b = a; b < rep.roots.size(); ++b) {
                if (used[b]) continue;
                if (classify_multipliers(rep.roots[b].mult1, rep.roots[b].mult2).kind != cls_a)
                    continue;
                used[b] = true;
                if (rep.roots[b].closure < rep.roots[best].closure) best = b;
            }
            std::vector<Vec2> pts;
            Vec2 x = rep.roots[best].plane_point;
            for (long s = 0; s < spec.n; ++s) {
                pts.push_back(x);
                x = sys.f.forward(x);
            }
            SymmetryTag tag = SymmetryTag::none;
            for (const Vec2& q : pts) {
                if (std::abs(sys.g.signed_distance(q)) <= 1e-8) { tag = SymmetryTag::via_g; break; }
                if (std::abs(sys.h2.signed_distance(q)) <= 1e-8) { tag = SymmetryTag::via_h2; break; }
            }
            PeriodicOrbit orb;
            orb.period = int(spec.n);
            orb.points = pts;
            orb.monodromy = orbit_monodromy(sys, pts);
            auto [l1, l2] = eigenvalues(orb.monodromy);
            orb.mult1 = l1;
            orb.mult2 = l2;
            orb.jacobian_det = orb.monodromy.det();
            orb.cls = classify_multipliers(l1, l2);
            orb.symmetry = tag;
            orbit_table.add_row({std::to_string(orbit_id), std::to_string(orb.period),
                                 to_string(orb.symmetry), to_string(orb.cls.kind),
                                 classification_string(orb), CsvTable::cell(orb.jacobian_det),
                                 "fmn_orbit_points.csv#" + std::to_string(orbit_id)});
            for (std::size_t s = 0; s < pts.size(); ++s)
                orbit_points.add_row({std::to_string(orbit_id), std::to_string(s),
                                      CsvTable::cell(pts[s].x), CsvTable::cell(pts[s].y)});
            ++orbit_id;
        }

        json s;
        s["n"] = spec.n;
        s["m"] = spec.m;
        s["roots"] = rep.roots.size();
        s["max_radial_distance"] = rep.max_radial_distance;
        s["max_trace_deviation"] = rep.max_trace_deviation;
        s["any_negative_real_multipliers"] = rep.any_negative_real_multipliers;
        s["degenerate_identity"] = rep.degenerate_identity;
        s["gate"] = rep.gate_note;
        summary.push_back(s);
        if (!rep.roots.empty() && !rep.degenerate_identity) {
            ln_n.push_back(std::log(double(spec.n)));
            ln_dist.push_back(std::log(rep.max_radial_distance));
            ln_trace.push_back(std::log(std::max(rep.max_trace_deviation, 1e-300)));
        }
    }
    bundle.add_file("roots.csv", roots.str());
    bundle.add_file("fmn_orbits.csv", orbit_table.str());
    bundle.add_file("fmn_orbit_points.csv", orbit_points.str());

    json j;
    j["seed"] = cfg.seed;
    j["psi0"] = chart.psi0();
    j["twist"] = chart.twist_estimate();
    j["annulus"] = {{"rho_in", bounds.rho_in},
                    {"rho_out", bounds.rho_out},
                    {"rot_in", bounds.rot_in},
                    {"rot_out", bounds.rot_out}};
    j["per_n"] = summary;
    if (ln_n.size() >= 3) {
        j["distance_slope"] = fit_line(ln_n, ln_dist).slope;
        j["trace_slope"] = fit_line(ln_n, ln_trace).slope;
    }
    bundle.add_file("fmn.json", json_str(j));
    return {{}, std::to_string(ns.size()) + " F_{m/n} spec(s) processed"};
}

RunResult run_averaged_fit(const RunConfig& cfg, ReportBundle& bundle) {
    const ReversibleSystem sys = make_builtin(cfg.system);
    const AnnulusChart chart = chart_from_config(cfg, sys);
    AveragedFitOptions opt;
    opt.rho_max = cfg.op.at("rho_max");
    opt.n_rho = int(cfg.op.at("n_rho"));
    opt.n_theta = int(cfg.op.at("n_theta"));
    opt.poly_degree = int(cfg.op.at("degree"));
    const AveragedFitReport rep = averaged_form_fit(chart, opt);

    CsvTable table({"rho", "radial_residual", "angular_residual"}, csv_comment(cfg));
    for (std::size_t i = 0; i < rep.rhos.size(); ++i)
        table.add_row({CsvTable::cell(rep.rhos[i]), CsvTable::cell(rep.radial_residuals[i]),
                       CsvTable::cell(rep.angular_residuals[i])});
    bundle.add_file("residuals.csv", table.str());

    json j;
    j["seed"] = cfg.seed;
    j["radial_slope"] = rep.radial_slope;
    j["angular_slope"] = rep.angular_slope;
    j["below_floor"] = rep.below_floor;
    j["pass"] = rep.pass;
    j["psi_polynomial"] = rep.psi_coefficients;
    j["chart"] = {{"psi0", chart.psi0()},
                  {"fit_residual", chart.fit_residual()},
                  {"twist", chart.twist_estimate()},
                  {"residual_order1", chart.residual_order1()},
                  {"residual_order2", chart.residual_order2()}};
    bundle.add_file("fit.json", json_str(j));
    return {{}, std::string(rep.pass ? "PASS" : "FAIL") + " radial slope " +
                    fmt_double(rep.radial_slope) + ", angular slope " +
                    fmt_double(rep.angular_slope)};
}

}  // namespace

RunResult run(const RunConfig& cfg) {
    ReportBundle bundle(cfg.out_dir);
    for (const std::string& n : cfg.notes) bundle.add_note(n);

    RunResult res;
    if (cfg.command == "check-rev") res = run_check_rev(cfg, bundle);
    else if (cfg.command == "find-sym-orbits") res = run_find_sym_orbits(cfg, bundle);
    else if (cfg.command == "nf-portrait") res = run_nf_portrait(cfg, bundle);
    else if (cfg.command == "nf-equilibria") res = run_nf_equilibria(cfg, bundle);
    else if (cfg.command == "pendulum-check") res = run_pendulum_check(cfg, bundle);
    else if (cfg.command == "mu-sweep") res = run_mu_sweep(cfg, bundle);
    else if (cfg.command == "pitchfork-scan") res = run_pitchfork_scan(cfg, bundle);
    else if (cfg.command == "certify-sink-source") res = run_certify(cfg, bundle);
    else if (cfg.command == "map-confirm") res = run_map_confirm(cfg, bundle);
    else if (cfg.command == "rotation") res = run_rotation(cfg, bundle);
    else if (cfg.command == "diophantine") res = run_diophantine(cfg, bundle);
    else if (cfg.command == "twist") res = run_twist(cfg, bundle);
    else if (cfg.command == "fmn-roots") res = run_fmn_roots(cfg, bundle);
    else if (cfg.command == "averaged-fit") res = run_averaged_fit(cfg, bundle);
    else throw validation_error("unknown command '" + cfg.command + "'");

    res.files_written = bundle.write(config_echo(cfg));
    return res;
}

}  // namespace revlab
