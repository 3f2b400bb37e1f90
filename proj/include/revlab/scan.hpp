// Parameter sweeps over the normal-form flow: birth of the saddle/center
// chain across mu = 0, pitchfork boundaries of the asymmetric pair,
// sink/source certification, and map-level confirmation via T.
#ifndef REVLAB_SCAN_HPP
#define REVLAB_SCAN_HPP

#include <optional>
#include <string>
#include <vector>

#include "revlab/equilibria.hpp"
#include "revlab/orbit.hpp"

namespace revlab {

struct EquilibriumCount {
    double mu = 0.0;
    int total = 0;
    int saddles = 0;
    int centers = 0;
    int sinks = 0;
    int sources = 0;
    int degenerate = 0;
    int asymmetric = 0;
    bool solver_failed = false;
};

struct BifurcationEvent {
    std::string kind;  // saddle-center-birth | pitchfork | sink-source-onset
    double param_lo = 0.0;  // bracketing interval in the scanned parameter
    double param_hi = 0.0;
    EquilibriumCount before;
    EquilibriumCount after;
};

EquilibriumCount count_equilibria(const ResonantParams& params,
                                  const FindEquilibriaOptions& opts = {});

// --- mu sweep (conservative form, B = C = 0) ---
struct MuSweepOptions {
    double mu_lo = -0.02;
    double mu_hi = 0.02;
    int resolution = 21;
    FindEquilibriaOptions eq;
    int threads = 1;
};

struct MuSweepResult {
    std::vector<EquilibriumCount> table;  // one row per grid point
    std::vector<BifurcationEvent> events;
};

MuSweepResult mu_sweep(const ResonantParams& params, const MuSweepOptions& opts);

// --- pitchfork scan over (mu, A) at fixed q, Psi, B, C ---
struct PitchforkScanOptions {
    std::vector<double> A_values;
    double mu_lo = 0.0;     // grid range for the per-point count table
    double mu_hi = 0.0;     // both zero = auto around the predicted centers
    int mu_resolution = 11;
    FindEquilibriaOptions eq;
    int threads = 1;
};

struct PitchforkRow {
    double A = 0.0;
    double mu_center_predicted = 0.0;  // A*Psi_1/(C-B), the leading order
    bool region_found = false;
    double mu_lo_boundary = 0.0;   // lower pitchfork location (bracket midpoint)
    double mu_hi_boundary = 0.0;   // upper pitchfork location
    double bracket_width = 0.0;    // residual bisection bracket width
    double interval_width = 0.0;   // mu_hi_boundary - mu_lo_boundary
    bool contains_predicted = false;
    bool sink_source = false;      // pair certified inside the interval
};

struct PitchforkGridCell {
    double A = 0.0;
    double mu = 0.0;
    int symmetric_count = 0;
    int asymmetric_count = 0;
};

struct PitchforkScanResult {
    std::vector<PitchforkGridCell> grid;
    std::vector<PitchforkRow> rows;
    std::vector<BifurcationEvent> events;
};

PitchforkScanResult pitchfork_scan(const ResonantParams& params, const PitchforkScanOptions& opts);

// --- sink/source certification of the asymmetric pair ---
struct SinkSourceCertificate {
    Equilibrium sink;
    Equilibrium source;
    double delta = 0.0;               // margin on eigenvalue real parts
    double symmetry_residual = 0.0;   // |Re(sink eig) + Re(source eig)|, max over the pair
};

struct CertifyResult {
    bool certified = false;
    std::string reason;
    std::optional<SinkSourceCertificate> certificate;
};

// delta floor is relative: 1e-10 scaled by the linearization magnitude.
CertifyResult certify_sink_source(const ResonantParams& params,
                                  const FindEquilibriaOptions& opts = {});

// --- map-level confirmation: flow equilibrium -> period-q orbit of T ---
struct ConfirmOptions {
    double integrator_tol = 1e-13;
    double newton_tol = 1e-11;
    int newton_max_iter = 30;
};

struct MapConfirmReport {
    std::vector<Vec2> points;   // the period-q orbit of T
    int period = 0;
    cplx mult1, mult2;          // measured multipliers (variational product)
    cplx analytic1, analytic2;  // exp(q * eigenvalues of the field linearization)
    double route_disagreement = 0.0;
    OrbitClass map_class = OrbitClass::borderline;
    EquilibriumType flow_class = EquilibriumType::degenerate;
    bool matches = false;
    double delta = 0.0;            // distance of the moduli from the unit circle
    double pairing_residual = 0.0; // |mult1 * mult2 - 1|
    double newton_residual = 0.0;
    int newton_iterations = 0;
};

MapConfirmReport map_level_confirm(const ResonantParams& params, const Equilibrium& eq,
                                   const ConfirmOptions& opts = {});

}  // namespace revlab

#endif
