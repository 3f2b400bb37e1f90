// KAM-adjacent diagnostics on annulus charts: twist condition, fixed points
// of the shifted return map F_{m/n} with the trace-near-2 report, and the
// residual fit of the averaged form (radial return rho + O(rho^3), angular
// advance theta + Psi(rho) + O(rho^3)).
#ifndef REVLAB_KAM_OPS_HPP
#define REVLAB_KAM_OPS_HPP

#include <string>
#include <vector>

#include "revlab/annulus_chart.hpp"
#include "revlab/orbit.hpp"

namespace revlab {

// --- twist check ---
enum class TwistVerdict { pass, fail, inconclusive };

struct TwistSample {
    double rho = 0.0;
    double rotation = 0.0;
    double error = 0.0;
};

struct TwistReport {
    double slope = 0.0;        // d(rotation)/d(rho) at rho = 0
    double uncertainty = 0.0;  // propagated from the rotation-number bounds
    TwistVerdict verdict = TwistVerdict::inconclusive;
    std::vector<TwistSample> samples;
};

struct TwistOptions {
    double rho_window = 0.05;
    int offsets_per_side = 2;
    long iterates = 1 << 13;
};

TwistReport twist_check(const AnnulusChart& chart, const TwistOptions& opt = {});

// --- F_{m/n} fixed points ---
struct FmnSpec {
    long m = 0;
    long n = 1;
};

struct AnnulusBounds {
    double rho_in = 0.0;   // inner and outer chart radii of the annulus
    double rho_out = 0.0;
    double rot_in = 0.0;   // measured boundary rotation numbers
    double rot_out = 0.0;
};

// Measures the boundary rotation numbers of the annulus [rho_in, rho_out].
AnnulusBounds measure_annulus(const AnnulusChart& chart, double rho_in, double rho_out,
                              long iterates = 1 << 13);

enum class GatePolicy { warn, reject };

struct FmnRoot {
    Vec2 plane_point;
    double theta = 0.0;    // chart coordinates of the root
    double rho = 0.0;
    double closure = 0.0;  // |f^n(x) - x - (m periods, 0)| in the plane
    double trace = 0.0;
    cplx mult1, mult2;
};

struct FmnReport {
    FmnSpec spec;
    AnnulusBounds bounds;
    std::vector<FmnRoot> roots;
    double max_radial_distance = 0.0;
    double max_trace_deviation = 0.0;  // max |trace - 2|
    bool any_negative_real_multipliers = false;
    bool degenerate_identity = false;  // F_{m/n} = id (exact resonance), no certificates
    std::string gate_note;             // |n psi0 - m| <= 1 policy outcome
    int seeds_used = 0;
};

struct FmnOptions {
    int theta_seeds = 12;
    std::vector<double> rho_seed_factors = {0.85, 1.0, 1.15};
    double newton_tol = 1e-11;
    int newton_max_iter = 40;
    int n_cap = 64;
    GatePolicy gate_policy = GatePolicy::warn;
};

FmnReport find_fmn_fixed_points(const AnnulusChart& chart, const FmnSpec& spec,
                                const AnnulusBounds& bounds, const FmnOptions& opt = {});

// --- averaged-form residual fit ---
struct AveragedFitReport {
    std::vector<double> rhos;
    std::vector<double> radial_residuals;   // max_theta |rho_bar - rho|
    std::vector<double> angular_residuals;  // max_theta |advance - Psi(rho)|
    std::vector<double> psi_coefficients;   // fitted polynomial, highest degree first
    double radial_slope = 0.0;
    double angular_slope = 0.0;
    bool below_floor = false;  // residuals at the noise floor (exact rotation)
    bool pass = false;         // both slopes >= 2.5, or below floor
};

struct AveragedFitOptions {
    double rho_max = 0.12;
    int n_rho = 8;
    int n_theta = 96;
    int poly_degree = 4;
    double floor = 1e-12;
    double slope_threshold = 2.5;
};

AveragedFitReport averaged_form_fit(const AnnulusChart& chart, const AveragedFitOptions& opt = {});

}  // namespace revlab

#endif
