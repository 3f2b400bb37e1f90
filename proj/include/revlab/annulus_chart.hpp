// Annulus charts (rho, theta) with theta of period 1, centered on an
// invariant-curve approximation.
//
// The cylinder-graph chart is fitted from a long orbit: the curve is
// parametrized by the conjugated angle (so the on-curve dynamics is the exact
// rotation by psi0), and near-identity coordinate corrections remove the
// theta-dependence of the chart map at orders rho and rho^2. The corrections
// solve small-divisor equations c(theta+psi0) - c(theta) = f(theta) - <f> in
// Fourier space, which is where the Diophantine property of psi0 enters.
#ifndef REVLAB_ANNULUS_CHART_HPP
#define REVLAB_ANNULUS_CHART_HPP

#include <string>
#include <vector>

#include "revlab/planar_map.hpp"
#include "revlab/rotation.hpp"

namespace revlab {

struct FourierSeries {
    double c0 = 0.0;
    std::vector<double> cosc, sinc;  // coefficients for k = 1..M

    double eval(double theta) const;
    double deriv(double theta) const;
    void accumulate(const FourierSeries& other);
    double variation_bound() const;  // sum of |coefficients|, k >= 1
};

class AnnulusChart {
public:
    enum class Kind { cylinder_graph, polar };

    struct BuildOptions {
        double target_rotation = 0.0;  // rotation number of the reference curve
        double seed_x = 0.0;           // x of the seeding symmetry line
        double seed_y_lo = 0.0;        // bisection window for the seed y
        double seed_y_hi = 0.0;
        long fit_iterates = 1 << 14;
        long rot_iterates = 1 << 15;
        int fourier_order = 28;
        int grid = 256;
        int normalize_order = 2;       // 0 = raw conjugacy chart
        double extract_step = 0.02;
        double center_offset = 0.0;    // radial displacement off the curve (negative control)
        double plane_period = two_pi();  // angular period of the plane x coordinate
    };

    // Fit a chart centered on the invariant curve with the given rotation number.
    static AnnulusChart build_on_curve(const ReversibleSystem& sys, const BuildOptions& opt);

    // Polar chart around the origin at reference radius r0 (plane maps).
    static AnnulusChart polar(const ReversibleSystem& sys, double r0);

    Vec2 from_chart(double theta, double rho) const;  // theta lifted
    void to_chart(const Vec2& plane, double& theta, double& rho) const;
    // One step of the system map in chart coordinates; theta stays lifted.
    void map_chart(double theta, double rho, double& theta_out, double& rho_out) const;

    // Rotation number of the orbit seeded at chart coordinates (theta0, rho0).
    RotationNumberEstimate rotation_number(double theta0, double rho0, long iterates) const;
    // Same, seeded at a plane point.
    RotationNumberEstimate rotation_number(const Vec2& x0, long iterates) const;

    Kind kind() const { return kind_; }
    const ReversibleSystem& system() const { return sys_; }
    double psi0() const { return psi0_; }
    double psi0_error() const { return psi0_err_; }
    double twist_estimate() const { return b1_mean_; }
    double seed_y() const { return seed_y_; }
    double fit_residual() const { return fit_residual_; }
    double residual_order1() const { return resid_o1_; }
    double residual_order2() const { return resid_o2_; }
    const std::string& notes() const { return notes_; }

private:
    Kind kind_ = Kind::polar;
    ReversibleSystem sys_;
    double psi0_ = 0.0;
    double psi0_err_ = 0.0;
    double b1_mean_ = 0.0;
    double seed_y_ = 0.0;
    double fit_residual_ = 0.0;
    double resid_o1_ = 0.0;
    double resid_o2_ = 0.0;
    double center_offset_ = 0.0;
    double plane_period_ = two_pi();
    double polar_r0_ = 0.0;
    FourierSeries curve_x_;  // periodic part of X(theta) = plane_period*theta + ...
    FourierSeries curve_y_;
    FourierSeries u1_, c1_, u2_, c2_;  // accumulated normalization corrections
    std::string notes_;

    Vec2 base_from(double theta, double rho) const;
    void base_to(const Vec2& plane, double& theta, double& rho) const;
    void base_map(double theta, double rho, double& theta_out, double& rho_out) const;
    void modifier_forward(double th, double rh, double& theta, double& rho) const;
    void modifier_inverse(double theta, double rho, double& th, double& rh) const;
    void normalize(const BuildOptions& opt);
};

}  // namespace revlab

#endif
