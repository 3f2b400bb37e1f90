// Rotation-number estimation by weighted Birkhoff averaging of angular
// increments on a lift; the exponential bump weight gives superpolynomial
// convergence on Diophantine orbits, and the error bound is empirical
// (step doubling).
#ifndef REVLAB_ROTATION_HPP
#define REVLAB_ROTATION_HPP

#include <string>
#include <vector>

namespace revlab {

struct RotationNumberEstimate {
    double psi0 = 0.0;        // in units of the angular period (theta-period 1)
    double error_bound = 0.0; // |estimate(N) - estimate(N/2)| + floor
    long iterates = 0;
    std::string method = "weighted-birkhoff";
};

// lifted: theta_0, ..., theta_N (period-1 units, already unwrapped).
RotationNumberEstimate rotation_number_from_lift(const std::vector<double>& lifted);

// Weighted Birkhoff average of a sequence of values (weight exp(-1/(t(1-t)))).
double weighted_birkhoff_mean(const std::vector<double>& values);

}  // namespace revlab

#endif
