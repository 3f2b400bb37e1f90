#include "revlab/rotation.hpp"

#include <cmath>

#include "revlab/errors.hpp"

namespace revlab {

namespace {
double bump(double t) {
    if (t <= 0.0 || t >= 1.0) return 0.0;
    return std::exp(-1.0 / (t * (1.0 - t)));
}

double weighted_increment_mean(const std::vector<double>& lifted, std::size_t n) {
    double sw = 0.0, sv = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = bump((double(i) + 0.5) / double(n));
        sw += w;
        sv += w * (lifted[i + 1] - lifted[i]);
    }
    return sv / sw;
}
}  // namespace

double weighted_birkhoff_mean(const std::vector<double>& values) {
    if (values.empty()) throw validation_error("weighted_birkhoff_mean: empty sequence");
    double sw = 0.0, sv = 0.0;
    const std::size_t n = values.size();
    for (std::size_t i = 0; i < n; ++i) {
        const double w = bump((double(i) + 0.5) / double(n));
        sw += w;
        sv += w * values[i];
    }
    return sv / sw;
}

RotationNumberEstimate rotation_number_from_lift(const std::vector<double>& lifted) {
    if (lifted.size() < 8)
        throw validation_error("rotation_number_from_lift: need at least 8 samples");
    const std::size_t n = lifted.size() - 1;
    RotationNumberEstimate est;
    est.iterates = long(n);
    est.psi0 = weighted_increment_mean(lifted, n);
    const double half = weighted_increment_mean(lifted, n / 2);
    est.error_bound = std::abs(est.psi0 - half) + 1e-15;
    return est;
}

}  // namespace revlab
