#include "revlab/diophantine.hpp"

#include <cmath>

#include "revlab/errors.hpp"
#include "revlab/geometry.hpp"

namespace revlab {

DiophantineCertificate diophantine_check(double psi0, double alpha, long k_max) {
    if (k_max < 1) throw validation_error("diophantine_check: k_max must be >= 1");
    if (!(alpha > 0.0)) throw validation_error("diophantine_check: alpha must be positive");
    if (!std::isfinite(psi0)) throw validation_error("diophantine_check: psi0 must be finite");

    DiophantineCertificate cert;
    cert.psi0 = psi0;
    cert.alpha = alpha;
    cert.k_max = k_max;

    double best = std::numeric_limits<double>::infinity();
    long best_k = 0;
    for (long k = 1; k <= k_max; ++k) {
        const double d = dist_to_int(double(k) * psi0);
        if (d == 0.0) {
            cert.certified = false;
            cert.violating_k = k;
            cert.K = 0.0;
            return cert;
        }
        const double v = std::pow(double(k), alpha) * d;
        if (v < best) {
            best = v;
            best_k = k;
        }
    }
    cert.K = best;
    cert.argmin_k = best_k;
    cert.certified = best > 0.0;
    return cert;
}

bool verify_certificate(const DiophantineCertificate& cert) {
    if (!cert.certified) return false;
    for (long k = 1; k <= cert.k_max; ++k) {
        const double d = dist_to_int(double(k) * cert.psi0);
        if (d < cert.K / std::pow(double(k), cert.alpha) * (1.0 - 1e-12)) return false;
    }
    return true;
}

}  // namespace revlab
