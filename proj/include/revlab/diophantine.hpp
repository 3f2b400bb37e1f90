// Diophantine certificates: K = min over 1 <= k <= k_max of |k|^alpha * dist(k*psi0, Z),
// verifying |k*psi0 + p| >= K / |k|^alpha for nearest integers p.
#ifndef REVLAB_DIOPHANTINE_HPP
#define REVLAB_DIOPHANTINE_HPP

#include <string>

namespace revlab {

struct DiophantineCertificate {
    double psi0 = 0.0;
    double alpha = 0.0;
    double K = 0.0;
    long k_max = 0;
    long argmin_k = 0;  // the k attaining the minimum
    bool certified = false;
    long violating_k = 0;  // when a distance is exactly zero (rational psi0)
};

DiophantineCertificate diophantine_check(double psi0, double alpha, long k_max);

// Second independent pass: re-verifies the certificate inequality for all k.
bool verify_certificate(const DiophantineCertificate& cert);

}  // namespace revlab

#endif
