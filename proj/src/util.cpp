#include "revlab/util.hpp"

#include <cmath>
#include <stdexcept>

namespace revlab {

std::vector<double> fit_poly(const std::vector<double>& x, const std::vector<double>& y,
                             const std::vector<double>& w, int degree) {
    if (degree < 0 || degree > 8) throw std::invalid_argument("fit_poly: degree out of range");
    const int m = degree + 1;
    const std::size_t n = x.size();
    if (y.size() != n || w.size() != n || int(n) < m)
        throw std::invalid_argument("fit_poly: inconsistent or insufficient data");

    // scale the abscissas to [-1, 1] before forming the normal equations; raw
    // monomials over a decade of x make them badly conditioned
    double xscale = 0.0;
    for (double v : x) xscale = std::max(xscale, std::abs(v));
    if (xscale == 0.0) xscale = 1.0;

    std::vector<double> ata(m * m, 0.0), atb(m, 0.0);
    for (std::size_t s = 0; s < n; ++s) {
        std::vector<double> pw(m);
        pw[0] = 1.0;
        for (int i = 1; i < m; ++i) pw[i] = pw[i - 1] * (x[s] / xscale);
        for (int i = 0; i < m; ++i) {
            atb[i] += w[s] * pw[i] * y[s];
            for (int j = 0; j < m; ++j) ata[i * m + j] += w[s] * pw[i] * pw[j];
        }
    }
    // Gaussian elimination with partial pivoting
    std::vector<int> perm(m);
    for (int i = 0; i < m; ++i) perm[i] = i;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int r = col + 1; r < m; ++r)
            if (std::abs(ata[r * m + col]) > std::abs(ata[piv * m + col])) piv = r;
        if (piv != col) {
            for (int j = 0; j < m; ++j) std::swap(ata[col * m + j], ata[piv * m + j]);
            std::swap(atb[col], atb[piv]);
        }
        const double d = ata[col * m + col];
        if (d == 0.0) throw std::runtime_error("fit_poly: singular normal equations");
        for (int r = col + 1; r < m; ++r) {
            const double f = ata[r * m + col] / d;
            for (int j = col; j < m; ++j) ata[r * m + j] -= f * ata[col * m + j];
            atb[r] -= f * atb[col];
        }
    }
    std::vector<double> c(m);
    for (int i = m - 1; i >= 0; --i) {
        double s = atb[i];
        for (int j = i + 1; j < m; ++j) s -= ata[i * m + j] * c[j];
        c[i] = s / ata[i * m + i];
    }
    // undo the scaling; highest degree first, matching eval_poly
    double p = 1.0;
    for (int i = 0; i < m; ++i) {
        c[i] /= p;
        p *= xscale;
    }
    std::vector<double> out(m);
    for (int i = 0; i < m; ++i) out[i] = c[m - 1 - i];
    return out;
}

double eval_poly(const std::vector<double>& coeffs, double x) {
    double v = 0.0;
    for (double c : coeffs) v = v * x + c;
    return v;
}

}  // namespace revlab
