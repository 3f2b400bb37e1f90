// Small fixed-size linear algebra for planar maps: 2-vectors, 2x2 matrices,
// eigenvalues of real 2x2 matrices, angle helpers.
#ifndef REVLAB_GEOMETRY_HPP
#define REVLAB_GEOMETRY_HPP

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>

namespace revlab {

using cplx = std::complex<double>;

inline constexpr double pi() { return 3.14159265358979323846; }
inline constexpr double two_pi() { return 2.0 * pi(); }

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2() = default;
    Vec2(double x_, double y_) : x(x_), y(y_) {}

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    Vec2 operator/(double s) const { return {x / s, y / s}; }
    Vec2 operator-() const { return {-x, -y}; }

    double norm() const { return std::hypot(x, y); }
    double norm_inf() const { return std::max(std::abs(x), std::abs(y)); }
    bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline Vec2 operator*(double s, const Vec2& v) { return v * s; }
inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }

inline cplx to_cplx(const Vec2& v) { return {v.x, v.y}; }
inline Vec2 to_vec(const cplx& z) { return {z.real(), z.imag()}; }

// Row-major 2x2 real matrix.
struct Mat2 {
    double a11 = 0.0, a12 = 0.0, a21 = 0.0, a22 = 0.0;

    Mat2() = default;
    Mat2(double m11, double m12, double m21, double m22)
        : a11(m11), a12(m12), a21(m21), a22(m22) {}

    static Mat2 identity() { return {1.0, 0.0, 0.0, 1.0}; }
    static Mat2 rotation(double angle) {
        const double c = std::cos(angle), s = std::sin(angle);
        return {c, -s, s, c};
    }

    Vec2 operator*(const Vec2& v) const {
        return {a11 * v.x + a12 * v.y, a21 * v.x + a22 * v.y};
    }
    Mat2 operator*(const Mat2& o) const {
        return {a11 * o.a11 + a12 * o.a21, a11 * o.a12 + a12 * o.a22,
                a21 * o.a11 + a22 * o.a21, a21 * o.a12 + a22 * o.a22};
    }
    Mat2 operator+(const Mat2& o) const {
        return {a11 + o.a11, a12 + o.a12, a21 + o.a21, a22 + o.a22};
    }
    Mat2 operator-(const Mat2& o) const {
        return {a11 - o.a11, a12 - o.a12, a21 - o.a21, a22 - o.a22};
    }
    Mat2 operator*(double s) const { return {a11 * s, a12 * s, a21 * s, a22 * s}; }

    double det() const { return a11 * a22 - a12 * a21; }
    double trace() const { return a11 + a22; }
    double norm_inf() const {
        return std::max(std::abs(a11) + std::abs(a12), std::abs(a21) + std::abs(a22));
    }
    bool finite() const {
        return std::isfinite(a11) && std::isfinite(a12) && std::isfinite(a21) &&
               std::isfinite(a22);
    }

    Mat2 inverse() const {
        const double d = det();
        if (d == 0.0) throw std::runtime_error("Mat2::inverse: singular matrix");
        return {a22 / d, -a12 / d, -a21 / d, a11 / d};
    }

    // Solve A x = b.
    Vec2 solve(const Vec2& b) const {
        const double d = det();
        if (d == 0.0) throw std::runtime_error("Mat2::solve: singular matrix");
        return {(a22 * b.x - a12 * b.y) / d, (a11 * b.y - a21 * b.x) / d};
    }
};

// Eigenvalues of a real 2x2 matrix; complex pair is conjugate by construction.
inline std::pair<cplx, cplx> eigenvalues(const Mat2& m) {
    const double tr = m.trace();
    const double dt = m.det();
    const double disc = tr * tr / 4.0 - dt;
    if (disc >= 0.0) {
        const double s = std::sqrt(disc);
        return {cplx(tr / 2.0 - s, 0.0), cplx(tr / 2.0 + s, 0.0)};
    }
    const double s = std::sqrt(-disc);
    return {cplx(tr / 2.0, s), cplx(tr / 2.0, -s)};
}

// Matrix exponential of a 2x2 real matrix (via trace/deviator closed form).
inline Mat2 mat_exp(const Mat2& m) {
    const double mu = m.trace() / 2.0;
    Mat2 dev = m - Mat2::identity() * mu;   // traceless part
    const double q2 = dev.a11 * dev.a11 + dev.a12 * dev.a21;  // dev^2 = q2 * I
    double c, s;  // exp(dev) = c I + s dev
    if (q2 > 0.0) {
        const double q = std::sqrt(q2);
        c = std::cosh(q);
        s = std::sinh(q) / q;
    } else if (q2 < 0.0) {
        const double q = std::sqrt(-q2);
        c = std::cos(q);
        s = std::sin(q) / q;
    } else {
        c = 1.0;
        s = 1.0;
    }
    Mat2 e = Mat2::identity() * c + dev * s;
    return e * std::exp(mu);
}

// Wrap angle to (-pi, pi].
inline double wrap_pi(double a) {
    a = std::fmod(a, two_pi());
    if (a <= -pi()) a += two_pi();
    if (a > pi()) a -= two_pi();
    return a;
}

// Wrap to [0, period).
inline double wrap_period(double a, double period) {
    double r = std::fmod(a, period);
    if (r < 0.0) r += period;
    return r;
}

// Distance from x to the nearest integer.
inline double dist_to_int(double x) {
    return std::abs(x - std::round(x));
}

}  // namespace revlab

#endif
