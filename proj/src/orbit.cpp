#include "revlab/orbit.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab {

const char* to_string(OrbitClass c) {
    switch (c) {
        case OrbitClass::elliptic: return "elliptic";
        case OrbitClass::saddle: return "saddle";
        case OrbitClass::sink: return "sink";
        case OrbitClass::source: return "source";
        case OrbitClass::parabolic: return "parabolic";
        case OrbitClass::borderline: return "borderline";
    }
    return "?";
}

const char* to_string(SymmetryTag t) {
    switch (t) {
        case SymmetryTag::via_g: return "symmetric:g";
        case SymmetryTag::via_h2: return "symmetric:f*g";
        case SymmetryTag::none: return "non-symmetric";
    }
    return "?";
}

IterationResult iterate(const ReversibleSystem& sys, const Vec2& x0, long n) {
    if (n < 0) throw validation_error("iterate: n must be >= 0");
    if (!x0.finite()) throw validation_error("iterate: non-finite start point");
    IterationResult r;
    r.points.reserve(std::size_t(n) + 1);
    r.points.push_back(x0);
    Vec2 x = x0;
    for (long i = 0; i < n; ++i) {
        Vec2 next;
        try {
            next = sys.f.forward(x);
        } catch (const domain_error&) {
            r.escaped = true;
            r.escape_index = int(i);
            return r;
        }
        if (!next.finite() || !sys.domain.contains(sys.canonical(next))) {
            r.escaped = true;
            r.escape_index = int(i);
            return r;
        }
        r.points.push_back(next);
        x = next;
    }
    return r;
}

double system_distance(const ReversibleSystem& sys, const Vec2& a, const Vec2& b) {
    if (!sys.wrap) return (a - b).norm();
    const Vec2 ca = sys.wrap(a), cb = sys.wrap(b);
    // wrap() reduces x to [0, 2*pi); compare across the seam as well
    double dx = std::abs(ca.x - cb.x);
    dx = std::min(dx, two_pi() - dx);
    return std::hypot(dx, ca.y - cb.y);
}

Classification classify_multipliers(const cplx& l1, const cplx& l2, double tol) {
    Classification c;
    c.modulus1 = std::abs(l1);
    c.modulus2 = std::abs(l2);
    const double scale = std::max({c.modulus1, c.modulus2, 1e-300});
    const bool complex_pair = std::abs(l1.imag()) > tol * scale;
    if (complex_pair) {
        if (std::abs(c.modulus1 - 1.0) <= tol && std::abs(c.modulus2 - 1.0) <= tol) {
            c.kind = OrbitClass::elliptic;
            c.angle = std::abs(std::arg(l1));
            return c;
        }
        if (c.modulus1 < 1.0 - tol && c.modulus2 < 1.0 - tol) { c.kind = OrbitClass::sink; return c; }
        if (c.modulus1 > 1.0 + tol && c.modulus2 > 1.0 + tol) { c.kind = OrbitClass::source; return c; }
        c.kind = OrbitClass::borderline;
        return c;
    }
    const double r1 = l1.real(), r2 = l2.real();
    if (std::abs(r1 - 1.0) <= tol && std::abs(r2 - 1.0) <= tol) { c.kind = OrbitClass::parabolic; return c; }
    if (std::abs(r1 + 1.0) <= tol && std::abs(r2 + 1.0) <= tol) { c.kind = OrbitClass::parabolic; return c; }
    const double m1 = std::abs(r1), m2 = std::abs(r2);
    if (m1 < 1.0 - tol && m2 < 1.0 - tol) { c.kind = OrbitClass::sink; return c; }
    if (m1 > 1.0 + tol && m2 > 1.0 + tol) { c.kind = OrbitClass::source; return c; }
    if ((m1 > 1.0 + tol && m2 < 1.0 - tol) || (m2 > 1.0 + tol && m1 < 1.0 - tol)) {
        c.kind = OrbitClass::saddle;
        return c;
    }
    c.kind = OrbitClass::borderline;
    return c;
}

Mat2 orbit_monodromy(const ReversibleSystem& sys, const std::vector<Vec2>& points) {
    Mat2 m = Mat2::identity();
    for (const Vec2& p : points) m = map_jacobian(sys.f, p) * m;
    return m;
}

std::optional<PeriodicOrbit> build_periodic_orbit(const ReversibleSystem& sys, const Vec2& x0,
                                                  int period, SymmetryTag tag,
                                                  double closure_tol, double classify_tol) {
    if (period < 1) return std::nullopt;
    IterationResult it = iterate(sys, x0, period);
    if (it.escaped) return std::nullopt;
    const double closure = system_distance(sys, it.points.back(), x0);
    if (!(closure <= closure_tol)) return std::nullopt;

    // smallest verified period divides the claimed one
    int minimal = period;
    for (int d = 1; d < period; ++d) {
        if (period % d != 0) continue;
        if (system_distance(sys, it.points[d], x0) <= closure_tol) {
            minimal = d;
            break;
        }
    }

    PeriodicOrbit orb;
    orb.period = minimal;
    orb.points.assign(it.points.begin(), it.points.begin() + minimal);
    orb.closure_residual = system_distance(sys, iterate(sys, x0, minimal).points.back(), x0);
    orb.monodromy = orbit_monodromy(sys, orb.points);
    auto [l1, l2] = eigenvalues(orb.monodromy);
    orb.mult1 = l1;
    orb.mult2 = l2;
    orb.jacobian_det = orb.monodromy.det();
    orb.cls = classify_multipliers(l1, l2, classify_tol);
    orb.symmetry = tag;
    return orb;
}

PeriodicOrbit g_pair(const ReversibleSystem& sys, const PeriodicOrbit& orbit, double tol) {
    const int n = orbit.period;
    // forward order of the image orbit: g(x_0), g(x_{n-1}), ..., g(x_1)
    std::vector<Vec2> image;
    image.reserve(n);
    image.push_back(sys.g.map.forward(orbit.points[0]));
    for (int i = n - 1; i >= 1; --i) image.push_back(sys.g.map.forward(orbit.points[i]));

    // same point set => symmetric orbit, return the original
    bool same = true;
    for (const Vec2& p : image) {
        double best = 1e300;
        for (const Vec2& q : orbit.points)
            best = std::min(best, system_distance(sys, p, q));
        if (best > 10.0 * std::max(orbit.closure_residual, tol)) { same = false; break; }
    }
    if (same) return orbit;

    PeriodicOrbit out;
    out.period = n;
    out.points = image;
    out.closure_residual = system_distance(sys, iterate(sys, image[0], n).points.back(), image[0]);
    out.monodromy = orbit_monodromy(sys, out.points);
    auto [l1, l2] = eigenvalues(out.monodromy);
    out.mult1 = l1;
    out.mult2 = l2;
    out.jacobian_det = out.monodromy.det();
    out.cls = classify_multipliers(l1, l2, 1e-6);
    out.symmetry = SymmetryTag::none;

    // postcondition: image multipliers are the inverses of the originals
    const cplx i1 = 1.0 / orbit.mult1, i2 = 1.0 / orbit.mult2;
    const double scale = std::max({std::abs(i1), std::abs(i2), 1.0});
    const double direct = std::max(std::abs(l1 - i1), std::abs(l2 - i2));
    const double swapped = std::max(std::abs(l1 - i2), std::abs(l2 - i1));
    if (std::min(direct, swapped) > tol * scale) {
        std::ostringstream os;
        os << "g_pair: multiplier inversion check failed: original (" << orbit.mult1 << ", "
           << orbit.mult2 << "), image (" << l1 << ", " << l2 << "), tol " << tol;
        throw numerical_error(os.str());
    }
    return out;
}

}  // namespace revlab
