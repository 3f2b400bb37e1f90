#include "revlab/planar_map.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "revlab/errors.hpp"

namespace revlab {

namespace {
std::string point_str(const Vec2& v) {
    std::ostringstream os;
    os << "(" << v.x << ", " << v.y << ")";
    return os.str();
}
}  // namespace

CheckReport check_involution(const Involution& g, const std::vector<Vec2>& samples, double tol) {
    if (samples.empty()) throw validation_error("check_involution: empty sample set");
    CheckReport rep;
    for (const Vec2& s : samples) {
        if (!s.finite()) throw validation_error("check_involution: non-finite sample " + point_str(s));
        const Vec2 g1 = g.map.forward(s);
        if (!g1.finite())
            throw numerical_error("check_involution: non-finite image of sample " + point_str(s));
        const Vec2 g2 = g.map.forward(g1);
        if (!g2.finite())
            throw numerical_error("check_involution: non-finite second image of sample " +
                                  point_str(s));
        rep.max_residual = std::max(rep.max_residual, (g2 - s).norm());
    }
    rep.pass = rep.max_residual <= tol;
    return rep;
}

CheckReport check_reversibility(const ReversibleSystem& sys, const std::vector<Vec2>& samples,
                                double tol) {
    if (samples.empty()) throw validation_error("check_reversibility: empty sample set");
    CheckReport rep;
    for (const Vec2& s : samples) {
        if (!s.finite())
            throw validation_error("check_reversibility: non-finite sample " + point_str(s));
        try {
            Vec2 x = sys.g.map.forward(s);
            x = sys.f.forward(x);
            x = sys.g.map.forward(x);
            x = sys.f.forward(x);
            if (!x.finite())
                throw domain_error("non-finite composition at " + point_str(s));
            rep.max_residual = std::max(rep.max_residual, (x - s).norm());
        } catch (const domain_error&) {
            ++rep.skipped;
        }
    }
    if (rep.skipped > 0)
        rep.note = std::to_string(rep.skipped) + " sample(s) escaped the domain and were skipped";
    rep.pass = rep.max_residual <= tol;
    return rep;
}

Mat2 map_jacobian(const PlanarMap& map, const Vec2& x, double h) {
    if (map.jacobian) {
        Mat2 J = map.jacobian(x);
        if (!J.finite())
            throw numerical_error("map_jacobian: non-finite exact Jacobian at " + point_str(x));
        return J;
    }
    if (h <= 0.0) h = 1e-6 * std::max(1.0, x.norm());
    return fd_jacobian(map, x, h);
}

Mat2 fd_jacobian(const PlanarMap& map, const Vec2& x, double h) {
    if (h <= 0.0) h = 1e-6 * std::max(1.0, x.norm());
    const Vec2 fxp = map.forward({x.x + h, x.y});
    const Vec2 fxm = map.forward({x.x - h, x.y});
    const Vec2 fyp = map.forward({x.x, x.y + h});
    const Vec2 fym = map.forward({x.x, x.y - h});
    for (const Vec2* v : {&fxp, &fxm, &fyp, &fym})
        if (!v->finite())
            throw numerical_error("fd_jacobian: non-finite stencil evaluation near " +
                                  point_str(x));
    return {(fxp.x - fxm.x) / (2 * h), (fyp.x - fym.x) / (2 * h),
            (fxp.y - fxm.y) / (2 * h), (fyp.y - fym.y) / (2 * h)};
}

std::vector<Vec2> sample_box(const Box& box, int n, unsigned long long seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> ux(box.xmin, box.xmax);
    std::uniform_real_distribution<double> uy(box.ymin, box.ymax);
    std::vector<Vec2> out;
    out.reserve(n);
    for (int i = 0; i < n; ++i) {
        const double x = ux(rng);
        const double y = uy(rng);
        out.push_back({x, y});
    }
    return out;
}

}  // namespace revlab
