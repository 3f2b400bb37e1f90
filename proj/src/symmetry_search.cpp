#include "revlab/symmetry_search.hpp"

#include <algorithm>
#include <cmath>
#include <optional>

#include "revlab/errors.hpp"

namespace revlab {

void SymmetrySearchWindow::validate() const {
    if (!(s_lo < s_hi)) throw validation_error("search window: require s_lo < s_hi");
    if (half_period < 1) throw validation_error("search window: require k >= 1");
    if (scan_points < 2) throw validation_error("search window: require >= 2 scan points");
    if (!(refine_tol > 0.0) || !(closure_tol > 0.0))
        throw validation_error("search window: tolerances must be positive");
}

int two_line_period(InvolutionChoice source, InvolutionChoice target, int k) {
    if (source == InvolutionChoice::g && target == InvolutionChoice::g) return 2 * k;
    if (source == InvolutionChoice::g && target == InvolutionChoice::h2) return 2 * k - 1;
    if (source == InvolutionChoice::h2 && target == InvolutionChoice::h2) return 2 * k;
    return 2 * k + 1;  // h2 -> g
}

namespace {

struct ScanSample {
    double s = 0.0;
    double dist_g = 0.0;
    double dist_h2 = 0.0;
    bool valid = false;
};

std::optional<Vec2> kth_image(const ReversibleSystem& sys,
                              const std::function<Vec2(double)>& curve, const Vec2& shift,
                              double s, int k) {
    Vec2 x = curve(s) + shift;
    if (!sys.domain.contains(sys.canonical(x))) return std::nullopt;
    try {
        for (int i = 0; i < k; ++i) {
            x = sys.f.forward(x);
            if (!x.finite() || !sys.domain.contains(sys.canonical(x))) return std::nullopt;
        }
    } catch (const domain_error&) {
        return std::nullopt;
    }
    return x;
}

bool orbit_known(const ReversibleSystem& sys, const std::vector<PeriodicOrbit>& found,
                 const PeriodicOrbit& cand, double merge_tol) {
    for (const PeriodicOrbit& o : found) {
        if (o.period != cand.period) continue;
        double best = 1e300;
        for (const Vec2& p : o.points)
            best = std::min(best, system_distance(sys, p, cand.points[0]));
        if (best <= merge_tol) return true;
    }
    return false;
}

}  // namespace

std::vector<PeriodicOrbit> find_symmetric_periodic(const ReversibleSystem& sys,
                                                   const SymmetrySearchWindow& window) {
    window.validate();
    const Involution& src = (window.source == InvolutionChoice::g) ? sys.g : sys.h2;
    const int k = window.half_period;

    std::vector<ScanSample> samples(window.scan_points + 1);
    for (int i = 0; i <= window.scan_points; ++i) {
        ScanSample& sm = samples[i];
        sm.s = window.s_lo + (window.s_hi - window.s_lo) * double(i) / double(window.scan_points);
        const auto y = kth_image(sys, src.fixed_curve, window.curve_shift, sm.s, k);
        if (!y) continue;
        sm.dist_g = sys.g.signed_distance(*y);
        sm.dist_h2 = sys.h2.signed_distance(*y);
        sm.valid = std::isfinite(sm.dist_g) && std::isfinite(sm.dist_h2);
    }

    std::vector<PeriodicOrbit> found;
    int refinement_failures = 0;
    std::string first_failed_bracket;
    for (InvolutionChoice target : {InvolutionChoice::g, InvolutionChoice::h2}) {
        const int period = two_line_period(window.source, target, k);
        if (period < 1) continue;
        for (int i = 0; i < window.scan_points; ++i) {
            const ScanSample& a = samples[i];
            const ScanSample& b = samples[i + 1];
            if (!a.valid || !b.valid) continue;
            const double fa = (target == InvolutionChoice::g) ? a.dist_g : a.dist_h2;
            const double fb = (target == InvolutionChoice::g) ? b.dist_g : b.dist_h2;
            if (fa == 0.0 && fb == 0.0) continue;  // tangential stretch, no bracket
            if (!((fa <= 0.0 && fb >= 0.0) || (fa >= 0.0 && fb <= 0.0))) continue;

            // bisection on s
            double lo = a.s, hi = b.s, flo = fa;
            bool ok = true;
            while (hi - lo > window.refine_tol) {
                const double mid = 0.5 * (lo + hi);
                const auto y = kth_image(sys, src.fixed_curve, window.curve_shift, mid, k);
                if (!y) { ok = false; break; }
                const double fm = (target == InvolutionChoice::g) ? sys.g.signed_distance(*y)
                                                                  : sys.h2.signed_distance(*y);
                if (!std::isfinite(fm)) { ok = false; break; }
                if (fm == 0.0) { lo = hi = mid; break; }
                if ((flo < 0.0) == (fm < 0.0)) { lo = mid; flo = fm; }
                else hi = mid;
            }
            if (!ok) {
                ++refinement_failures;
                if (first_failed_bracket.empty())
                    first_failed_bracket = "[" + std::to_string(a.s) + ", " +
                                           std::to_string(b.s) + "]";
                continue;
            }

            const double s_root = 0.5 * (lo + hi);
            const Vec2 x0 = src.fixed_curve(s_root) + window.curve_shift;
            const SymmetryTag tag = (window.source == InvolutionChoice::g) ? SymmetryTag::via_g
                                                                          : SymmetryTag::via_h2;
            auto orbit = build_periodic_orbit(sys, x0, period, tag, window.closure_tol,
                                              window.classify_tol);
            if (!orbit) continue;  // false bracket of the signed distance
            if (!orbit_known(sys, found, *orbit, 10.0 * window.closure_tol))
                found.push_back(std::move(*orbit));
        }
    }

    if (found.empty() && refinement_failures > 0)
        throw numerical_error("find_symmetric_periodic: " +
                              std::to_string(refinement_failures) +
                              " bracket(s) failed to refine, first at s in " +
                              first_failed_bracket);

    std::sort(found.begin(), found.end(), [&](const PeriodicOrbit& a, const PeriodicOrbit& b) {
        if (a.period != b.period) return a.period < b.period;
        const Vec2 pa = sys.canonical(a.points[0]), pb = sys.canonical(b.points[0]);
        if (pa.x != pb.x) return pa.x < pb.x;
        return pa.y < pb.y;
    });
    return found;
}

}  // namespace revlab
