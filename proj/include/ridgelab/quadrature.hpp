#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "errors.hpp"

namespace ridgelab {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    std::size_t intervals = 0;
};

inline constexpr std::size_t kQuadratureBudget = 100000;

/// Adaptive Simpson bisection with the Richardson correction (S2 + (S2 - S1)/15).
/// `knots` are sorted breakpoints including both endpoints; every piece between
/// consecutive knots is integrated separately and receives a share of `abs_tol`
/// proportional to its length. Throws QuadratureNotConverged when the number
/// of accepted subintervals would exceed `budget`.
template <class F>
[[nodiscard]] QuadResult integrate_adaptive(F&& f, std::span<const double> knots, double abs_tol,
                                            std::size_t budget = kQuadratureBudget)
{
    struct Segment {
        double a, b, fa, fm, fb, whole, tol;
    };
    QuadResult out;
    if (knots.size() < 2)
        return out;
    const double span = knots.back() - knots.front();
    if (!(span > 0.0))
        return out;

    std::vector<Segment> stack;
    for (std::size_t p = 0; p + 1 < knots.size(); ++p) {
        const double lo = knots[p];
        const double hi = knots[p + 1];
        if (!(hi > lo))
            continue;
        // Eight initial panels per piece so an oscillating integrand cannot
        // fool the first Simpson comparison.
        constexpr int panels = 8;
        const double piece_tol = abs_tol * (hi - lo) / span;
        for (int i = 0; i < panels; ++i) {
            const double a = lo + (hi - lo) * i / panels;
            const double b = i + 1 == panels ? hi : lo + (hi - lo) * (i + 1) / panels;
            const double fa = f(a);
            const double fb = f(b);
            const double fm = f(0.5 * (a + b));
            stack.push_back({a, b, fa, fm, fb, (b - a) / 6.0 * (fa + 4.0 * fm + fb), piece_tol / panels});
        }
    }

    while (!stack.empty()) {
        const Segment s = stack.back();
        stack.pop_back();
        const double m = 0.5 * (s.a + s.b);
        const double flm = f(0.5 * (s.a + m));
        const double frm = f(0.5 * (m + s.b));
        const double left = (m - s.a) / 6.0 * (s.fa + 4.0 * flm + s.fm);
        const double right = (s.b - m) / 6.0 * (s.fm + 4.0 * frm + s.fb);
        const double refined = left + right;
        const double diff = refined - s.whole;
        const bool tiny = (s.b - s.a) <= 1e-13 * std::max(1.0, std::abs(s.a));
        if (std::abs(diff) <= 15.0 * s.tol || tiny) {
            out.value += refined + diff / 15.0;
            out.error_estimate += std::abs(diff) / 15.0;
            if (++out.intervals > budget)
                throw QuadratureNotConverged("adaptive quadrature exceeded its subinterval budget");
            continue;
        }
        if (out.intervals + stack.size() + 2 > budget)
            throw QuadratureNotConverged("adaptive quadrature exceeded its subinterval budget");
        stack.push_back({s.a, m, s.fa, flm, s.fm, left, 0.5 * s.tol});
        stack.push_back({m, s.b, s.fm, frm, s.fb, right, 0.5 * s.tol});
    }
    return out;
}

}  // namespace ridgelab
