#pragma once

// Stability of the Marcinkiewicz theorem, measured: the residual
// u(z) + Re(z^2/2) on |z| <= Delta/3 against the cubic envelope |z|^3/Delta,
// and monotone decrease of x -> u(x + iy) on [0, Delta/2].

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

#include "charfn.hpp"
#include "grid.hpp"

namespace ridgelab {

inline constexpr int kDefaultGridSteps = 200;
/// |z| below this fraction of Delta is excluded from the sup-ratio: the ratio
/// there is rounding noise divided by a vanishing |z|^3.
inline constexpr double kExclusionFraction = 1e-3;

/// u(z) + Re(z^2 / 2), with Re(z^2 / 2) = (x^2 - y^2) / 2.
[[nodiscard]] inline double residual(const CharFn& cf, Complex z)
{
    return eval_log_mod(cf, z).u + 0.5 * (z.real() * z.real() - z.imag() * z.imag());
}

struct Lemma1Result {
    double max_ux = -std::numeric_limits<double>::infinity();
    Complex argmax;
    std::size_t skipped = 0;
};

/// max u_x over {x in [0, Delta/2]} x y_values, from the analytic gradient.
/// A value <= 0 (up to rounding) certifies monotone decrease on the grid.
[[nodiscard]] inline Lemma1Result lemma1_check(const CharFn& cf, double Delta, std::span<const double> y_values,
                                               int x_steps)
{
    if (!(Delta > 0.0) || !std::isfinite(Delta))
        throw std::invalid_argument("lemma1_check needs a finite positive Delta");
    if (x_steps < 2)
        throw std::invalid_argument("lemma1_check needs at least 2 x steps");
    Lemma1Result out;
    for (const double y : y_values) {
        for (int i = 0; i < x_steps; ++i) {
            const double x = 0.5 * Delta * i / (x_steps - 1);
            const auto p = try_eval_log_mod(cf, Complex(x, y));
            if (!p) {
                ++out.skipped;
                continue;
            }
            const double ux = p->grad.real();
            if (ux > out.max_ux) {
                out.max_ux = ux;
                out.argmax = p->z;
            }
        }
    }
    return out;
}

/// Nine evenly spaced heights in [-Delta/2, Delta/2].
[[nodiscard]] inline std::vector<double> default_lemma1_heights(double Delta)
{
    std::vector<double> ys;
    for (int j = 0; j <= 8; ++j)
        ys.push_back(-0.5 * Delta + Delta * j / 8.0);
    return ys;
}

struct Theorem1Report {
    double Delta_used = 0.0;
    int grid_steps = 0;
    /// Empirical c0: sup |residual| Delta / |z|^3 over |z| <= Delta/3, |z| >= 1e-3 Delta.
    double sup_ratio = 0.0;
    Complex sup_point;
    double max_residual = 0.0;
    /// sup_ratio on |z| <= Delta/30 divided by sup_ratio on |z| <= Delta/3
    /// (0 when the outer sup is exactly 0).
    double cubic_decay_ratio = 0.0;
    double lemma1_margin = 0.0;
    std::size_t skipped = 0;
    /// (|z|, max ratio on that circle) for plotting.
    std::vector<std::pair<double, double>> ratio_profile;
};

namespace detail {

struct DiscSweep {
    double sup_ratio = 0.0;
    Complex sup_point;
    double max_residual = 0.0;
    std::size_t skipped = 0;
    std::vector<std::pair<double, double>> profile;
};

inline DiscSweep sweep_disc(const CharFn& cf, double Delta, double radius, int steps)
{
    DiscSweep out;
    const double exclusion = kExclusionFraction * Delta;
    const Grid grid = Grid::polar(Complex(0.0, 0.0), radius, steps, steps);
    const auto pts = grid.points();
    for (int i = 0; i < steps; ++i) {
        double circle_max = 0.0;
        const double r = radius * (i + 1) / steps;
        for (int j = 0; j < steps; ++j) {
            const Complex z = pts[static_cast<std::size_t>(i) * steps + j];
            const auto p = try_eval_log_mod(cf, z);
            if (!p) {
                ++out.skipped;
                continue;
            }
            const double res = std::abs(p->u + 0.5 * (z.real() * z.real() - z.imag() * z.imag()));
            out.max_residual = std::max(out.max_residual, res);
            if (r < exclusion)
                continue;
            const double ratio = res * Delta / (r * r * r);
            circle_max = std::max(circle_max, ratio);
            if (ratio > out.sup_ratio) {
                out.sup_ratio = ratio;
                out.sup_point = z;
            }
        }
        if (r >= exclusion)
            out.profile.emplace_back(r, circle_max);
    }
    return out;
}

}  // namespace detail

/// Polar-grid measurement of the residual field on |z| <= Delta/3 together
/// with the Lemma-1 margin on [0, Delta/2]. Delta must be finite: callers cap
/// zero-free catalog entries explicitly.
[[nodiscard]] inline Theorem1Report theorem1_verify(const CharFn& cf, double Delta, int grid_steps = kDefaultGridSteps)
{
    if (!(Delta > 0.0) || !std::isfinite(Delta))
        throw std::invalid_argument("theorem1_verify needs a finite positive Delta (cap infinite strips explicitly)");
    const auto outer = detail::sweep_disc(cf, Delta, Delta / 3.0, grid_steps);
    const auto inner = detail::sweep_disc(cf, Delta, Delta / 30.0, grid_steps);
    const auto ys = default_lemma1_heights(Delta);
    const auto lemma = lemma1_check(cf, Delta, ys, grid_steps);

    Theorem1Report rep;
    rep.Delta_used = Delta;
    rep.grid_steps = grid_steps;
    rep.sup_ratio = outer.sup_ratio;
    rep.sup_point = outer.sup_point;
    rep.max_residual = outer.max_residual;
    rep.cubic_decay_ratio = outer.sup_ratio > 0.0 ? inner.sup_ratio / outer.sup_ratio : 0.0;
    rep.lemma1_margin = lemma.max_ux;
    rep.skipped = outer.skipped + inner.skipped + lemma.skipped;
    rep.ratio_profile = outer.profile;
    return rep;
}

}  // namespace ridgelab
