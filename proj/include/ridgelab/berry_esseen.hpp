#pragma once

// Berry-Esseen smoothing inequality
//   sup |F_{X*} - Phi| <= (1/pi) int_{-T}^{T} |f_{X*}(x) - e^{-x^2/2}| / |x| dx + c/T
// evaluated by quadrature, with the integral split at |x| = a.

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "charfn.hpp"
#include "dist_core.hpp"
#include "errors.hpp"
#include "quadrature.hpp"
#include "zero_strip.hpp"

namespace ridgelab {

/// Default absolute constant c of the smoothing inequality.
inline constexpr double kDefaultCbe = 3.0463;
inline constexpr double kBeQuadratureTolerance = 1e-10;

/// |f(x) - e^{-x^2/2}| / |x|; the singularity at 0 is removable (value 0).
[[nodiscard]] inline double be_integrand(const CharFn& cf, double x)
{
    if (std::abs(x) < 1e-8)
        return 0.0;
    const Complex f = eval_value(cf, Complex(x, 0.0));
    return std::abs(f - std::exp(-0.5 * x * x)) / std::abs(x);
}

struct SmoothingBound {
    double integral = 0.0;
    double core = 0.0;  // |x| <= a
    double tail = 0.0;  // a <= |x| <= T
    double rhs = 0.0;   // integral / pi + cBE / T
};

/// Quadrature of the integrand over [-T, T] with knots at 0 and, when
/// 0 < split < T, at +-split.
[[nodiscard]] inline SmoothingBound be_bound(const CharFn& cf, double T, double cBE,
                                             double split = std::numeric_limits<double>::infinity())
{
    if (!(T > 0.0) || !std::isfinite(T))
        throw std::invalid_argument("be_bound needs a finite positive T");
    auto g = [&cf](double x) { return be_integrand(cf, x); };
    SmoothingBound out;
    if (split > 0.0 && split < T) {
        const double tol = kBeQuadratureTolerance;
        const double core_knots[] = {-split, 0.0, split};
        const double left_knots[] = {-T, -split};
        const double right_knots[] = {split, T};
        out.core = integrate_adaptive(g, core_knots, tol * split / T).value;
        out.tail = integrate_adaptive(g, left_knots, 0.5 * tol * (T - split) / T).value +
                   integrate_adaptive(g, right_knots, 0.5 * tol * (T - split) / T).value;
    } else {
        const double knots[] = {-T, 0.0, T};
        out.core = integrate_adaptive(g, knots, kBeQuadratureTolerance).value;
    }
    out.integral = out.core + out.tail;
    out.rhs = out.integral / std::numbers::pi + cBE / T;
    return out;
}

struct BEReport {
    StripReport strip;
    double T = 0.0;
    double a = 0.0;
    double cBE = kDefaultCbe;
    double c0_eff = 1.0;
    double integral_total = 0.0;
    double integral_core = 0.0;
    double integral_tail = 0.0;
    double rhs_bound = 0.0;
    double K = 0.0;
    double c1_hat = 0.0;  // K sigma delta
    bool satisfied = false;
};

/// Full stability chain for a lattice law: strip -> T = Delta/(4 c0),
/// a = (Delta/c0)^{1/3} -> smoothing bound -> Kolmogorov distance -> c1 = K sigma delta.
[[nodiscard]] inline BEReport theorem2_chain(const LatticeDist& dist, double c0_eff, double cBE = kDefaultCbe)
{
    if (!(c0_eff > 0.0))
        throw std::invalid_argument("c0_eff must be positive");
    BEReport rep;
    rep.strip = strip_report(dist);
    rep.c0_eff = c0_eff;
    rep.cBE = cBE;
    const double Delta = rep.strip.Delta;
    if (!std::isfinite(Delta))
        throw std::invalid_argument("theorem2_chain needs a finite strip");
    if (!(Delta > c0_eff))
        throw StripTooNarrow("Delta <= c0_eff: the stability bound is vacuous");
    rep.T = Delta / (4.0 * c0_eff);
    rep.a = std::cbrt(Delta / c0_eff);

    const Standardization s = moments(dist);
    const CharFn cf = CharFn::standardized(CharFn::lattice(dist), s);
    const auto bound = be_bound(cf, rep.T, cBE, rep.a);
    rep.integral_total = bound.integral;
    rep.integral_core = bound.core;
    rep.integral_tail = bound.tail;
    rep.rhs_bound = bound.rhs;
    rep.K = kolmogorov_to_normal(dist, s).distance;
    rep.c1_hat = rep.K * rep.strip.sigma * rep.strip.delta;
    rep.satisfied = rep.K <= rep.rhs_bound;
    return rep;
}

}  // namespace ridgelab
