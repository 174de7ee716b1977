#pragma once

// Zeros of the probability generating polynomial P(w) = sum p_k w^k and the
// zero-free strip of the characteristic function f_X(z) = e^{i z offset} P(e^{iz}).

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "dist_core.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace ridgelab {

inline constexpr std::size_t kRawDegreeCap = 4096;
inline constexpr double kRootResidualTolerance = 1e-8;

/// Roots of the trimmed generating polynomial, listed with multiplicity.
struct RootSet {
    std::vector<Complex> roots;
    /// |P(w)| / (max|coef| * max(1, |w|)^degree) per root.
    std::vector<double> residuals;
    /// Roots replaced by a cluster mean (0 when every root was isolated).
    std::size_t clustered = 0;
    int attempts = 1;
};

struct StripReport {
    double delta = std::numeric_limits<double>::infinity();
    double sigma = 0.0;
    double Delta = std::numeric_limits<double>::infinity();
    /// Root attaining min |Arg w| (smallest modulus on ties); empty when zero-free.
    std::optional<Complex> nearest_root;
};

namespace detail {

/// log|P(w)| and log P~(|w|) with P~ = sum |a_k| |w|^k, scaled so neither overflows.
struct PolyLogEval {
    double log_abs = 0.0;
    double log_majorant = 0.0;
};

inline PolyLogEval poly_log_eval(std::span<const double> a, Complex w)
{
    const std::size_t n = a.size() - 1;
    const double r = std::abs(w);
    Complex p;
    double maj = 0.0;
    double shift = 0.0;
    if (r <= 1.0) {
        for (std::size_t k = a.size(); k-- > 0;) {
            p = p * w + a[k];
            maj = maj * r + std::abs(a[k]);
        }
    } else {
        // P(w) = w^n Q(1/w) with Q the reversed polynomial.
        const Complex v = 1.0 / w;
        const double rv = 1.0 / r;
        for (std::size_t k = 0; k <= n; ++k) {
            p = p * v + a[k];
            maj = maj * rv + std::abs(a[k]);
        }
        shift = static_cast<double>(n) * std::log(r);
    }
    return {shift + std::log(std::abs(p)), shift + std::log(maj)};
}

/// Newton correction P(w)/P'(w), evaluated in the orientation that keeps |w| <= 1.
inline Complex newton_ratio(std::span<const double> a, Complex w)
{
    const std::size_t n = a.size() - 1;
    if (std::abs(w) <= 1.0) {
        Complex p;
        Complex dp;
        for (std::size_t k = a.size(); k-- > 0;) {
            dp = dp * w + p;
            p = p * w + a[k];
        }
        return p / dp;
    }
    const Complex v = 1.0 / w;
    Complex q;
    Complex dq;
    for (std::size_t k = 0; k <= n; ++k) {
        dq = dq * v + q;
        q = q * v + a[k];
    }
    return w / (static_cast<double>(n) - v * dq / q);
}

/// Simultaneous (Aberth-Ehrlich) iteration from points on a circle of radius
/// |a_0 / a_n|^{1/n}, the geometric mean of the root moduli.
inline std::vector<Complex> aberth(std::span<const double> a, double angle_offset, double radius_scale)
{
    const std::size_t n = a.size() - 1;
    const double radius = radius_scale * std::exp((std::log(a.front()) - std::log(a.back())) / static_cast<double>(n));
    std::vector<Complex> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = std::polar(radius, angle_offset + 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n));

    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double noise = 4.0 * static_cast<double>(n + 1) * eps;
    std::vector<bool> frozen(n, false);
    std::vector<int> at_floor(n, 0);
    constexpr int max_iter = 1000;
    for (int iter = 0; iter < max_iter; ++iter) {
        double max_move = 0.0;
        bool all_frozen = true;
        for (std::size_t k = 0; k < n; ++k) {
            if (frozen[k])
                continue;
            all_frozen = false;
            const Complex ratio = newton_ratio(a, w[k]);
            Complex repulsion;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k)
                    repulsion += 1.0 / (w[k] - w[j]);
            }
            const Complex step = ratio / (1.0 - ratio * repulsion);
            if (std::isfinite(step.real()) && std::isfinite(step.imag()))
                w[k] -= step;
            const double move = std::abs(step) / std::max(1.0, std::abs(w[k]));
            max_move = std::max(max_move, move);
            // Members of a multiple-root cluster never settle; they are frozen after
            // sitting at the rounding floor |P(w)| ~ eps P~(|w|) for 10 sweeps.
            const auto ev = poly_log_eval(a, w[k]);
            at_floor[k] = ev.log_abs <= ev.log_majorant + std::log(noise) ? at_floor[k] + 1 : 0;
            if (move < 1e-12 || at_floor[k] >= 10)
                frozen[k] = true;
        }
        if (all_frozen || max_move < 1e-12)
            break;
    }
    return w;
}

/// Coefficients of P^{(m-1)} / (m-1)!, rescaled by a common factor so that
/// binomial weights C(k, m-1) cannot overflow at high degree.
inline std::vector<double> scaled_derivative(std::span<const double> a, std::size_t order)
{
    const std::size_t n = a.size() - 1;
    std::vector<double> logc;
    logc.reserve(n + 1 - order);
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t k = order; k <= n; ++k) {
        const double lc = a[k] > 0.0
                              ? std::log(a[k]) + std::lgamma(static_cast<double>(k) + 1.0) -
                                    std::lgamma(static_cast<double>(order) + 1.0) -
                                    std::lgamma(static_cast<double>(k - order) + 1.0)
                              : -std::numeric_limits<double>::infinity();
        logc.push_back(lc);
        top = std::max(top, lc);
    }
    std::vector<double> out(logc.size());
    for (std::size_t j = 0; j < logc.size(); ++j)
        out[j] = std::exp(logc[j] - top);
    return out;
}

/// An m-fold root of P is a simple root of P^{(m-1)}; Newton on that derivative
/// from the cluster mean recovers the center to full accuracy. For m = n the
/// derivative is linear and the step lands on -a_{n-1} / (n a_n).
inline Complex polish_cluster_center(std::span<const double> a, Complex mean, std::size_t m)
{
    const auto d = scaled_derivative(a, m - 1);
    if (d.size() < 2 || d.front() == 0.0)
        return mean;
    Complex c = mean;
    for (int iter = 0; iter < 50; ++iter) {
        const Complex step = newton_ratio(d, c);
        if (!std::isfinite(step.real()) || !std::isfinite(step.imag()))
            break;
        c -= step;
        if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(c)))
            break;
    }
    return std::isfinite(c.real()) && std::isfinite(c.imag()) ? c : mean;
}

/// Groups roots whose inclusion discs D(w_k, n |W_k|) overlap, where W_k is the
/// Weierstrass correction with the evaluation rounding error added to |P(w_k)|.
/// Each connected component of m discs holds exactly m roots; components with
/// m > 1 are replaced by m copies of their mean.
inline std::size_t merge_clusters(std::span<const double> a, std::vector<Complex>& w)
{
    const std::size_t n = w.size();
    if (n < 2)
        return 0;
    constexpr double eps = std::numeric_limits<double>::epsilon();
    const double log_lead = std::log(a.back());
    const double log_gamma = std::log(2.0 * static_cast<double>(n + 1) * eps);
    std::vector<double> radius(n);
    for (std::size_t k = 0; k < n; ++k) {
        const auto ev = poly_log_eval(a, w[k]);
        const double big = std::max(ev.log_abs, ev.log_majorant + log_gamma);
        const double log_err = big + std::log1p(std::exp(std::min(ev.log_abs, ev.log_majorant + log_gamma) - big));
        double log_prod = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j != k)
                log_prod += std::log(std::abs(w[k] - w[j]));
        }
        radius[k] = static_cast<double>(n) * std::exp(log_err - log_lead - log_prod);
    }

    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    auto find = [&](std::size_t i) {
        while (parent[i] != i)
            i = parent[i] = parent[parent[i]];
        return i;
    };
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (std::abs(w[i] - w[j]) <= radius[i] + radius[j])
                parent[find(i)] = find(j);
        }
    }
    std::vector<Complex> sum(n);
    std::vector<std::size_t> count(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        sum[find(i)] += w[i];
        ++count[find(i)];
    }
    std::vector<Complex> center(n);
    for (std::size_t r = 0; r < n; ++r) {
        if (count[r] > 1)
            center[r] = polish_cluster_center(a, sum[r] / static_cast<double>(count[r]), count[r]);
    }
    std::size_t merged = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = find(i);
        if (count[r] > 1) {
            w[i] = center[r];
            ++merged;
        }
    }
    return merged;
}

inline double root_residual(std::span<const double> a, Complex w, double max_coef)
{
    const std::size_t n = a.size() - 1;
    const auto ev = poly_log_eval(a, w);
    const double log_scale = static_cast<double>(n) * std::log(std::max(1.0, std::abs(w)));
    return std::exp(ev.log_abs - log_scale) / max_coef;
}

}  // namespace detail

/// Roots of P(w) = sum_k weights[k] w^k. Factored inputs use the closed form
/// -(1 - p_i)/p_i; raw inputs go through simultaneous iteration and cluster merging.
[[nodiscard]] inline RootSet pgf_roots(const LatticeDist& dist)
{
    const auto a = dist.weights();
    if (a.size() < 2)
        throw InvalidDistribution("root finding needs at least two support points");
    const std::size_t n = a.size() - 1;
    const double max_coef = *std::max_element(a.begin(), a.end());

    RootSet out;
    auto fill_residuals = [&] {
        out.residuals.clear();
        for (const Complex w : out.roots)
            out.residuals.push_back(detail::root_residual(a, w, max_coef));
    };

    if (dist.form() == LatticeDist::Form::bernoulli_product && !dist.trimmed()) {
        for (double p : dist.ps())
            out.roots.emplace_back(-(1.0 - p) / p, 0.0);
        fill_residuals();
        return out;
    }
    if (n > kRawDegreeCap)
        throw DegreeCapExceeded("raw-form polynomial degree exceeds 4096; supply bernoulli_ps instead");
    if (n == 1) {
        out.roots.emplace_back(-a[0] / a[1], 0.0);
        fill_residuals();
        return out;
    }

    constexpr double offsets[] = {0.4, 1.1};
    constexpr double scales[] = {1.0, 1.1};
    for (int attempt = 0; attempt < 2; ++attempt) {
        out.roots = detail::aberth(a, offsets[attempt], scales[attempt]);
        out.clustered = detail::merge_clusters(a, out.roots);
        out.attempts = attempt + 1;
        fill_residuals();
        const bool ok = std::all_of(out.residuals.begin(), out.residuals.end(),
                                    [](double r) { return r <= kRootResidualTolerance; });
        if (ok)
            return out;
    }
    throw RootFindingDiverged("generating-polynomial roots failed the residual check after a retry");
}

namespace detail {

/// Index of the root minimizing |Arg w|, smallest |w| on ties.
inline std::optional<std::size_t> nearest_root_index(const RootSet& rs)
{
    std::optional<std::size_t> best;
    for (std::size_t k = 0; k < rs.roots.size(); ++k) {
        if (!best) {
            best = k;
            continue;
        }
        const double ak = std::abs(std::arg(rs.roots[k]));
        const double ab = std::abs(std::arg(rs.roots[*best]));
        if (ak < ab || (ak == ab && std::abs(rs.roots[k]) < std::abs(rs.roots[*best])))
            best = k;
    }
    return best;
}

}  // namespace detail

/// delta = min |Arg w| over the roots: f_X(z) = 0 iff e^{iz} = w, i.e.
/// z = Arg w + 2 pi m - i log|w|, so the zero nearest the imaginary axis has
/// |Re z| = min |Arg w|. Empty root set gives +infinity.
[[nodiscard]] inline double zero_free_delta(const RootSet& rs)
{
    const auto k = detail::nearest_root_index(rs);
    if (!k)
        return std::numeric_limits<double>::infinity();
    return std::abs(std::arg(rs.roots[*k]));
}

[[nodiscard]] inline StripReport strip_report(const LatticeDist& dist)
{
    const Standardization s = moments(dist);
    const RootSet rs = pgf_roots(dist);
    StripReport out;
    out.sigma = s.sigma;
    out.delta = zero_free_delta(rs);
    out.Delta = out.delta * s.sigma;
    if (const auto k = detail::nearest_root_index(rs))
        out.nearest_root = rs.roots[*k];
    return out;
}

}  // namespace ridgelab
