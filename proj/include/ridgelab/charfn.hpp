#pragma once

// Entire characteristic functions evaluated at complex arguments in the log
// domain: u = log|f| and the analytic derivative f'/f = u_x - i u_y.

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "dist_core.hpp"
#include "errors.hpp"
#include "grid.hpp"

namespace ridgelab {

/// Whether log max u(+-ir) = o(r) holds for every strip width, or only at the critical rate.
enum class GrowthClass { finite_strip, critical };

class CharFn;

struct LatticeCf {
    LatticeDist dist;
};

/// f(z) = exp(-i z mu / sigma) * inner(z / sigma).
struct StandardizedCf {
    std::shared_ptr<const CharFn> inner;
    Standardization std_;
};

/// f(z) = exp(-z^2 / 2).
struct NormalCf {};

/// f(z) = exp(cos z - 1): difference of two independent Poisson(1/2) variables.
/// u(x + iy) = cos x cosh y - 1; zero-free, ridge, critical growth.
struct SkellamHalfCf {};

class CharFn {
public:
    using Variant = std::variant<LatticeCf, StandardizedCf, NormalCf, SkellamHalfCf>;

    static CharFn lattice(LatticeDist dist) { return CharFn(LatticeCf{std::move(dist)}); }
    static CharFn normal() { return CharFn(NormalCf{}); }
    static CharFn skellam_half() { return CharFn(SkellamHalfCf{}); }

    static CharFn standardized(CharFn inner, Standardization s)
    {
        return CharFn(StandardizedCf{std::make_shared<const CharFn>(std::move(inner)), s});
    }

    /// Characteristic function of X* = (X - mu) / sigma.
    static CharFn standardized(const LatticeDist& dist) { return standardized(lattice(dist), moments(dist)); }

    /// Looks up "normal" or "skellam_half".
    static std::optional<CharFn> catalog(const std::string& name)
    {
        if (name == "normal")
            return normal();
        if (name == "skellam_half")
            return skellam_half();
        return std::nullopt;
    }

    [[nodiscard]] const Variant& variant() const noexcept { return v_; }

    [[nodiscard]] GrowthClass growth_class() const
    {
        if (std::holds_alternative<SkellamHalfCf>(v_))
            return GrowthClass::critical;
        if (const auto* s = std::get_if<StandardizedCf>(&v_))
            return s->inner->growth_class();
        return GrowthClass::finite_strip;
    }

    /// Lattice law behind a Lattice or Standardized(Lattice) function.
    [[nodiscard]] const LatticeDist* lattice_dist() const
    {
        if (const auto* l = std::get_if<LatticeCf>(&v_))
            return &l->dist;
        if (const auto* s = std::get_if<StandardizedCf>(&v_))
            return s->inner->lattice_dist();
        return nullptr;
    }

    [[nodiscard]] std::string kind() const
    {
        return std::visit(
            [](const auto& alt) -> std::string {
                using T = std::decay_t<decltype(alt)>;
                if constexpr (std::is_same_v<T, LatticeCf>)
                    return "lattice";
                else if constexpr (std::is_same_v<T, StandardizedCf>)
                    return "standardized";
                else if constexpr (std::is_same_v<T, NormalCf>)
                    return "normal";
                else
                    return "skellam_half";
            },
            v_);
    }

private:
    explicit CharFn(Variant v) : v_(std::move(v)) {}
    Variant v_;
};

struct LogModPoint {
    Complex z;
    double u = 0.0;  // log|f(z)|
    Complex grad;    // f'(z)/f(z) = u_x - i u_y
};

inline constexpr double kNearZeroScale = 1e-280;

namespace detail {

/// f(z) = exp(log_scale) * sum, f'(z) = exp(log_scale) * dsum.
struct ScaledValue {
    double log_scale = 0.0;
    Complex sum;
    Complex dsum;
};

/// Sum_k p_k exp(i z s_k) with the largest term magnitude factored out.
/// `magnitude` is sum |terms| / exp(log_scale), i.e. f(i Im z) on the same scale.
template <class Support>
ScaledValue lattice_sum(std::span<const double> log_weights, Support&& support, Complex z, double* magnitude = nullptr)
{
    const double x = z.real();
    const double y = z.imag();
    double scale = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < log_weights.size(); ++k)
        scale = std::max(scale, log_weights[k] - y * support(k));
    ScaledValue out;
    out.log_scale = scale;
    double total = 0.0;
    for (std::size_t k = 0; k < log_weights.size(); ++k) {
        if (std::isinf(log_weights[k]))
            continue;
        const double s = support(k);
        const double mag = std::exp(log_weights[k] - y * s - scale);
        const Complex term = std::polar(mag, x * s);
        out.sum += term;
        out.dsum += Complex(0.0, s) * term;
        total += mag;
    }
    if (magnitude)
        *magnitude = total;
    return out;
}

/// Below this ratio |f(z)| / f(i Im z) a raw lattice sum has cancelled away too
/// many digits for u and its gradient to be trusted.
inline constexpr double kCancellationFloor = 1e-6;

inline std::optional<LogModPoint> finish(Complex z, const ScaledValue& v, double magnitude, double u_shift,
                                         Complex grad_shift)
{
    const double mod = std::abs(v.sum);
    if (!(mod >= kNearZeroScale) || !(mod >= kCancellationFloor * magnitude))
        return std::nullopt;
    return LogModPoint{z, u_shift + v.log_scale + std::log(mod), grad_shift + v.dsum / v.sum};
}

/// Factored evaluation of f(z) = exp(-i z c / s) prod_i (q_i + p_i e^{i z / s}).
/// Each factor is centred, q e^{-i zeta p} + p e^{i zeta q} with zeta = z / s,
/// so no cancellation occurs between factors.
struct ProductValue {
    double u = 0.0;
    Complex grad;
    Complex log_f;
};

/// A two-term factor smaller than this fraction of |q| + |p e^{i zeta}| is
/// rounding noise: z sits on a zero of f to working precision.
inline constexpr double kFactorFloor = 64.0 * std::numeric_limits<double>::epsilon();

inline std::optional<ProductValue> product_eval(std::span<const double> ps, double c, double s, Complex z)
{
    const Complex zeta = z / s;
    const Complex i1(0.0, 1.0);
    double psum = 0.0;
    for (double p : ps)
        psum += p;
    // Leftover phase exp(-i z (c - sum p) / s).
    const Complex lead = -i1 * z * ((c - psum) / s);
    ProductValue out;
    out.log_f = lead;
    out.grad = -i1 * ((c - psum) / s);
    const double t = -zeta.imag();  // |e^{i zeta}| = e^t
    const Complex e = std::exp(i1 * zeta);
    const Complex e_inv = std::exp(-i1 * zeta);
    const Complex half = 2.0 * i1 * std::sin(0.5 * zeta);  // e^{i zeta/2} - e^{-i zeta/2}
    for (double p : ps) {
        const double q = 1.0 - p;
        Complex base;  // q + p e^{i zeta}, divided by e^{i zeta} when t > 0
        Complex ratio;
        if (t <= 0.0) {
            base = q + p * e;
            // p q (e^{i zeta} - 1) / (q + p e^{i zeta})
            ratio = p * q * half * std::exp(0.5 * i1 * zeta) / base;
            if (!(std::abs(base) > kFactorFloor * (q + p * std::abs(e))))
                return std::nullopt;
            out.log_f += -i1 * zeta * p + std::log(base);
        } else {
            base = q * e_inv + p;
            ratio = p * q * half * std::exp(-0.5 * i1 * zeta) / base;
            if (!(std::abs(base) > kFactorFloor * (q * std::abs(e_inv) + p)))
                return std::nullopt;
            out.log_f += i1 * zeta * q + std::log(base);
        }
        out.grad += (i1 / s) * ratio;
    }
    out.u = out.log_f.real();
    return out;
}

inline bool has_product_form(const LatticeDist& d)
{
    return d.form() == LatticeDist::Form::bernoulli_product && !d.trimmed();
}

inline std::optional<LogModPoint> try_eval(const CharFn& cf, Complex z)
{
    return std::visit(
        [&](const auto& alt) -> std::optional<LogModPoint> {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, NormalCf>) {
                return LogModPoint{z, 0.5 * (z.imag() * z.imag() - z.real() * z.real()), -z};
            } else if constexpr (std::is_same_v<T, SkellamHalfCf>) {
                return LogModPoint{z, std::cos(z.real()) * std::cosh(z.imag()) - 1.0, -std::sin(z)};
            } else if constexpr (std::is_same_v<T, LatticeCf>) {
                const auto off = static_cast<double>(alt.dist.offset());
                if (has_product_form(alt.dist)) {
                    const auto pv = product_eval(alt.dist.ps(), -off, 1.0, z);
                    if (!pv)
                        return std::nullopt;
                    return LogModPoint{z, pv->u, pv->grad};
                }
                // exp(i z offset) is split off so the phases use small indices.
                double mag = 0.0;
                const auto v = lattice_sum(alt.dist.log_weights(), [](std::size_t k) { return static_cast<double>(k); }, z, &mag);
                return finish(z, v, mag, -z.imag() * off, Complex(0.0, off));
            } else {
                const double mu = alt.std_.mu;
                const double sigma = alt.std_.sigma;
                if (const auto* lat = std::get_if<LatticeCf>(&alt.inner->variant())) {
                    const double center = mu - static_cast<double>(lat->dist.offset());
                    if (has_product_form(lat->dist)) {
                        const auto pv = product_eval(lat->dist.ps(), center, sigma, z);
                        if (!pv)
                            return std::nullopt;
                        return LogModPoint{z, pv->u, pv->grad};
                    }
                    // Centered support (k - (mu - offset)) / sigma, evaluated directly.
                    double mag = 0.0;
                    const auto v = lattice_sum(
                        lat->dist.log_weights(),
                        [center, sigma](std::size_t k) { return (static_cast<double>(k) - center) / sigma; }, z, &mag);
                    return finish(z, v, mag, 0.0, Complex(0.0, 0.0));
                }
                auto inner = try_eval(*alt.inner, z / sigma);
                if (!inner)
                    return std::nullopt;
                return LogModPoint{z, z.imag() * mu / sigma + inner->u, Complex(0.0, -mu / sigma) + inner->grad / sigma};
            }
        },
        cf.variant());
}

}  // namespace detail

/// u = log|f(z)| and f'/f at z. Factored (Bernoulli-product) laws are evaluated
/// as a product of centred two-term factors; raw laws as a log-domain sum.
/// Throws EvaluationNearZero when |f| is below 1e-280 of the log-domain scale,
/// or when a raw sum has cancelled below 1e-6 of f(i Im z).
[[nodiscard]] inline LogModPoint eval_log_mod(const CharFn& cf, Complex z)
{
    auto p = detail::try_eval(cf, z);
    if (!p)
        throw EvaluationNearZero("characteristic function vanishes numerically near z");
    return *p;
}

/// Non-throwing variant used by grid sweeps, which skip and count such points.
[[nodiscard]] inline std::optional<LogModPoint> try_eval_log_mod(const CharFn& cf, Complex z)
{
    return detail::try_eval(cf, z);
}

/// f(z) itself. May overflow for large |Im z|; intended for moderate arguments.
[[nodiscard]] inline Complex eval_value(const CharFn& cf, Complex z)
{
    return std::visit(
        [&](const auto& alt) -> Complex {
            using T = std::decay_t<decltype(alt)>;
            if constexpr (std::is_same_v<T, NormalCf>) {
                return std::exp(-0.5 * z * z);
            } else if constexpr (std::is_same_v<T, SkellamHalfCf>) {
                return std::exp(std::cos(z) - 1.0);
            } else if constexpr (std::is_same_v<T, LatticeCf>) {
                const auto off = static_cast<double>(alt.dist.offset());
                if (detail::has_product_form(alt.dist)) {
                    const auto pv = detail::product_eval(alt.dist.ps(), -off, 1.0, z);
                    return pv ? std::exp(pv->log_f) : Complex(0.0, 0.0);
                }
                const auto v = detail::lattice_sum(alt.dist.log_weights(), [](std::size_t k) { return static_cast<double>(k); }, z);
                return std::exp(Complex(0.0, 1.0) * z * off + v.log_scale) * v.sum;
            } else {
                const double mu = alt.std_.mu;
                const double sigma = alt.std_.sigma;
                if (const auto* lat = std::get_if<LatticeCf>(&alt.inner->variant())) {
                    const double center = mu - static_cast<double>(lat->dist.offset());
                    if (detail::has_product_form(lat->dist)) {
                        const auto pv = detail::product_eval(lat->dist.ps(), center, sigma, z);
                        return pv ? std::exp(pv->log_f) : Complex(0.0, 0.0);
                    }
                    const auto v = detail::lattice_sum(
                        lat->dist.log_weights(),
                        [center, sigma](std::size_t k) { return (static_cast<double>(k) - center) / sigma; }, z);
                    return std::exp(v.log_scale) * v.sum;
                }
                return std::exp(Complex(0.0, -1.0) * z * (mu / sigma)) * eval_value(*alt.inner, z / sigma);
            }
        },
        cf.variant());
}

struct RidgeViolation {
    Complex z;
    double u = 0.0;       // u(z)
    double u_axis = 0.0;  // u(i Im z)
};

struct RidgeCheck {
    std::vector<RidgeViolation> violations;
    std::size_t skipped = 0;  // points too close to a zero of f

    [[nodiscard]] bool holds() const noexcept { return violations.empty(); }
};

/// Points where u(x + iy) > u(iy) + tol. `eval` maps a complex z to an
/// optional LogModPoint, so test doubles outside the catalog can be checked too.
template <class Evaluator>
    requires std::is_invocable_r_v<std::optional<LogModPoint>, const Evaluator&, Complex>
[[nodiscard]] RidgeCheck check_ridge(const Evaluator& eval, const Grid& grid, double tol)
{
    RidgeCheck out;
    for (const Complex z : grid.points()) {
        const auto here = eval(z);
        const auto axis = eval(Complex(0.0, z.imag()));
        if (!here || !axis) {
            ++out.skipped;
            continue;
        }
        if (here->u > axis->u + tol)
            out.violations.push_back({z, here->u, axis->u});
    }
    return out;
}

[[nodiscard]] inline RidgeCheck check_ridge(const CharFn& cf, const Grid& grid, double tol)
{
    return check_ridge([&cf](Complex z) { return try_eval_log_mod(cf, z); }, grid, tol);
}

struct Normalization {
    double u0 = 0.0;
    double ux0 = 0.0;
    double uy0 = 0.0;
    double uyy0 = 0.0;

    [[nodiscard]] bool within(double tol) const noexcept
    {
        return std::abs(u0) <= tol && std::abs(ux0) <= tol && std::abs(uy0) <= tol && std::abs(uyy0 - 1.0) <= tol;
    }
};

/// u(0), u_x(0), u_y(0) from the analytic gradient; u_yy(0) by a central
/// second difference of y -> u(iy) with step 1e-4.
[[nodiscard]] inline Normalization normalization_check(const CharFn& cf)
{
    constexpr double h = 1e-4;
    const auto at0 = eval_log_mod(cf, Complex(0.0, 0.0));
    const double up = eval_log_mod(cf, Complex(0.0, h)).u;
    const double down = eval_log_mod(cf, Complex(0.0, -h)).u;
    return {at0.u, at0.grad.real(), -at0.grad.imag(), (up - 2.0 * at0.u + down) / (h * h)};
}

}  // namespace ridgelab
