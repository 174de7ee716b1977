#pragma once

// Lattice random variables: validated weights, moments, the exact step CDF
// and the Kolmogorov distance of the standardized variable to N(0, 1).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace ridgelab {

namespace detail {

/// Neumaier's variant of compensated summation.
class CompensatedSum {
public:
    void add(double x) noexcept
    {
        const double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    [[nodiscard]] double value() const noexcept { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

}  // namespace detail

inline constexpr double kWeightSumTolerance = 1e-12;
inline constexpr double kTrimThreshold = 1e-300;
inline constexpr double kDegenerateSigma = 1e-14;

/// Integer-supported probability mass function. Weight j is P(X = offset + j).
/// Immutable once built; every factory validates and trims the support.
class LatticeDist {
public:
    enum class Form { raw, bernoulli_product };

    static LatticeDist from_weights(std::int64_t offset, std::vector<double> weights)
    {
        LatticeDist d;
        d.offset_ = offset;
        d.weights_ = std::move(weights);
        d.form_ = Form::raw;
        d.validate_and_trim();
        return d;
    }

    /// Sum of independent Bernoulli(p_i); weights come from expanding prod (1 - p_i + p_i w).
    static LatticeDist from_bernoulli(std::vector<double> ps)
    {
        if (ps.empty())
            throw InvalidDistribution("bernoulli_ps must not be empty");
        for (double p : ps) {
            if (!std::isfinite(p) || p <= 0.0 || p >= 1.0)
                throw InvalidDistribution("every Bernoulli success probability must lie in (0, 1)");
        }
        LatticeDist d;
        d.offset_ = 0;
        d.weights_ = expand_bernoulli(ps);
        d.form_ = Form::bernoulli_product;
        d.ps_ = std::move(ps);
        d.validate_and_trim();
        return d;
    }

    static LatticeDist binomial(int n, double p)
    {
        if (n < 1)
            throw InvalidDistribution("binomial needs n >= 1");
        return from_bernoulli(std::vector<double>(static_cast<std::size_t>(n), p));
    }

    /// Uniform on {0, ..., k - 1}.
    static LatticeDist uniform(int k)
    {
        if (k < 1)
            throw InvalidDistribution("uniform needs k >= 1");
        return from_weights(0, std::vector<double>(static_cast<std::size_t>(k), 1.0 / k));
    }

    [[nodiscard]] std::int64_t offset() const noexcept { return offset_; }
    [[nodiscard]] std::span<const double> weights() const noexcept { return weights_; }
    /// log of each weight, cached for log-domain evaluation.
    [[nodiscard]] std::span<const double> log_weights() const noexcept { return log_weights_; }
    [[nodiscard]] Form form() const noexcept { return form_; }
    [[nodiscard]] std::span<const double> ps() const noexcept { return ps_; }
    [[nodiscard]] std::size_t size() const noexcept { return weights_.size(); }
    /// Probability dropped by trimming tiny leading/trailing weights.
    [[nodiscard]] double mass_defect() const noexcept { return mass_defect_; }
    [[nodiscard]] bool trimmed() const noexcept { return trimmed_; }

    /// Same weights, support translated by `by`.
    [[nodiscard]] LatticeDist shifted(std::int64_t by) const
    {
        LatticeDist d = *this;
        d.offset_ += by;
        return d;
    }

    /// The same law forgetting its factored form.
    [[nodiscard]] LatticeDist as_raw() const
    {
        LatticeDist d = *this;
        d.form_ = Form::raw;
        d.ps_.clear();
        return d;
    }

    static std::vector<double> expand_bernoulli(std::span<const double> ps)
    {
        std::vector<double> w{1.0};
        w.reserve(ps.size() + 1);
        for (double p : ps) {
            const double q = 1.0 - p;
            w.push_back(0.0);
            for (std::size_t j = w.size() - 1; j > 0; --j)
                w[j] = w[j] * q + w[j - 1] * p;
            w[0] *= q;
        }
        return w;
    }

private:
    LatticeDist() = default;

    void validate_and_trim()
    {
        if (weights_.empty())
            throw InvalidDistribution("weights must not be empty");
        detail::CompensatedSum total;
        for (double w : weights_) {
            if (!std::isfinite(w) || w < 0.0)
                throw InvalidDistribution("weights must be finite and nonnegative");
            total.add(w);
        }
        if (std::abs(total.value() - 1.0) > kWeightSumTolerance)
            throw InvalidDistribution("weights sum to " + std::to_string(total.value()) + ", expected 1");

        std::size_t first = 0;
        std::size_t last = weights_.size();
        detail::CompensatedSum defect;
        while (first < last && weights_[first] < kTrimThreshold)
            defect.add(weights_[first++]);
        while (last > first && weights_[last - 1] < kTrimThreshold)
            defect.add(weights_[--last]);
        if (first == last)
            throw InvalidDistribution("no weight above the trimming threshold");
        mass_defect_ = defect.value();
        if (mass_defect_ > kWeightSumTolerance)
            throw InvalidDistribution("trimmed mass exceeds tolerance");
        trimmed_ = first != 0 || last != weights_.size();
        if (trimmed_) {
            offset_ += static_cast<std::int64_t>(first);
            weights_ = std::vector<double>(weights_.begin() + static_cast<std::ptrdiff_t>(first),
                                           weights_.begin() + static_cast<std::ptrdiff_t>(last));
        }
        log_weights_.resize(weights_.size());
        std::transform(weights_.begin(), weights_.end(), log_weights_.begin(), [](double w) { return std::log(w); });
    }

    std::int64_t offset_ = 0;
    std::vector<double> weights_;
    std::vector<double> log_weights_;
    Form form_ = Form::raw;
    std::vector<double> ps_;
    double mass_defect_ = 0.0;
    bool trimmed_ = false;
};

/// Mean and standard deviation; X* = (X - mu) / sigma.
struct Standardization {
    double mu = 0.0;
    double sigma = 1.0;
};

[[nodiscard]] inline Standardization moments(const LatticeDist& dist)
{
    const auto w = dist.weights();
    // Work in the index frame j = x - offset so large offsets cost no precision.
    detail::CompensatedSum m1;
    for (std::size_t j = 0; j < w.size(); ++j)
        m1.add(static_cast<double>(j) * w[j]);
    const double center = m1.value();
    detail::CompensatedSum m2;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double d = static_cast<double>(j) - center;
        m2.add(d * d * w[j]);
    }
    const double sigma = std::sqrt(std::max(m2.value(), 0.0));
    if (sigma < kDegenerateSigma)
        throw DegenerateDistribution("zero variance: single-atom distribution");
    return {static_cast<double>(dist.offset()) + center, sigma};
}

struct CdfValue {
    double value = 0.0;       // P(X <= t)
    double left_limit = 0.0;  // P(X < t)
};

[[nodiscard]] inline CdfValue cdf(const LatticeDist& dist, double t)
{
    const auto w = dist.weights();
    const double rel = t - static_cast<double>(dist.offset());
    if (rel < 0.0)
        return {0.0, 0.0};
    const double top = std::floor(rel);
    const std::size_t last = top >= static_cast<double>(w.size() - 1)
                                 ? w.size() - 1
                                 : static_cast<std::size_t>(top);
    detail::CompensatedSum below;
    for (std::size_t j = 0; j < last; ++j)
        below.add(w[j]);
    const double left = below.value();
    below.add(w[last]);
    const double value = std::min(below.value(), 1.0);
    const bool on_atom = top == rel && top <= static_cast<double>(w.size() - 1);
    return {value, on_atom ? std::min(left, 1.0) : value};
}

/// Standard normal CDF through erfc; absolute error well below 1e-15 on |t| <= 8.
[[nodiscard]] inline double normal_cdf(double t) noexcept
{
    if (t > 8.0)
        return 1.0;  // 1 - Phi(8) < 7e-16
    return 0.5 * std::erfc(-t / std::numbers::sqrt2);
}

struct KolmogorovReport {
    enum class Side { left_limit, right_value };
    double distance = 0.0;
    double argmax_point = 0.0;  // standardized location
    Side side = Side::right_value;
};

/// sup_t |F_{X*}(t) - Phi(t)|. The supremum of a step function against a
/// continuous increasing one is attained at an atom, from one side or the other.
[[nodiscard]] inline KolmogorovReport kolmogorov_to_normal(const LatticeDist& dist, const Standardization& std_)
{
    if (!(std_.sigma >= kDegenerateSigma))
        throw DegenerateDistribution("sigma must be positive");
    const auto w = dist.weights();
    // Prefer the index-frame mean: mu - offset loses digits for large offsets
    // and would break exact shift invariance.
    detail::CompensatedSum m1;
    for (std::size_t j = 0; j < w.size(); ++j)
        m1.add(static_cast<double>(j) * w[j]);
    double center = std_.mu - static_cast<double>(dist.offset());
    if (std::abs(m1.value() - center) <= 1e-9 * (1.0 + std::abs(std_.mu)))
        center = m1.value();
    KolmogorovReport best;
    detail::CompensatedSum running;
    for (std::size_t j = 0; j < w.size(); ++j) {
        const double t = (static_cast<double>(j) - center) / std_.sigma;
        const double phi = normal_cdf(t);
        const double left = std::min(running.value(), 1.0);
        running.add(w[j]);
        const double right = std::min(running.value(), 1.0);
        const double dl = std::abs(left - phi);
        const double dr = std::abs(right - phi);
        if (dl > best.distance)
            best = {dl, t, KolmogorovReport::Side::left_limit};
        if (dr > best.distance)
            best = {dr, t, KolmogorovReport::Side::right_value};
    }
    return best;
}

}  // namespace ridgelab
