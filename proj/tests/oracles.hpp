#pragma once

// Reference values computed independently of the library: naive enumeration,
// closed forms, and constants frozen from a 40-digit mpmath evaluation.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracle {

// 40-digit mpmath values, rounded to double.
inline constexpr double kBernoulliK = 0.3413447460685429485852;
inline constexpr double kBinomial16K = 0.0981903076171875;
inline constexpr double kBinomial64K = 0.04967337687398344826415;
inline constexpr double kBinomial256K = 0.02490955496807007561914;
inline constexpr double kBinomial4K = 0.1875;
inline constexpr double kBernoulliUAtIPi = -0.6508409265647426701253;
inline constexpr double kSkellamUAt3i = 9.067661995777765841954;
inline constexpr double kSkellamResidualAt3i = 4.567661995777765841954;
inline constexpr double kBernoulliBeIntegrandAt1 = 0.06622835384449370620286;
inline constexpr double kUniform3Delta = 1.710066440215818794059;
inline constexpr double kBinomial64ResidualAt01 = -1.302137589379092800285e-7;

/// Binomial pmf by the multiplicative recurrence, no log-gamma.
inline std::vector<double> binomial_pmf(int n, double p)
{
    std::vector<double> w(static_cast<std::size_t>(n) + 1);
    w[0] = std::pow(1.0 - p, n);
    for (int k = 0; k < n; ++k)
        w[k + 1] = w[k] * (n - k) / (k + 1) * p / (1.0 - p);
    return w;
}

/// Product of (1 - p_i + p_i w) expanded by repeated convolution.
inline std::vector<double> convolve_bernoulli(const std::vector<double>& ps)
{
    std::vector<double> w{1.0};
    for (double p : ps) {
        std::vector<double> next(w.size() + 1, 0.0);
        for (std::size_t k = 0; k < w.size(); ++k) {
            next[k] += w[k] * (1.0 - p);
            next[k + 1] += w[k] * p;
        }
        w = next;
    }
    return w;
}

inline double phi(double t) { return 0.5 * std::erfc(-t / std::numbers::sqrt2); }

/// Kolmogorov distance to the normal by plain summation over every atom.
inline double kolmogorov(const std::vector<double>& w)
{
    double mu = 0.0, var = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        mu += k * w[k];
    for (std::size_t k = 0; k < w.size(); ++k)
        var += (k - mu) * (k - mu) * w[k];
    const double s = std::sqrt(var);
    double best = 0.0, c = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        const double t = (k - mu) / s;
        const double left = c;
        c += w[k];
        best = std::max({best, std::abs(c - phi(t)), std::abs(left - phi(t))});
    }
    return best;
}

/// f(z) = sum_k w_k e^{izk} evaluated term by term.
inline std::complex<double> lattice_value(const std::vector<double>& w, std::complex<double> z)
{
    std::complex<double> f = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        f += w[k] * std::exp(std::complex<double>(0.0, 1.0) * z * static_cast<double>(k));
    return f;
}

/// Standardized binomial(n, 1/2): f(z) = cos(z / sqrt(n))^n.
inline double standardized_fair_binomial_u(int n, std::complex<double> z)
{
    return n * std::log(std::abs(std::cos(z / std::sqrt(static_cast<double>(n)))));
}

/// Roots of a w^2 + b w + c by the quadratic formula.
inline std::pair<std::complex<double>, std::complex<double>> quadratic_roots(double a, double b, double c)
{
    const std::complex<double> d = std::sqrt(std::complex<double>(b * b - 4.0 * a * c));
    return {(-b + d) / (2.0 * a), (-b - d) / (2.0 * a)};
}

}  // namespace oracle
