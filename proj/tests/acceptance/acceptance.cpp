// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "../generators.hpp"
#include "ridgelab/ridgelab.hpp"

using namespace ridgelab;

namespace {

constexpr double pi = std::numbers::pi;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0)
{
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what)
    {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

// Criterion 1: the normal law is an exact fixed point.
Outcome exactness_anchor()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto t1 = theorem1_verify(CharFn::normal(), 10.0, 200);
    const auto be = be_bound(CharFn::normal(), 10.0, kDefaultCbe);
    const double elapsed = seconds_since(t0);
    o.require(t1.sup_ratio <= 1e-10, fmt::format("sup_ratio {:.3g}", t1.sup_ratio));
    o.require(be.integral <= 1e-10, fmt::format("integral {:.3g}", be.integral));
    o.require(elapsed < 5.0, fmt::format("runtime {:.2f}s", elapsed));
    if (o.pass)
        o.detail = fmt::format("sup_ratio={:.3g} integral={:.3g} in {:.2f}s", t1.sup_ratio, be.integral, elapsed);
    return o;
}

// Criterion 2: delta = pi for fair binomials, factored and raw.
Outcome zero_free_strip()
{
    Outcome o;
    double worst_fact = 0.0, worst_raw = 0.0, worst_Delta = 0.0;
    for (int n : {4, 16, 64, 256}) {
        const auto d = LatticeDist::binomial(n, 0.5);
        const auto r = strip_report(d);
        const double sigma = std::sqrt(n) / 2.0;
        worst_fact = std::max(worst_fact, std::abs(r.delta - pi));
        worst_Delta = std::max({worst_Delta, std::abs(r.sigma - sigma), std::abs(r.Delta - pi * r.sigma)});
        if (n <= 64)
            worst_raw = std::max(worst_raw, std::abs(zero_free_delta(pgf_roots(d.as_raw())) - pi));
    }
    o.require(worst_fact <= 1e-8, fmt::format("factored delta error {:.3g}", worst_fact));
    o.require(worst_raw <= 1e-7, fmt::format("raw delta error {:.3g}", worst_raw));
    o.require(worst_Delta <= 1e-8, fmt::format("sigma/Delta error {:.3g}", worst_Delta));
    if (o.pass)
        o.detail = fmt::format("max |delta-pi| factored={:.2g} raw={:.2g}", worst_fact, worst_raw);
    return o;
}

// Criterion 3: Kolmogorov distances by atom enumeration.
Outcome kolmogorov_distances()
{
    Outcome o;
    const auto b = LatticeDist::binomial(1, 0.5);
    const double kb = kolmogorov_to_normal(b, moments(b)).distance;
    o.require(std::abs(kb - 0.341345) <= 1e-5, fmt::format("K(Bernoulli)={:.8f}", kb));
    std::string scaled;
    for (int n : {16, 64, 256}) {
        const auto d = LatticeDist::binomial(n, 0.5);
        const double ks = kolmogorov_to_normal(d, moments(d)).distance * std::sqrt(n);
        o.require(ks >= 0.35 && ks <= 0.45, fmt::format("K*sqrt(n)={:.5f} at n={}", ks, n));
        scaled += fmt::format(" {}:{:.5f}", n, ks);
    }
    if (o.pass)
        o.detail = fmt::format("K(Bernoulli)={:.6f} K*sqrt(n):{}", kb, scaled);
    return o;
}

// Criterion 4: smoothing inequality with zero slack.
Outcome smoothing_inequality()
{
    Outcome o;
    std::vector<std::pair<std::string, LatticeDist>> laws;
    for (int n : {4, 16, 64, 256})
        laws.emplace_back(fmt::format("binomial{}", n), LatticeDist::binomial(n, 0.5));
    gen::Source src(20240601);
    for (int i = 0; i < 20; ++i)
        laws.emplace_back(fmt::format("pb{}", i), src.poisson_binomial(64, 0.2, 0.8));
    double min_slack = INFINITY;
    for (const auto& [name, d] : laws) {
        const double K = kolmogorov_to_normal(d, moments(d)).distance;
        const auto cf = CharFn::standardized(d);
        for (double T : {1.0, 2.0, 5.0, 10.0}) {
            const double rhs = be_bound(cf, T, kDefaultCbe).rhs;
            o.require(K <= rhs, fmt::format("{} T={} K={:.6g} rhs={:.6g}", name, T, K, rhs));
            min_slack = std::min(min_slack, rhs - K);
        }
    }
    if (o.pass)
        o.detail = fmt::format("{} laws x 4 T values, min rhs-K={:.4g}", laws.size(), min_slack);
    return o;
}

// Criteria 5 and 6 share the binomial sweep.
struct SweepRow {
    int n;
    Theorem1Report t1;
    BEReport be;
};

std::vector<SweepRow> binomial_sweep()
{
    std::vector<SweepRow> rows;
    for (int n : {16, 64, 256}) {
        const auto d = LatticeDist::binomial(n, 0.5);
        const auto t1 = theorem1_verify(CharFn::standardized(d), strip_report(d).Delta, kDefaultGridSteps);
        rows.push_back({n, t1, theorem2_chain(d, std::max(t1.sup_ratio, 1.0), kDefaultCbe)});
    }
    return rows;
}

Outcome c1_trend(const std::vector<SweepRow>& rows)
{
    Outcome o;
    std::string values;
    for (const auto& r : rows) {
        o.require(r.be.c1_hat <= 2.0, fmt::format("c1_hat={:.4f} at n={}", r.be.c1_hat, r.n));
        values += fmt::format(" {}:{:.5f}", r.n, r.be.c1_hat);
    }
    o.require(rows[2].be.c1_hat <= 1.1 * rows[1].be.c1_hat, "c1_hat grew by more than 10% from n=64 to n=256");
    if (o.pass)
        o.detail = "c1_hat" + values;
    return o;
}

Outcome sup_ratio_trend(const std::vector<SweepRow>& rows)
{
    Outcome o;
    std::string values;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        const double s = rows[k].t1.sup_ratio;
        o.require(std::isfinite(s) && s <= 10.0, fmt::format("sup_ratio={:.4g} at n={}", s, rows[k].n));
        if (k > 0) {
            const double prev = rows[k - 1].t1.sup_ratio;
            o.require(s < 3.0 * prev && prev < 3.0 * s, fmt::format("jump between n={} and n={}", rows[k - 1].n, rows[k].n));
        }
        values += fmt::format(" {}:{:.5f}", rows[k].n, s);
    }
    if (o.pass)
        o.detail = "sup_ratio" + values;
    return o;
}

// Criterion 7: monotone decrease along horizontal lines.
Outcome lemma1()
{
    Outcome o;
    double worst = -INFINITY;
    auto check = [&](const std::string& name, const CharFn& cf, double Delta) {
        const auto ys = default_lemma1_heights(Delta);
        const auto r = lemma1_check(cf, Delta, ys, kDefaultGridSteps);
        o.require(r.max_ux <= 1e-8, fmt::format("{} margin {:.3g}", name, r.max_ux));
        o.require(r.skipped == 0, fmt::format("{} skipped {}", name, r.skipped));
        worst = std::max(worst, r.max_ux);
    };
    check("normal", CharFn::normal(), 10.0);
    check("skellam_half", CharFn::skellam_half(), 3.0);
    gen::Source src(7001);
    for (int i = 0; i < 20; ++i) {
        const auto d = i % 2 ? src.raw(10) : src.poisson_binomial(64);
        check(fmt::format("random{}", i), CharFn::standardized(d), strip_report(d).Delta);
    }
    if (o.pass)
        o.detail = fmt::format("22 laws, max u_x={:.3g}", worst == 0.0 ? 0.0 : worst);
    return o;
}

// Criterion 8: ridge inequality on [-5, 5]^2.
Outcome ridge()
{
    Outcome o;
    const auto grid = Grid::rectangle(Complex(0.0, 0.0), 5.0, 5.0, 50, 50);
    std::size_t skipped = 0;
    auto check = [&](const std::string& name, const CharFn& cf) {
        const auto r = check_ridge(cf, grid, 1e-10);
        o.require(r.holds(), fmt::format("{} has {} violations", name, r.violations.size()));
        skipped += r.skipped;
    };
    check("normal", CharFn::normal());
    check("skellam_half", CharFn::skellam_half());
    gen::Source src(8001);
    for (int i = 0; i < 50; ++i)
        check(fmt::format("random{}", i), CharFn::lattice(i % 2 ? src.raw(16) : src.poisson_binomial(64)));
    if (o.pass)
        o.detail = fmt::format("52 laws x 2500 points, 0 violations, {} near-zero points skipped", skipped);
    return o;
}

// Criterion 9: the critical-growth example violates the cubic estimate.
Outcome sharpness()
{
    Outcome o;
    const double r = residual(CharFn::skellam_half(), Complex(0.0, 3.0));
    const double expect = std::cosh(3.0) - 1.0 - 4.5;
    o.require(std::abs(r - expect) <= 1e-9, fmt::format("residual {:.12f}", r));
    o.require(std::abs(r - 4.567662) <= 1e-6, fmt::format("residual {:.12f}", r));
    if (o.pass)
        o.detail = fmt::format("residual(3i)={:.9f}", r);
    return o;
}

// Criterion 10: discrete kernel derivative on the square.
Outcome kernel_constant()
{
    Outcome o;
    const auto t0 = Clock::now();
    const auto coarse = c2_estimate(1.0 / 64.0, 16);
    const auto fine = c2_estimate(1.0 / 128.0, 16);
    o.require(coarse.c2_hat > 0.0, fmt::format("c2_hat={:.4g}", coarse.c2_hat));
    const double rel = std::abs(coarse.c2_hat - fine.c2_hat) / fine.c2_hat;
    o.require(rel < 0.05, fmt::format("refinement change {:.3g}", rel));

    std::vector<Arc> partition = kernel_arcs(16);
    for (int k = 0; k < 16; ++k)
        partition.push_back({Side::left, -1.0 + k / 8.0, -1.0 + (k + 1) / 8.0});
    std::vector<GridFunction> parts;
    for (const Arc& a : partition)
        parts.push_back(harmonic_measure(a, 1.0 / 64.0));
    gen::Source src(10001);
    double worst = 0.0;
    for (int probe = 0; probe < 5; ++probe) {
        const int i = src.integer(1, 127);
        const int j = src.integer(1, 127);
        double total = 0.0;
        for (const auto& p : parts)
            total += p.at(i, j);
        worst = std::max(worst, std::abs(total - 1.0));
    }
    o.require(worst <= 1e-3, fmt::format("partition sum error {:.3g}", worst));
    const double elapsed = seconds_since(t0);
    o.require(elapsed < 60.0, fmt::format("runtime {:.1f}s", elapsed));
    if (o.pass)
        o.detail = fmt::format("c2_hat(1/64)={:.6f} c2_hat(1/128)={:.6f} partition error {:.2g}, {:.1f}s", coarse.c2_hat,
                               fine.c2_hat, worst, elapsed);
    return o;
}

Outcome guarded(const std::function<Outcome()>& f)
{
    try {
        return f();
    } catch (const std::exception& e) {
        return {false, std::string("exception: ") + e.what()};
    }
}

}  // namespace

int main()
{
    const auto t0 = Clock::now();
    int failures = 0;
    auto report = [&](int id, const char* title, const Outcome& o) {
        std::printf("[%s] %2d %-28s %s\n", o.pass ? "PASS" : "FAIL", id, title, o.detail.c_str());
        std::fflush(stdout);
        failures += o.pass ? 0 : 1;
    };

    report(1, "exactness anchor", guarded(exactness_anchor));
    report(2, "zero-free strip", guarded(zero_free_strip));
    report(3, "kolmogorov distances", guarded(kolmogorov_distances));
    report(4, "smoothing inequality", guarded(smoothing_inequality));
    std::vector<SweepRow> rows;
    Outcome sweep_error;
    try {
        rows = binomial_sweep();
    } catch (const std::exception& e) {
        sweep_error = {false, std::string("exception: ") + e.what()};
    }
    report(5, "c1 stability trend", rows.empty() ? sweep_error : guarded([&] { return c1_trend(rows); }));
    report(6, "c0 stability trend", rows.empty() ? sweep_error : guarded([&] { return sup_ratio_trend(rows); }));
    report(7, "monotone decrease", guarded(lemma1));
    report(8, "ridge property", guarded(ridge));
    report(9, "sharpness example", guarded(sharpness));
    report(10, "kernel constant", guarded(kernel_constant));

    const double total = seconds_since(t0);
    Outcome runtime;
    runtime.require(total < 600.0, fmt::format("total {:.1f}s", total));
    if (runtime.pass)
        runtime.detail = fmt::format("total {:.1f}s single-threaded", total);
    report(11, "suite runtime", runtime);

    std::printf("%d of 11 criteria passed\n", 11 - failures);
    return failures == 0 ? 0 : 1;
}
