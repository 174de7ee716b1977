#pragma once

// Command-line orchestration. Exit codes: 0 success, 1 a checked invariant
// failed, 2 bad input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <future>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "ridgelab/dist_io.hpp"
#include "ridgelab/ridgelab.hpp"
#include "svg.hpp"

namespace ridgelab::cli {

enum class ExitCode : int { ok = 0, violation = 1, input_error = 2 };

enum class Subcommand { analyze, sweep, verify_thm1, verify_lemma1, berry_esseen, estimate_c2 };

struct RunConfig {
    Subcommand subcommand = Subcommand::analyze;
    std::optional<std::string> input;
    std::optional<std::string> family;
    std::optional<std::string> catalog;
    std::optional<double> c0_eff;
    double cbe = kDefaultCbe;
    std::optional<double> delta_cap;
    int grid_steps = kDefaultGridSteps;
    double mesh = 1.0 / 64.0;
    int arcs = 16;
    std::string out_dir = ".";
    bool emit_svg = false;
    unsigned jobs = 1;
    std::optional<std::uint64_t> seed;
};

/// Input problems detected by the CLI itself (bad family spec, missing flag).
class InputError : public Error {
public:
    using Error::Error;
};

struct Subject {
    std::string name;
    int n = 0;  // family size parameter (binomial n, uniform k), 0 when not applicable
    std::optional<LatticeDist> dist;
    CharFn cf;
};

/// Fixed 12-significant-digit rendering shared by every report.
inline std::string num(double v)
{
    if (std::isnan(v))
        return "nan";
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    return fmt::format("{:.12g}", v == 0.0 ? 0.0 : v);
}

namespace detail {

inline std::vector<std::string> split(const std::string& s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

inline double parse_double(const std::string& s, const std::string& what)
{
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw InputError("bad number for " + what + ": " + s);
        return v;
    } catch (const std::logic_error&) {
        throw InputError("bad number for " + what + ": " + s);
    }
}

inline int parse_int(const std::string& s, const std::string& what)
{
    const double v = parse_double(s, what);
    if (v != std::floor(v) || v < 1 || v > 1e7)
        throw InputError("expected a positive integer for " + what + ": " + s);
    return static_cast<int>(v);
}

}  // namespace detail

/// Family specs:
///   binomial:n=16,64,256;p=0.5
///   poisson_binomial:n=8,16;count=5;lo=0.2;hi=0.8   (needs a seed)
///   uniform:k=2,3,5
[[nodiscard]] inline std::vector<Subject> expand_family(const std::string& spec, std::optional<std::uint64_t> seed)
{
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    std::map<std::string, std::string> params;
    if (colon != std::string::npos) {
        for (const auto& kv : detail::split(spec.substr(colon + 1), ';')) {
            if (kv.empty())
                continue;
            const auto eq = kv.find('=');
            if (eq == std::string::npos)
                throw InputError("family parameter without '=': " + kv);
            params[kv.substr(0, eq)] = kv.substr(eq + 1);
        }
    }
    auto list = [&](const std::string& key) {
        if (!params.count(key))
            throw InputError("family " + kind + " needs " + key + "=...");
        std::vector<int> out;
        for (const auto& item : detail::split(params.at(key), ','))
            out.push_back(detail::parse_int(item, key));
        return out;
    };
    auto real = [&](const std::string& key, double fallback) {
        return params.count(key) ? detail::parse_double(params.at(key), key) : fallback;
    };

    std::vector<Subject> out;
    if (kind == "binomial") {
        const double p = real("p", 0.5);
        for (int n : list("n")) {
            auto d = LatticeDist::binomial(n, p);
            out.push_back({fmt::format("binomial_n{}_p{}", n, p), n, d, CharFn::standardized(d)});
        }
    } else if (kind == "poisson_binomial") {
        if (!seed)
            throw InputError("poisson_binomial families need --seed");
        const int count = params.count("count") ? detail::parse_int(params.at("count"), "count") : 1;
        const double lo = real("lo", 0.2);
        const double hi = real("hi", 0.8);
        if (!(lo > 0.0 && hi < 1.0 && lo < hi))
            throw InputError("poisson_binomial needs 0 < lo < hi < 1");
        for (int n : list("n")) {
            for (int i = 0; i < count; ++i) {
                std::seed_seq seq{static_cast<std::uint32_t>(*seed), static_cast<std::uint32_t>(*seed >> 32),
                                  static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(i)};
                std::mt19937_64 rng(seq);
                std::uniform_real_distribution<double> unif(lo, hi);
                std::vector<double> ps(static_cast<std::size_t>(n));
                for (auto& p : ps)
                    p = unif(rng);
                auto d = LatticeDist::from_bernoulli(ps);
                out.push_back({fmt::format("poisson_binomial_n{}_s{}_i{}", n, *seed, i), n, d, CharFn::standardized(d)});
            }
        }
    } else if (kind == "uniform") {
        for (int k : list("k")) {
            auto d = LatticeDist::uniform(k);
            out.push_back({fmt::format("uniform_k{}", k), k, d, CharFn::standardized(d)});
        }
    } else {
        throw InputError("unknown family: " + kind);
    }
    return out;
}

[[nodiscard]] inline std::vector<Subject> resolve_subjects(const RunConfig& cfg)
{
    const int sources = int(cfg.input.has_value()) + int(cfg.family.has_value()) + int(cfg.catalog.has_value());
    if (sources != 1)
        throw InputError("give exactly one of --input, --family, --catalog");
    if (cfg.input) {
        auto d = load_distribution(*cfg.input);
        const std::string name = std::filesystem::path(*cfg.input).stem().string();
        return {{name, static_cast<int>(d.size()) - 1, d, CharFn::standardized(d)}};
    }
    if (cfg.family)
        return expand_family(*cfg.family, cfg.seed);
    auto cf = CharFn::catalog(*cfg.catalog);
    if (!cf)
        throw InputError("unknown catalog entry: " + *cfg.catalog + " (expected normal or skellam_half)");
    return {{*cfg.catalog, 0, std::nullopt, *cf}};
}

/// Runs `work` over the subjects with at most `jobs` in flight; results keep subject order.
template <class Result, class Work>
std::vector<Result> map_ordered(const std::vector<Subject>& subjects, unsigned jobs, Work work)
{
    std::vector<Result> out;
    out.reserve(subjects.size());
    jobs = std::max(1u, jobs);
    for (std::size_t start = 0; start < subjects.size(); start += jobs) {
        const std::size_t stop = std::min(subjects.size(), start + jobs);
        std::vector<std::future<Result>> pending;
        for (std::size_t k = start; k < stop; ++k)
            pending.push_back(std::async(jobs > 1 ? std::launch::async : std::launch::deferred, work,
                                         std::cref(subjects[k])));
        for (auto& f : pending)
            out.push_back(f.get());
    }
    return out;
}

class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header) : out_(path)
    {
        if (!out_)
            throw InputError("cannot write " + path.string());
        row(header);
    }
    void row(const std::vector<std::string>& cells)
    {
        for (std::size_t k = 0; k < cells.size(); ++k)
            out_ << (k ? "," : "") << cells[k];
        out_ << '\n';
    }

private:
    std::ofstream out_;
};

inline constexpr double kLemma1Tolerance = 1e-8;
inline constexpr double kNormalizationTolerance = 1e-6;
inline constexpr double kRidgeTolerance = 1e-10;

/// Strip half-width Delta of a subject, capped by --delta-cap when given.
/// Zero-free catalog entries must be capped explicitly.
inline double strip_delta(const Subject& s, const RunConfig& cfg)
{
    double Delta = std::numeric_limits<double>::infinity();
    if (s.dist)
        Delta = strip_report(*s.dist).Delta;
    if (cfg.delta_cap)
        Delta = std::min(Delta, *cfg.delta_cap);
    if (!std::isfinite(Delta))
        throw InputError(s.name + " is zero-free: pass --delta-cap");
    return Delta;
}

const std::vector<std::string> kThm1Columns = {"name", "Delta", "sup_ratio", "cubic_decay_ratio", "lemma1_margin",
                                               "grid_steps"};
const std::vector<std::string> kBeColumns = {"name", "n", "delta", "sigma", "Delta", "T", "a", "integral_total",
                                             "rhs_bound", "K", "c1_hat", "satisfied"};

inline std::vector<std::string> thm1_row(const std::string& name, const Theorem1Report& r)
{
    return {name, num(r.Delta_used), num(r.sup_ratio), num(r.cubic_decay_ratio), num(r.lemma1_margin),
            std::to_string(r.grid_steps)};
}

inline std::vector<std::string> be_row(const Subject& s, const BEReport& r)
{
    return {s.name, std::to_string(s.n), num(r.strip.delta), num(r.strip.sigma), num(r.strip.Delta), num(r.T),
            num(r.a), num(r.integral_total), num(r.rhs_bound), num(r.K), num(r.c1_hat), r.satisfied ? "true" : "false"};
}

inline double effective_c0(const RunConfig& cfg, const Theorem1Report& t)
{
    return cfg.c0_eff ? *cfg.c0_eff : std::max(t.sup_ratio, 1.0);
}

inline ExitCode run_verify_thm1(const RunConfig& cfg, const std::vector<Subject>& subjects, std::ostream& err)
{
    const std::filesystem::path dir(cfg.out_dir);
    const auto reports = map_ordered<Theorem1Report>(subjects, cfg.jobs, [&](const Subject& s) {
        return theorem1_verify(s.cf, strip_delta(s, cfg), cfg.grid_steps);
    });
    CsvWriter csv(dir / "thm1.csv", kThm1Columns);
    ExitCode code = ExitCode::ok;
    std::vector<Series> profiles;
    for (std::size_t k = 0; k < subjects.size(); ++k) {
        csv.row(thm1_row(subjects[k].name, reports[k]));
        const auto norm = normalization_check(subjects[k].cf);
        if (!norm.within(kNormalizationTolerance)) {
            err << subjects[k].name << ": normalization u(0)=u_x(0)=u_y(0)=0, u_yy(0)=1 failed\n";
            code = ExitCode::violation;
        }
        if (reports[k].lemma1_margin > kLemma1Tolerance) {
            err << subjects[k].name << ": lemma1 margin " << num(reports[k].lemma1_margin) << " > 1e-8\n";
            code = ExitCode::violation;
        }
        profiles.push_back({subjects[k].name, reports[k].ratio_profile});
    }
    if (cfg.emit_svg)
        write_line_plot((dir / "thm1_ratio.svg").string(), "residual ratio |u + Re z^2/2| Delta / |z|^3",
                        "|z|", "max ratio on circle", profiles);
    return code;
}

inline ExitCode run_verify_lemma1(const RunConfig& cfg, const std::vector<Subject>& subjects, std::ostream& err)
{
    const std::filesystem::path dir(cfg.out_dir);
    CsvWriter csv(dir / "lemma1.csv", {"name", "Delta", "lemma1_margin", "skipped", "x_steps"});
    ExitCode code = ExitCode::ok;
    const auto results = map_ordered<std::pair<double, Lemma1Result>>(subjects, cfg.jobs, [&](const Subject& s) {
        const double Delta = strip_delta(s, cfg);
        const auto ys = default_lemma1_heights(Delta);
        return std::pair{Delta, lemma1_check(s.cf, Delta, ys, cfg.grid_steps)};
    });
    for (std::size_t k = 0; k < subjects.size(); ++k) {
        const auto& [Delta, r] = results[k];
        csv.row({subjects[k].name, num(Delta), num(r.max_ux), std::to_string(r.skipped), std::to_string(cfg.grid_steps)});
        if (r.max_ux > kLemma1Tolerance || r.skipped > 0) {
            err << subjects[k].name << ": lemma1 margin " << num(r.max_ux) << ", skipped " << r.skipped << "\n";
            code = ExitCode::violation;
        }
    }
    return code;
}

inline ExitCode run_berry_esseen(const RunConfig& cfg, const std::vector<Subject>& subjects, std::ostream& err)
{
    const std::filesystem::path dir(cfg.out_dir);
    for (const auto& s : subjects) {
        if (!s.dist)
            throw InputError("berry-esseen needs a lattice distribution, not a catalog entry");
    }
    const auto reports = map_ordered<BEReport>(subjects, cfg.jobs, [&](const Subject& s) {
        double c0 = 1.0;
        if (cfg.c0_eff)
            c0 = *cfg.c0_eff;
        else
            c0 = effective_c0(cfg, theorem1_verify(s.cf, strip_delta(s, cfg), cfg.grid_steps));
        return theorem2_chain(*s.dist, c0, cfg.cbe);
    });
    CsvWriter csv(dir / "berry_esseen.csv", kBeColumns);
    ExitCode code = ExitCode::ok;
    std::vector<Series> curves;
    for (std::size_t k = 0; k < subjects.size(); ++k) {
        csv.row(be_row(subjects[k], reports[k]));
        if (!reports[k].satisfied) {
            err << subjects[k].name << ": smoothing inequality violated\n";
            code = ExitCode::violation;
        }
        if (cfg.emit_svg) {
            Series s{subjects[k].name, {}};
            const double T = reports[k].T;
            for (int i = 0; i <= 400; ++i) {
                const double x = -T + 2.0 * T * i / 400.0;
                s.points.emplace_back(x, be_integrand(subjects[k].cf, x));
            }
            curves.push_back(std::move(s));
        }
    }
    if (cfg.emit_svg)
        write_line_plot((dir / "be_integrand.svg").string(), "|f(x) - exp(-x^2/2)| / |x|", "x", "integrand", curves);
    return code;
}

struct AnalyzeResult {
    Standardization moments;
    StripReport strip;
    KolmogorovReport kolmogorov;
    RidgeCheck ridge;
    Theorem1Report thm1;
    std::optional<BEReport> be;
};

inline ExitCode run_analyze(const RunConfig& cfg, const std::vector<Subject>& subjects, std::ostream& err,
                            bool sweep_layout)
{
    const std::filesystem::path dir(cfg.out_dir);
    const auto results = map_ordered<AnalyzeResult>(subjects, cfg.jobs, [&](const Subject& s) {
        AnalyzeResult r;
        if (s.dist) {
            r.moments = moments(*s.dist);
            r.strip = strip_report(*s.dist);
            r.kolmogorov = kolmogorov_to_normal(*s.dist, r.moments);
        } else {
            r.moments = {0.0, 1.0};
            r.strip.sigma = 1.0;
        }
        if (!sweep_layout)
            r.ridge = check_ridge(s.cf, Grid::rectangle({0.0, 0.0}, 5.0, 5.0, 50, 50), kRidgeTolerance);
        r.thm1 = theorem1_verify(s.cf, strip_delta(s, cfg), cfg.grid_steps);
        if (s.dist)
            r.be = theorem2_chain(*s.dist, effective_c0(cfg, r.thm1), cfg.cbe);
        return r;
    });

    ExitCode code = ExitCode::ok;
    for (std::size_t k = 0; k < subjects.size(); ++k) {
        const auto& r = results[k];
        if (!r.ridge.holds()) {
            err << subjects[k].name << ": ridge property violated at " << r.ridge.violations.size() << " points\n";
            code = ExitCode::violation;
        }
        if (r.thm1.lemma1_margin > kLemma1Tolerance) {
            err << subjects[k].name << ": lemma1 margin " << num(r.thm1.lemma1_margin) << " > 1e-8\n";
            code = ExitCode::violation;
        }
        if (r.be && !r.be->satisfied) {
            err << subjects[k].name << ": smoothing inequality violated\n";
            code = ExitCode::violation;
        }
    }

    if (sweep_layout) {
        CsvWriter thm1(dir / "sweep_thm1.csv", kThm1Columns);
        CsvWriter be(dir / "sweep_be.csv", kBeColumns);
        Series c1{"c1_hat", {}};
        for (std::size_t k = 0; k < subjects.size(); ++k) {
            thm1.row(thm1_row(subjects[k].name, results[k].thm1));
            if (results[k].be) {
                be.row(be_row(subjects[k], *results[k].be));
                c1.points.emplace_back(subjects[k].n, results[k].be->c1_hat);
            }
        }
        if (cfg.emit_svg)
            write_line_plot((dir / "sweep_c1.svg").string(), "c1_hat = K sigma delta", "n", "c1_hat", {c1});
        return code;
    }

    CsvWriter csv(dir / "analyze.csv",
                  {"name", "n", "mu", "sigma", "delta", "Delta", "K", "sup_ratio", "cubic_decay_ratio", "lemma1_margin",
                   "ridge_violations", "T", "a", "integral_total", "rhs_bound", "c1_hat", "satisfied"});
    nlohmann::ordered_json doc = nlohmann::ordered_json::array();
    for (std::size_t k = 0; k < subjects.size(); ++k) {
        const auto& s = subjects[k];
        const auto& r = results[k];
        const double nan = std::numeric_limits<double>::quiet_NaN();
        const BEReport* be = r.be ? &*r.be : nullptr;
        csv.row({s.name, std::to_string(s.n), num(r.moments.mu), num(r.moments.sigma), num(r.strip.delta),
                 num(r.strip.Delta), num(s.dist ? r.kolmogorov.distance : nan), num(r.thm1.sup_ratio),
                 num(r.thm1.cubic_decay_ratio), num(r.thm1.lemma1_margin), std::to_string(r.ridge.violations.size()),
                 num(be ? be->T : nan), num(be ? be->a : nan), num(be ? be->integral_total : nan),
                 num(be ? be->rhs_bound : nan), num(be ? be->c1_hat : nan),
                 be ? (be->satisfied ? "true" : "false") : ""});
        nlohmann::ordered_json item;
        item["name"] = s.name;
        item["mu"] = num(r.moments.mu);
        item["sigma"] = num(r.moments.sigma);
        item["delta"] = num(r.strip.delta);
        item["Delta"] = num(r.strip.Delta);
        if (s.dist) {
            item["K"] = num(r.kolmogorov.distance);
            item["K_argmax"] = num(r.kolmogorov.argmax_point);
        }
        item["theorem1"] = {{"Delta_used", num(r.thm1.Delta_used)},
                            {"sup_ratio", num(r.thm1.sup_ratio)},
                            {"max_residual", num(r.thm1.max_residual)},
                            {"cubic_decay_ratio", num(r.thm1.cubic_decay_ratio)},
                            {"lemma1_margin", num(r.thm1.lemma1_margin)},
                            {"grid_steps", r.thm1.grid_steps}};
        item["ridge_violations"] = r.ridge.violations.size();
        if (be) {
            item["berry_esseen"] = {{"c0_eff", num(be->c0_eff)}, {"cBE", num(be->cBE)},
                                    {"T", num(be->T)},           {"a", num(be->a)},
                                    {"integral_total", num(be->integral_total)},
                                    {"integral_core", num(be->integral_core)},
                                    {"integral_tail", num(be->integral_tail)},
                                    {"rhs_bound", num(be->rhs_bound)},
                                    {"c1_hat", num(be->c1_hat)},
                                    {"satisfied", be->satisfied}};
        }
        doc.push_back(std::move(item));
    }
    std::ofstream(dir / "analyze.json") << doc.dump(2) << '\n';
    if (cfg.emit_svg) {
        std::vector<Series> profiles;
        for (std::size_t k = 0; k < subjects.size(); ++k)
            profiles.push_back({subjects[k].name, results[k].thm1.ratio_profile});
        write_line_plot((dir / "analyze_ratio.svg").string(), "residual ratio", "|z|", "max ratio on circle", profiles);
    }
    return code;
}

inline ExitCode run_estimate_c2(const RunConfig& cfg, std::ostream&)
{
    const std::filesystem::path dir(cfg.out_dir);
    const auto est = c2_estimate(cfg.mesh, cfg.arcs, cfg.jobs);
    {
        CsvWriter csv(dir / "c2_arcs.csv", {"arc_id", "side", "midpoint_x", "midpoint_y", "kernel_x_estimate"});
        for (const auto& a : est.arcs) {
            const auto [mx, my] = a.arc.midpoint();
            csv.row({std::to_string(a.arc_id), side_name(a.arc.side), num(mx), num(my), num(a.value)});
        }
    }
    CsvWriter summary(dir / "c2_summary.csv", {"c2_hat", "h", "arcs_per_side", "argmin_arc"});
    summary.row({num(est.c2_hat), num(est.h), std::to_string(est.arcs_per_side), std::to_string(est.argmin)});
    if (cfg.emit_svg) {
        Series s{"kernel_x_estimate", {}};
        for (const auto& a : est.arcs)
            s.points.emplace_back(a.arc_id, a.value);
        write_line_plot((dir / "c2_arcs.svg").string(), "P_x(0, arc) estimates", "arc id", "estimate", {s});
    }
    return est.c2_hat > 0.0 ? ExitCode::ok : ExitCode::violation;
}

/// Runs one subcommand; every failure is turned into an exit code plus a
/// one-line diagnostic on `err`.
[[nodiscard]] inline int run(const RunConfig& cfg, std::ostream& err = std::cerr)
{
    try {
        if (cfg.grid_steps < 2)
            throw InputError("--grid-steps must be at least 2");
        if (cfg.cbe <= 0.0 || (cfg.c0_eff && *cfg.c0_eff <= 0.0) || (cfg.delta_cap && *cfg.delta_cap <= 0.0))
            throw InputError("numeric overrides must be positive");
        std::filesystem::create_directories(cfg.out_dir);
        if (cfg.subcommand == Subcommand::estimate_c2)
            return static_cast<int>(run_estimate_c2(cfg, err));
        const auto subjects = resolve_subjects(cfg);
        switch (cfg.subcommand) {
        case Subcommand::analyze: return static_cast<int>(run_analyze(cfg, subjects, err, false));
        case Subcommand::sweep:
            if (!cfg.family)
                throw InputError("sweep needs --family");
            return static_cast<int>(run_analyze(cfg, subjects, err, true));
        case Subcommand::verify_thm1: return static_cast<int>(run_verify_thm1(cfg, subjects, err));
        case Subcommand::verify_lemma1: return static_cast<int>(run_verify_lemma1(cfg, subjects, err));
        case Subcommand::berry_esseen: return static_cast<int>(run_berry_esseen(cfg, subjects, err));
        case Subcommand::estimate_c2: break;
        }
    } catch (const InvalidDistribution& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    } catch (const InputError& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    } catch (const StripTooNarrow& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    } catch (const DegenerateDistribution& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    } catch (const Error& e) {
        err << "check failed: " << e.what() << '\n';
        return static_cast<int>(ExitCode::violation);
    } catch (const std::filesystem::filesystem_error& e) {
        err << "input error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::input_error);
    }
    return static_cast<int>(ExitCode::ok);
}

}  // namespace ridgelab::cli
