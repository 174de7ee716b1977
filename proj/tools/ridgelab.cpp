#include <iostream>

#include "CLI11.hpp"
#include "cli.hpp"

int main(int argc, char** argv)
{
    using ridgelab::cli::RunConfig;
    using ridgelab::cli::Subcommand;

    CLI::App app{"Marcinkiewicz stability and Berry-Esseen diagnostics for lattice laws"};
    app.require_subcommand(1, 1);
    RunConfig cfg;

    double c0 = 0.0, cap = 0.0;
    std::uint64_t seed = 0;
    std::string input, family, catalog;

    auto add_source = [&](CLI::App* sub) {
        sub->add_option("--input", input, "distribution JSON file");
        sub->add_option("--family", family, "family spec, e.g. binomial:n=16,64;p=0.5");
        sub->add_option("--catalog", catalog, "catalog law: normal or skellam_half");
        sub->add_option("--delta-cap", cap, "upper bound applied to the strip half-width");
        sub->add_option("--grid-steps", cfg.grid_steps, "polar and lemma grid resolution");
        sub->add_option("--seed", seed, "seed for random families");
    };
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--out", cfg.out_dir, "output directory");
        sub->add_flag("--emit-svg", cfg.emit_svg, "write SVG plots next to the CSV files");
        sub->add_option("--jobs", cfg.jobs, "parallel workers")->check(CLI::Range(1u, 256u));
    };
    auto add_be = [&](CLI::App* sub) {
        sub->add_option("--c0-eff", c0, "override for the empirical residual constant");
        sub->add_option("--cbe", cfg.cbe, "smoothing-inequality constant");
    };

    struct Entry {
        const char* name;
        Subcommand cmd;
        const char* help;
    };
    const Entry entries[] = {
        {"analyze", Subcommand::analyze, "full report for one law or family"},
        {"sweep", Subcommand::sweep, "residual and Berry-Esseen tables over a family"},
        {"verify-thm1", Subcommand::verify_thm1, "residual ratio on |z| <= Delta/3"},
        {"verify-lemma1", Subcommand::verify_lemma1, "monotonicity of u along horizontal lines"},
        {"berry-esseen", Subcommand::berry_esseen, "smoothing-inequality chain"},
        {"estimate-c2", Subcommand::estimate_c2, "discrete kernel-derivative constant on the square"},
    };
    std::vector<std::pair<CLI::App*, Subcommand>> subs;
    for (const auto& e : entries) {
        CLI::App* sub = app.add_subcommand(e.name, e.help);
        if (e.cmd == Subcommand::estimate_c2) {
            sub->add_option("--mesh", cfg.mesh, "mesh width h = 1/m, at most 1/16");
            sub->add_option("--arcs", cfg.arcs, "arcs per side (at least 8)");
        } else {
            add_source(sub);
            if (e.cmd != Subcommand::verify_lemma1)
                add_be(sub);
        }
        add_common(sub);
        subs.emplace_back(sub, e.cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return static_cast<int>(ridgelab::cli::ExitCode::input_error);
    }

    for (const auto& [sub, cmd] : subs) {
        if (!sub->parsed())
            continue;
        cfg.subcommand = cmd;
        auto given = [sub = sub](const char* flag) { return sub->get_option_no_throw(flag) && sub->count(flag) > 0; };
        if (given("--input"))
            cfg.input = input;
        if (given("--family"))
            cfg.family = family;
        if (given("--catalog"))
            cfg.catalog = catalog;
        if (given("--c0-eff"))
            cfg.c0_eff = c0;
        if (given("--delta-cap"))
            cfg.delta_cap = cap;
        if (given("--seed"))
            cfg.seed = seed;
    }
    return ridgelab::cli::run(cfg);
}
