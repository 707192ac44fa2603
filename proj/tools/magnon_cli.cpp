// magnon: batch front end for the one-magnon entanglement toolkit.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "cli.hpp"

int main(int argc, char** argv) {
    using namespace magnon::cli;

    CLI::App app{"One-magnon XXZ chain: pole spectra, entanglement dynamics and closed-form checks", "magnon"};
    app.set_version_flag("--version", std::string(MAGNON_VERSION));
    app.set_config("--config", "", "TOML file with the same keys as the flags; flags take precedence");
    app.require_subcommand(1, 1);

    int n = 33;
    double j = 1.0, delta = 0.0, hbar = 1.0;
    std::optional<int> q_min, q_max;
    std::optional<double> t_max;
    std::string mode = "full", format = "csv";
    RunConfig config;

    app.add_option("--n", n, "number of sites (odd, >= 3)")->capture_default_str();
    app.add_option("--j", j, "coupling J > 0")->capture_default_str();
    app.add_option("--delta", delta, "anisotropy Delta")->capture_default_str();
    app.add_option("--hbar", hbar, "reduced Planck constant")->capture_default_str();
    app.add_option("--q", config.q, "site index")->capture_default_str();
    app.add_option("--q-min", q_min, "smallest q (derivatives: 1, edge: 10)");
    app.add_option("--q-max", q_max, "largest q (derivatives: 5, edge: 24)");
    app.add_option("--tmax", t_max, "end of the time grid (default 20 hbar/J; edge: 2.6 q_max hbar/(e J))");
    app.add_option("--steps", config.steps, "number of time grid points")->capture_default_str();
    app.add_option("--mode", mode, "spectrum enumeration mode")
        ->check(CLI::IsMember({"full", "dominant"}))
        ->capture_default_str();
    app.add_option("--out", config.out, "output path (default: standard output)");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--workers", config.workers, "worker threads for pole enumeration")->capture_default_str();

    const char* help[] = {
        "pole spectrum of Q_q(t)",
        "Q_q(t) on a uniform time grid",
        "long-format t,q,value table over all sites",
        "exact even derivatives at t=0, with moment cross-check",
        "exact Q_q(t) against the Bessel transient",
        "entanglement-edge arrival times and fitted velocity",
        "run the acceptance suite",
    };
    for (std::size_t i = 0; i < subcommand_names().size(); ++i) {
        auto* sub = app.add_subcommand(subcommand_names()[i], help[i]);
        sub->fallthrough();
        if (subcommand_names()[i] == "verify")
            sub->add_option("--level", config.level, "suite size")->check(CLI::IsMember({"desk"}))->capture_default_str();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 1;
    }

    try {
        config.params = magnon::ChainParams(n, j, delta, hbar);
        config.subcommand = subcommand_from_string(app.get_subcommands().front()->get_name());
        config.q_min = q_min;
        config.q_max = q_max;
        config.t_max = t_max;
        config.mode = mode_from_string(mode);
        config.format = format_from_string(format);
    } catch (const magnon::validation_error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return run(config);
}
