#pragma once

// Command-line driver: configuration record, its JSON form (the metadata
// header written at the top of every output) and the subcommand dispatcher.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnon/acceptance.hpp"
#include "magnon/analytics.hpp"
#include "magnon/chain.hpp"
#include "magnon/errors.hpp"
#include "magnon/io.hpp"
#include "magnon/oracle.hpp"
#include "magnon/spectrum.hpp"

#ifndef MAGNON_VERSION
#define MAGNON_VERSION "0.0.0"
#endif

namespace magnon::cli {

enum class Subcommand { spectrum, evolve, heatmap, derivatives, transient, edge, verify };

inline const std::vector<std::string>& subcommand_names() {
    static const std::vector<std::string> names{"spectrum", "evolve",    "heatmap", "derivatives",
                                                "transient", "edge", "verify"};
    return names;
}

inline std::string to_string(Subcommand s) { return subcommand_names()[static_cast<int>(s)]; }

inline Subcommand subcommand_from_string(const std::string& name) {
    const auto& names = subcommand_names();
    for (std::size_t i = 0; i < names.size(); ++i)
        if (names[i] == name) return static_cast<Subcommand>(i);
    throw validation_error("unknown subcommand '" + name + "'");
}

inline SpectrumMode mode_from_string(const std::string& s) {
    if (s == "full") return SpectrumMode::full;
    if (s == "dominant") return SpectrumMode::dominant_only;
    throw validation_error("mode must be full or dominant, got '" + s + "'");
}

inline io::Format format_from_string(const std::string& s) {
    if (s == "csv") return io::Format::csv;
    if (s == "json") return io::Format::json;
    throw validation_error("format must be csv or json, got '" + s + "'");
}

struct RunConfig {
    ChainParams params{33, 1.0, 0.0, 1.0};
    Subcommand subcommand = Subcommand::spectrum;
    int q = 0;
    // q range used by derivatives and edge; unset means the command default
    std::optional<int> q_min;
    std::optional<int> q_max;
    std::optional<double> t_max;
    int steps = 200;
    SpectrumMode mode = SpectrumMode::full;
    std::string out;  // empty: standard output
    io::Format format = io::Format::csv;
    int workers = 1;
    std::string level = "desk";

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline int default_q_min(Subcommand s) { return s == Subcommand::edge ? 10 : 1; }
inline int default_q_max(Subcommand s) { return s == Subcommand::edge ? 24 : 5; }

/// Fills in command-dependent defaults so the header records the values actually used.
inline RunConfig resolve(RunConfig c) {
    if (c.subcommand == Subcommand::derivatives || c.subcommand == Subcommand::edge) {
        if (!c.q_min) c.q_min = default_q_min(c.subcommand);
        if (!c.q_max) c.q_max = default_q_max(c.subcommand);
    }
    if (!c.t_max) {
        if (c.subcommand == Subcommand::edge)
            c.t_max = 1.3 * 2.0 * *c.q_max / (std::exp(1.0) * c.params.frequency_unit());
        else
            c.t_max = 20.0 / c.params.frequency_unit();
    }
    return c;
}

inline void validate(const RunConfig& c) {
    const auto& p = c.params;
    if (c.workers < 1) throw validation_error("workers must be >= 1");
    if (c.subcommand == Subcommand::verify) {
        if (c.level != "desk") throw validation_error("verify supports --level desk only");
        return;
    }
    if (!c.t_max || !(*c.t_max > 0.0) || !std::isfinite(*c.t_max)) throw validation_error("tmax must be > 0");
    if (c.steps < 2) throw validation_error("steps must be >= 2");
    const bool ranged = c.subcommand == Subcommand::derivatives || c.subcommand == Subcommand::edge;
    if (ranged) {
        if (!c.q_min || !c.q_max || *c.q_min > *c.q_max)
            throw validation_error("q-min must not exceed q-max");
        if (*c.q_min < 1) throw validation_error("q-min must be >= 1 for " + to_string(c.subcommand));
        if (!p.contains_site(*c.q_max))
            throw range_error("q-max " + std::to_string(*c.q_max) + " outside the chain (half width " +
                              std::to_string(p.half_width()) + ")");
    } else if (c.subcommand != Subcommand::heatmap && !p.contains_site(c.q)) {
        throw range_error("q " + std::to_string(c.q) + " outside [-" + std::to_string(p.half_width()) + ", " +
                          std::to_string(p.half_width()) + "]");
    }
    if (c.subcommand == Subcommand::spectrum && c.mode == SpectrumMode::full && p.n_sites() > full_mode_max_sites)
        throw capability_error("full spectrum enumeration is capped at N=" + std::to_string(full_mode_max_sites) +
                               "; pass --mode dominant for larger chains");
}

inline io::json to_json(const RunConfig& c) {
    io::json j;
    j["tool"] = "magnon";
    j["version"] = MAGNON_VERSION;
    j["subcommand"] = to_string(c.subcommand);
    j["n"] = c.params.n_sites();
    j["j"] = c.params.coupling_j();
    j["delta"] = c.params.anisotropy_delta();
    j["hbar"] = c.params.hbar();
    j["q"] = c.q;
    j["q_min"] = c.q_min ? io::json(*c.q_min) : io::json(nullptr);
    j["q_max"] = c.q_max ? io::json(*c.q_max) : io::json(nullptr);
    j["tmax"] = c.t_max ? io::json(*c.t_max) : io::json(nullptr);
    j["steps"] = c.steps;
    j["mode"] = magnon::to_string(c.mode);
    j["format"] = c.format == io::Format::csv ? "csv" : "json";
    j["out"] = c.out;
    j["workers"] = c.workers;
    j["level"] = c.level;
    return j;
}

inline RunConfig from_json(const io::json& j) {
    RunConfig c;
    c.params = ChainParams(j.at("n").get<int>(), j.at("j").get<double>(), j.at("delta").get<double>(),
                           j.at("hbar").get<double>());
    c.subcommand = subcommand_from_string(j.at("subcommand").get<std::string>());
    c.q = j.at("q").get<int>();
    if (!j.at("q_min").is_null()) c.q_min = j.at("q_min").get<int>();
    if (!j.at("q_max").is_null()) c.q_max = j.at("q_max").get<int>();
    if (!j.at("tmax").is_null()) c.t_max = j.at("tmax").get<double>();
    c.steps = j.at("steps").get<int>();
    c.mode = mode_from_string(j.at("mode").get<std::string>());
    c.format = format_from_string(j.at("format").get<std::string>());
    c.out = j.at("out").get<std::string>();
    c.workers = j.at("workers").get<int>();
    c.level = j.at("level").get<std::string>();
    return c;
}

/// Reads the metadata header back from a file produced by `run`.
inline RunConfig read_header(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw validation_error("empty file, no metadata header");
    if (line.rfind("# ", 0) == 0) line.erase(0, 2);
    return from_json(io::json::parse(line));
}

inline std::vector<double> time_grid(const RunConfig& c) {
    std::vector<double> grid(c.steps);
    for (int i = 0; i < c.steps; ++i) grid[i] = *c.t_max * i / (c.steps - 1);
    return grid;
}

namespace detail {

inline void write_data(std::ostream& os, const RunConfig& c) {
    const auto& p = c.params;
    switch (c.subcommand) {
        case Subcommand::spectrum:
            io::write_spectrum(os, classify(enumerate_poles(p, c.q, c.mode, c.workers)), c.format);
            break;
        case Subcommand::evolve:
            io::write_time_series(os, evolve_closed_form(p, c.q, time_grid(c)), c.format);
            break;
        case Subcommand::heatmap: {
            std::vector<io::HeatmapRow> rows;
            rows.reserve(static_cast<std::size_t>(c.steps) * p.n_sites());
            for (double t : time_grid(c)) {
                const auto amps = amplitudes(p, t);
                for (int q = -p.half_width(); q <= p.half_width(); ++q)
                    rows.push_back({t, q, entanglement_from_amplitude(amps.at_site(q))});
            }
            io::write_heatmap(os, rows, c.format);
            break;
        }
        case Subcommand::derivatives: {
            const bool with_moments = c.mode == SpectrumMode::full && p.n_sites() <= full_mode_max_sites;
            std::vector<DerivativeRecord> recs;
            for (int q = *c.q_min; q <= *c.q_max; ++q) {
                std::optional<Spectrum> s;
                if (with_moments) s = enumerate_poles(p, q, SpectrumMode::full, c.workers);
                for (int k = 0; k <= q; ++k) {
                    auto rec = derivative_exact(p, q, k);
                    recs.push_back(s ? with_moment(rec, *s) : rec);
                }
            }
            io::write_derivatives(os, recs, c.format);
            break;
        }
        case Subcommand::transient: {
            const auto exact = evolve_closed_form(p, c.q, time_grid(c));
            std::vector<io::TransientRow> rows;
            for (std::size_t i = 0; i < exact.times.size(); ++i)
                rows.push_back({exact.times[i], exact.values[i], transient(p, c.q, exact.times[i])});
            io::write_transient(os, rows, c.format);
            break;
        }
        case Subcommand::edge: {
            std::vector<TimeSeries> series;
            const auto grid = time_grid(c);
            for (int q = *c.q_min; q <= *c.q_max; ++q) series.push_back(evolve_closed_form(p, q, grid));
            io::write_edge(os, edge_fit(std::move(series), p), c.format);
            break;
        }
        case Subcommand::verify:
            break;
    }
}

}  // namespace detail

/// Runs one configured command. Returns the process exit status:
/// 0 success, 1 validation / capability error, 2 numerical failure.
inline int run(RunConfig config, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    try {
        config = resolve(std::move(config));
        validate(config);
        if (config.subcommand == Subcommand::verify) {
            const int failures = acceptance::run_suite(out, config.workers);
            out << (failures ? std::to_string(failures) + " criteria failed" : std::string("all criteria passed"))
                << '\n';
            return failures ? 2 : 0;
        }
        // build the whole document first so a failure never leaves a partial file behind
        std::ostringstream doc;
        io::write_metadata(doc, to_json(config), config.format);
        detail::write_data(doc, config);
        if (config.out.empty()) {
            out << doc.str();
        } else {
            std::ofstream file(config.out, std::ios::binary);
            if (!file) throw validation_error("cannot open output file " + config.out);
            file << doc.str();
            if (!file.flush()) throw validation_error("failed writing " + config.out);
        }
        return 0;
    } catch (const validation_error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    } catch (const numerical_error& e) {
        err << "numerical error: " << e.what() << '\n';
        return 2;
    }
}

}  // namespace magnon::cli
