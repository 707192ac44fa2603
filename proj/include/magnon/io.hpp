#pragma once

// CSV / JSON serialization of spectra, time series and analytics tables.
// Every document starts with one metadata line: `# {json}` for CSV, the bare
// JSON object for JSON output (the data object follows on the next line).

#include <charconv>
#include <cmath>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "magnon/analytics.hpp"
#include "magnon/oracle.hpp"
#include "magnon/spectrum.hpp"

namespace magnon::io {

using json = nlohmann::ordered_json;

enum class Format { csv, json };

/// Shortest-safe decimal: 17 significant digits, locale independent.
inline std::string fmt(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

inline void write_metadata(std::ostream& os, const json& meta, Format format) {
    if (format == Format::csv) os << "# ";
    os << meta.dump() << '\n';
}

inline void write_spectrum(std::ostream& os, const Spectrum& s, Format format) {
    if (format == Format::csv) {
        os << "omega,intensity,count,class\n";
        for (const auto& p : s.poles)
            os << fmt(p.omega) << ',' << fmt(p.intensity) << ',' << p.tuple_count << ',' << to_string(p.cls) << '\n';
        return;
    }
    json poles = json::array();
    for (const auto& p : s.poles)
        poles.push_back({{"omega", p.omega},
                         {"intensity", p.intensity},
                         {"count", p.tuple_count},
                         {"class", to_string(p.cls)},
                         {"raw_complex_residual", p.raw_complex_residual}});
    os << json{{"q", s.q}, {"mode", to_string(s.mode)}, {"poles", std::move(poles)}}.dump() << '\n';
}

inline void write_time_series(std::ostream& os, const TimeSeries& s, Format format) {
    if (format == Format::csv) {
        os << "t,value\n";
        for (std::size_t i = 0; i < s.times.size(); ++i) os << fmt(s.times[i]) << ',' << fmt(s.values[i]) << '\n';
        return;
    }
    os << json{{"q", s.q}, {"t", s.times}, {"value", s.values}}.dump() << '\n';
}

/// Long-format light-cone table: one row per (t, q).
struct HeatmapRow {
    double t;
    int q;
    double value;
};

inline void write_heatmap(std::ostream& os, const std::vector<HeatmapRow>& rows, Format format) {
    if (format == Format::csv) {
        os << "t,q,value\n";
        for (const auto& r : rows) os << fmt(r.t) << ',' << r.q << ',' << fmt(r.value) << '\n';
        return;
    }
    json t = json::array(), q = json::array(), v = json::array();
    for (const auto& r : rows) {
        t.push_back(r.t);
        q.push_back(r.q);
        v.push_back(r.value);
    }
    os << json{{"t", std::move(t)}, {"q", std::move(q)}, {"value", std::move(v)}}.dump() << '\n';
}

inline void write_derivatives(std::ostream& os, const std::vector<DerivativeRecord>& recs, Format format) {
    if (format == Format::csv) {
        os << "q,kbar,order,exact_value,moment_value,exactness_flag\n";
        for (const auto& r : recs)
            os << r.q << ',' << r.kbar << ',' << r.order << ',' << fmt(r.exact_value) << ','
               << (r.moment_value ? fmt(*r.moment_value) : std::string{}) << ','
               << (r.exactness_flag ? "true" : "false") << '\n';
        return;
    }
    json rows = json::array();
    for (const auto& r : recs)
        rows.push_back({{"q", r.q},
                        {"kbar", r.kbar},
                        {"order", r.order},
                        {"exact_value", r.exact_value},
                        {"moment_value", r.moment_value ? json(*r.moment_value) : json(nullptr)},
                        {"exactness_flag", r.exactness_flag}});
    os << json{{"derivatives", std::move(rows)}}.dump() << '\n';
}

struct TransientRow {
    double t;
    double exact;
    double bessel_approx;
};

inline void write_transient(std::ostream& os, const std::vector<TransientRow>& rows, Format format) {
    if (format == Format::csv) {
        os << "t,exact,bessel_approx\n";
        for (const auto& r : rows) os << fmt(r.t) << ',' << fmt(r.exact) << ',' << fmt(r.bessel_approx) << '\n';
        return;
    }
    json t = json::array(), e = json::array(), b = json::array();
    for (const auto& r : rows) {
        t.push_back(r.t);
        e.push_back(r.exact);
        b.push_back(r.bessel_approx);
    }
    os << json{{"t", std::move(t)}, {"exact", std::move(e)}, {"bessel_approx", std::move(b)}}.dump() << '\n';
}

inline void write_edge(std::ostream& os, const EdgeEstimate& est, Format format) {
    if (format == Format::csv) {
        os << "q,arrival_time\n";
        for (const auto& [q, t] : est.per_q) os << q << ',' << fmt(t) << '\n';
        os << "# fitted_velocity=" << fmt(est.fitted_velocity) << '\n';
        return;
    }
    json rows = json::array();
    for (const auto& [q, t] : est.per_q) rows.push_back({{"q", q}, {"arrival_time", t}});
    os << json{{"threshold_rule", est.threshold_rule},
               {"per_q", std::move(rows)},
               {"fitted_velocity", est.fitted_velocity},
               {"fit_residual", est.fit_residual}}
              .dump()
       << '\n';
}

}  // namespace magnon::io
