#pragma once

// Desk-scale acceptance checks, shared by the `verify` subcommand and the
// acceptance test binary. Thresholds are fixed here; each check reports the
// measured quantity next to its bound.

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "magnon/analytics.hpp"
#include "magnon/chain.hpp"
#include "magnon/oracle.hpp"
#include "magnon/special.hpp"
#include "magnon/spectrum.hpp"

namespace magnon::acceptance {

struct Check {
    std::string label;
    bool pass = false;
    std::string detail;
};

struct CriterionResult {
    int id = 0;
    std::string name;
    std::vector<Check> checks;
    double seconds = 0.0;
    std::string error;

    bool pass() const {
        if (!error.empty()) return false;
        for (const auto& c : checks)
            if (!c.pass) return false;
        return !checks.empty();
    }
};

namespace detail {

inline std::string num(double v) {
    std::ostringstream os;
    os.precision(4);
    os << v;
    return os.str();
}

inline Check at_most(std::string label, double value, double bound) {
    return {std::move(label), value <= bound, num(value) + " <= " + num(bound)};
}

inline Check at_least(std::string label, double value, double bound) {
    return {std::move(label), value >= bound, num(value) + " >= " + num(bound)};
}

inline std::vector<double> linspace(double lo, double hi, int points) {
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = lo + (hi - lo) * i / (points - 1);
    return out;
}

inline std::vector<double> logspace(double lo, double hi, int points) {
    std::vector<double> out(points);
    for (int i = 0; i < points; ++i) out[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (points - 1));
    return out;
}

inline double oracle_q(const ChainParams& p, int q, double t) {
    return entanglement_from_amplitude(amplitude(p, q, t));
}

}  // namespace detail

inline CriterionResult spectral_oracle_equivalence(int workers) {
    CriterionResult r{1, "spectral-oracle equivalence", {}, 0, {}};
    const auto grid = detail::linspace(0.0, 20.0, 200);
    for (int n : {9, 33}) {
        const ChainParams p(n, 1.0, 0.0);
        double worst = 0;
        for (int q = 0; q <= 4; ++q) {
            const auto s = enumerate_poles(p, q, SpectrumMode::full, workers);
            for (double t : grid) worst = std::max(worst, std::abs(reconstruct(s, t) - detail::oracle_q(p, q, t)));
        }
        r.checks.push_back(detail::at_most("N=" + std::to_string(n) + " max|reconstruct-oracle|", worst, 1e-9));
    }
    return r;
}

inline CriterionResult oracle_independence(int) {
    CriterionResult r{2, "dense integrator vs closed form", {}, 0, {}};
    const ChainParams p(33, 1.0, 0.0);
    double worst = 0;
    for (double t : {1.0, 5.0, 20.0}) {
        const auto dense = evolve_dense(p, t);
        const auto closed = amplitudes(p, t);
        for (int q = -p.half_width(); q <= p.half_width(); ++q)
            worst = std::max(worst, std::abs(dense.at_site(q) - closed.at_site(q)));
    }
    r.checks.push_back(detail::at_most("N=33 max entrywise deviation", worst, 1e-8));
    return r;
}

inline CriterionResult full_hilbert(int) {
    CriterionResult r{3, "full-Hilbert check", {}, 0, {}};
    double off = 0, det_dev = 0, delta_dev = 0;
    for (int k = 1; k <= 10; ++k) {
        const double t = 0.7 * k;
        std::vector<double> base;
        for (double delta : {0.0, 0.5, 1.0}) {
            const ChainParams p(7, 1.0, delta);
            const auto rho = full_hilbert_check(p, t);
            for (int q = -3; q <= 3; ++q) {
                const auto& m = rho.at_site(q);
                off = std::max({off, std::abs(m(0, 1)), std::abs(m(1, 0))});
                const double det = m.determinant().real();
                det_dev = std::max(det_dev, std::abs(det - detail::oracle_q(p, q, t)));
                if (delta == 0.0)
                    base.push_back(det);
                else
                    delta_dev = std::max(delta_dev, std::abs(det - base[q + 3]));
            }
        }
    }
    r.checks.push_back(detail::at_most("max |off-diagonal|", off, 1e-10));
    r.checks.push_back(detail::at_most("max |det - |c|^2(1-|c|^2)|", det_dev, 1e-8));
    r.checks.push_back(detail::at_most("max Q spread over Delta", delta_dev, 1e-9));
    return r;
}

inline CriterionResult moment_null_space(int workers) {
    CriterionResult r{4, "moment null space", {}, 0, {}};
    const ChainParams p(33, 1.0, 0.0);
    double worst_ratio = 0;
    for (int q = 1; q <= 5; ++q) {
        const auto s = enumerate_poles(p, q, SpectrumMode::full, workers);
        const double scale = s.total_abs_intensity();
        for (int rr = 0; rr < q; ++rr) {
            const double bound = 1e-9 * scale * std::pow(4.0 * p.frequency_unit(), 2 * rr);
            worst_ratio = std::max(worst_ratio, std::abs(moments(s, rr)) / bound);
        }
    }
    r.checks.push_back(detail::at_most("max |sum I w^2r| / (1e-9 sum|I| (4J/hbar)^2r)", worst_ratio, 1.0));
    return r;
}

inline CriterionResult derivative_formula(int workers) {
    CriterionResult r{5, "derivative formula", {}, 0, {}};
    const ChainParams p(33, 1.0, 0.0);
    double worst = 0;
    for (int q = 1; q <= 5; ++q) {
        const auto s = enumerate_poles(p, q, SpectrumMode::full, workers);
        for (int k = 0; k < q; ++k) {
            const auto rec = with_moment(derivative_exact(p, q, k), s);
            worst = std::max(worst, std::abs(*rec.moment_value / rec.exact_value - 1.0));
        }
    }
    r.checks.push_back(detail::at_most("N=33 max relative deviation", worst, 1e-6));
    return r;
}

inline CriterionResult transient_exponent(int) {
    CriterionResult r{6, "transient exponent", {}, 0, {}};
    const ChainParams p(201, 1.0, 0.0);
    const auto grid = detail::logspace(1e-3, 5.0, 4000);
    for (int q : {2, 5, 10}) {
        const auto fit = leading_exponent_fit(evolve_closed_form(p, q, grid));
        r.checks.push_back(detail::at_most("q=" + std::to_string(q) + " |slope/2q - 1| (slope " +
                                               detail::num(fit.exponent) + ")",
                                           std::abs(fit.exponent / (2.0 * q) - 1.0), 0.01));
        if (q == 2) {
            const double expected = 0.25 * std::pow(0.5 * p.frequency_unit(), 4);
            r.checks.push_back(
                detail::at_most("q=2 |prefactor/expected - 1|", std::abs(fit.prefactor / expected - 1.0), 0.02));
        }
    }
    return r;
}

inline CriterionResult bessel_transient(int) {
    CriterionResult r{7, "Bessel transient", {}, 0, {}};
    const ChainParams p(201, 1.0, 0.0);
    double worst = 0;
    for (int q = 2; q <= 6; ++q)
        worst = std::max(worst, std::abs(transient(p, q, 1.0) / detail::oracle_q(p, q, 1.0) - 1.0));
    r.checks.push_back(detail::at_most("q=2..6 max |alpha J_2q / Q - 1|", worst, 0.05));
    return r;
}

inline CriterionResult edge_velocity(int) {
    CriterionResult r{8, "entanglement edge velocity", {}, 0, {}};
    const ChainParams p(201, 1.0, 0.0);
    const double target = std::numbers::e / 2 * p.group_velocity();
    const double t_max = 1.3 * 2 * 24 / (std::numbers::e * p.frequency_unit());
    const auto grid = detail::linspace(0.0, t_max, 4001);

    std::vector<TimeSeries> synthetic, real;
    for (int q = 10; q <= 24; ++q) {
        const double tau = 2.0 * q / (std::numbers::e * p.frequency_unit());
        TimeSeries s{q, p, grid, {}};
        for (double t : grid) s.values.push_back(std::pow(t / tau, 2 * q) / (2 * std::numbers::pi * q));
        synthetic.push_back(std::move(s));
        real.push_back(evolve_closed_form(p, q, grid));
    }
    const auto syn = edge_fit(synthetic, p);
    r.checks.push_back(detail::at_most("synthetic |v - eJ/2hbar|", std::abs(syn.fitted_velocity - target), 1e-6));
    const auto est = edge_fit(real, p);
    r.checks.push_back(detail::at_most("N=201 |v/(eJ/2hbar) - 1| (v " + detail::num(est.fitted_velocity) + ")",
                                       std::abs(est.fitted_velocity / target - 1.0), 0.07));
    return r;
}

inline CriterionResult spectrum_structure(int workers) {
    CriterionResult r{9, "spectrum structure", {}, 0, {}};
    const ChainParams p(33, 1.0, 0.0);
    double max_all = 0, max_dom = 0;
    for (int q = 0; q <= 4; ++q) {
        const auto s = classify(enumerate_poles(p, q, SpectrumMode::full, workers));
        for (const auto& pole : s.poles) {
            max_all = std::max(max_all, std::abs(pole.omega));
            if (pole.cls == PoleClass::dominant) max_dom = std::max(max_dom, std::abs(pole.omega));
        }
    }
    r.checks.push_back({"max |omega| < 4J/hbar", max_all < 4.0, detail::num(max_all) + " < 4"});
    r.checks.push_back(detail::at_most("dominant max |omega|", max_dom, 2.0 + 1e-12));

    const double tail33 = suppressed_tail_intensity(p, 0, 2.0, workers);
    const double tail99 = suppressed_tail_intensity(ChainParams(99, 1.0, 0.0), 0, 2.0, workers);
    r.checks.push_back(detail::at_least("q=0 suppressed tail sum|I| drop N=33->99 (" + detail::num(tail33) + " -> " +
                                            detail::num(tail99) + ")",
                                        tail33 / tail99, 2.5));

    const auto s0 = enumerate_poles(p, 0, SpectrumMode::full, workers);
    const double n = p.n_sites();
    const double u = 1.0 / (n * n * n) - 1.0 / (n * n * n * n);
    double worst = 0;
    for (const auto& pole : s0.poles) {
        if (pole.cls != PoleClass::dominant) continue;
        const double k = pole.intensity / u;
        worst = std::max(worst, std::abs(k - std::round(k)) * u);
    }
    r.checks.push_back(detail::at_most("q=0 dominant I distance to multiples of N^-3-N^-4", worst, 1e-12));
    return r;
}

inline CriterionResult string_zero_crossing(int workers) {
    CriterionResult r{10, "string zero crossing", {}, 0, {}};
    const ChainParams p(201, 1.0, 0.0);
    double worst = 0;
    for (int q = 3; q <= 8; ++q) {
        const double expected = 2 * p.frequency_unit() * std::pow(std::cos(std::numbers::pi / (4 * q)), 2);
        worst = std::max(worst, std::abs(first_zero_crossing(p, q, workers) / expected - 1.0));
    }
    r.checks.push_back(detail::at_most("q=3..8 max |crossing / 2J cos^2(pi/4q) - 1|", worst, 0.03));
    return r;
}

inline CriterionResult series_identity(int) {
    CriterionResult r{11, "Taylor series = squared Bessel", {}, 0, {}};
    const ChainParams p(33, 1.0, 0.0);
    double worst = 0;
    for (int q = 0; q <= 6; ++q)
        for (double t : detail::linspace(0.0, 2.0, 41))
            worst = std::max(worst, std::abs(taylor_series(p, q, t, 30).value - std::pow(bessel_j(q, t), 2)));
    r.checks.push_back(detail::at_most("q<=6, t<=2 max deviation", worst, 1e-10));
    return r;
}

using CriterionFn = std::function<CriterionResult(int)>;

inline std::vector<CriterionFn> desk_suite() {
    return {spectral_oracle_equivalence, oracle_independence, full_hilbert,       moment_null_space,
            derivative_formula,          transient_exponent,  bessel_transient,   edge_velocity,
            spectrum_structure,          string_zero_crossing, series_identity};
}

inline CriterionResult run_one(const CriterionFn& fn, int workers) {
    const auto start = std::chrono::steady_clock::now();
    CriterionResult r;
    try {
        r = fn(workers);
    } catch (const std::exception& e) {
        r.error = e.what();
    }
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

inline void print(std::ostream& os, const CriterionResult& r) {
    os << (r.pass() ? "PASS" : "FAIL") << "  [" << r.id << "] " << r.name << "  (" << detail::num(r.seconds)
       << " s)";
    if (!r.error.empty()) os << "  error: " << r.error;
    os << '\n';
    for (const auto& c : r.checks) os << "        " << (c.pass ? "ok  " : "FAIL") << "  " << c.label << ": " << c.detail << '\n';
}

/// Runs every criterion, prints one block per criterion; returns the failure count.
inline int run_suite(std::ostream& os, int workers = 1) {
    int failures = 0;
    for (const auto& fn : desk_suite()) {
        const auto r = run_one(fn, workers);
        print(os, r);
        os.flush();
        failures += !r.pass();
    }
    return failures;
}

}  // namespace magnon::acceptance
