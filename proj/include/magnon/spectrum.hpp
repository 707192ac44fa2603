#pragma once

// Pole/intensity spectrum of a single spin's entanglement measure.
//
// Every four-tuple of momentum indices (m1, m2, m3, m4) contributes a pole at
//   omega = (J/hbar) (cos th m2 - cos th m1 - cos th m4 + cos th m3),  th = 2 pi / N
// with complex weight
//   N^-4 [ N delta(m2, m4) e^{i th q (m1 - m3)} - e^{i th q (m1 - m3 + m4 - m2)} ].
// Weights sharing a frequency (to within the merge tolerance) are summed; the
// imaginary parts cancel and Q_q(t) = sum_j I_j cos(omega_j t).

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <cstdint>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "magnon/chain.hpp"
#include "magnon/errors.hpp"
#include "magnon/numeric.hpp"

namespace magnon {

enum class SpectrumMode { full, dominant_only };
enum class PoleClass { dominant, suppressed };

inline constexpr int full_mode_max_sites = 65;
inline constexpr int tail_scan_max_sites = 101;
/// Frequencies closer than this (in units of J/hbar) are one pole.
inline constexpr double merge_tolerance = 1e-9;

inline const char* to_string(SpectrumMode m) { return m == SpectrumMode::full ? "full" : "dominant"; }
inline const char* to_string(PoleClass c) { return c == PoleClass::dominant ? "dominant" : "suppressed"; }

struct Pole {
    double omega = 0.0;
    double intensity = 0.0;
    double raw_complex_residual = 0.0;  // imaginary part dropped at merge
    std::uint64_t tuple_count = 0;
    PoleClass cls = PoleClass::suppressed;
    bool diagonal_weight = false;  // received weight from some m2 == m4 tuple
};

struct Spectrum {
    int q = 0;
    ChainParams params;
    SpectrumMode mode = SpectrumMode::full;
    std::vector<Pole> poles;  // ascending omega

    double total_abs_intensity() const {
        CompensatedSum<> acc;
        for (const auto& p : poles) acc.add(std::abs(p.intensity));
        return static_cast<double>(acc.value());
    }
};

namespace detail {

struct Cell {
    CompensatedComplexSum<> weight;
    std::uint64_t count = 0;
    bool diagonal = false;

    void add(std::complex<real_ext> w, bool diag) {
        weight.add(w);
        ++count;
        diagonal = diagonal || diag;
    }
    void add(const Cell& other) {
        weight.add(other.weight);
        count += other.count;
        diagonal = diagonal || other.diagonal;
    }
};

struct RawPole {
    real_ext omega;  // units of J/hbar
    Cell cell;
};

struct ModeTables {
    int n;
    int half_width;
    std::vector<real_ext> cos_abs;                 // cos(th a), a = 0..half_width
    std::vector<std::complex<real_ext>> phase;     // e^{i th k}, k = 0..N-1

    explicit ModeTables(int n_sites) : n(n_sites), half_width((n_sites - 1) / 2) {
        for (int a = 0; a <= half_width; ++a) cos_abs.push_back(std::cos(2 * pi_ext * a / n));
        for (int k = 0; k < n; ++k) {
            const real_ext arg = 2 * pi_ext * k / n;
            phase.emplace_back(std::cos(arg), std::sin(arg));
        }
    }

    const std::complex<real_ext>& phase_of(long long k) const {
        const long long r = ((k % n) + n) % n;
        return phase[static_cast<std::size_t>(r)];
    }
};

inline int pair_index(int a, int b) {
    const int lo = std::min(a, b);
    const int hi = std::max(a, b);
    return hi * (hi + 1) / 2 + lo;
}

inline std::vector<int> signed_values(int a) {
    if (a == 0) return {0};
    return {-a, a};
}

template <class Fn>
void run_workers(int workers, int tasks, Fn&& fn) {
    workers = std::max(1, std::min(workers, tasks));
    if (workers == 1) {
        for (int i = 0; i < tasks; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < tasks; i = next.fetch_add(1)) fn(i);
        });
}

// Full enumeration. Cells are indexed by (gain pair {|m2|,|m3|}, loss pair
// {|m1|,|m4|}); the frequency of a cell is S[gain] - S[loss] with
// S[{a,b}] = cos th a + cos th b, so +omega and -omega come out exactly negated.
// Each gain row is filled by one worker in a fixed order.
inline std::vector<RawPole> enumerate_full(int n, int q, int workers, real_ext min_abs_omega = -1) {
    const ModeTables tab(n);
    const int hw = tab.half_width;
    const int pairs = (hw + 1) * (hw + 2) / 2;

    std::vector<real_ext> pair_sum(pairs);
    std::vector<std::pair<int, int>> pair_members(pairs);
    for (int hi = 0; hi <= hw; ++hi)
        for (int lo = 0; lo <= hi; ++lo) {
            pair_sum[pair_index(lo, hi)] = tab.cos_abs[lo] + tab.cos_abs[hi];
            pair_members[pair_index(lo, hi)] = {lo, hi};
        }

    std::vector<Cell> cells(static_cast<std::size_t>(pairs) * pairs);
    const real_ext diag_scale = n - 1;

    run_workers(workers, pairs, [&](int gain) {
        const auto [lo, hi] = pair_members[gain];
        std::vector<std::pair<int, int>> gains;  // (m2, m3)
        for (int m2 : signed_values(lo))
            for (int m3 : signed_values(hi)) gains.emplace_back(m2, m3);
        if (lo != hi)
            for (int m2 : signed_values(hi))
                for (int m3 : signed_values(lo)) gains.emplace_back(m2, m3);

        Cell* row = cells.data() + static_cast<std::size_t>(gain) * pairs;
        for (const auto& [m2, m3] : gains) {
            for (int m1 = -hw; m1 <= hw; ++m1) {
                for (int m4 = -hw; m4 <= hw; ++m4) {
                    const int loss = pair_index(std::abs(m1), std::abs(m4));
                    if (min_abs_omega >= 0 && !(std::abs(pair_sum[gain] - pair_sum[loss]) > min_abs_omega)) continue;
                    if (m2 == m4)
                        row[loss].add(diag_scale * tab.phase_of(static_cast<long long>(q) * (m1 - m3)), true);
                    else
                        row[loss].add(-tab.phase_of(static_cast<long long>(q) * (m1 - m3 + m4 - m2)), false);
                }
            }
        }
    });

    std::vector<RawPole> raw;
    for (int gain = 0; gain < pairs; ++gain)
        for (int loss = 0; loss < pairs; ++loss) {
            const Cell& c = cells[static_cast<std::size_t>(gain) * pairs + loss];
            if (c.count == 0) continue;
            raw.push_back({pair_sum[gain] - pair_sum[loss], c});
        }
    return raw;
}

// Tuples whose frequency reduces to a difference cos th b - cos th a: m2 = +-m4,
// m3 = +-m4, m1 = +-m2 or m1 = +-m3. These carry all m2 == m4 weight plus every
// m2 != m4 tuple landing exactly on those frequencies. Cells are (b, a) after
// cancelling the shared |m|. Per-m1 partial grids are merged in ascending m1 so
// the result is independent of the worker count.
inline std::vector<RawPole> enumerate_dominant(int n, int q, int workers) {
    const ModeTables tab(n);
    const int hw = tab.half_width;
    const int side = hw + 1;
    const real_ext diag_scale = n - 1;
    const auto grid_size = static_cast<std::size_t>(side) * side;

    std::vector<Cell> total(grid_size);
    const int batch = std::max(1, workers);
    for (int first = -hw; first <= hw; first += batch) {
        const int count = std::min(batch, hw - first + 1);
        std::vector<std::vector<Cell>> partial(count, std::vector<Cell>(grid_size));
        run_workers(workers, count, [&](int slot) {
            const int m1 = first + slot;
            auto& grid = partial[slot];
            const int a1 = std::abs(m1);
            auto add = [&](int m2, int m3, int m4) {
                const int a2 = std::abs(m2), a3 = std::abs(m3), a4 = std::abs(m4);
                int b, a;
                if (a2 == a1) { b = a3; a = a4; }
                else if (a2 == a4) { b = a3; a = a1; }
                else if (a3 == a1) { b = a2; a = a4; }
                else { b = a2; a = a1; }  // a3 == a4
                Cell& cell = grid[static_cast<std::size_t>(b) * side + a];
                if (m2 == m4)
                    cell.add(diag_scale * tab.phase_of(static_cast<long long>(q) * (m1 - m3)), true);
                else
                    cell.add(-tab.phase_of(static_cast<long long>(q) * (m1 - m3 + m4 - m2)), false);
            };
            for (int m2 = -hw; m2 <= hw; ++m2) {
                for (int m3 = -hw; m3 <= hw; ++m3) {
                    if (std::abs(m2) == a1 || std::abs(m3) == a1) {
                        for (int m4 = -hw; m4 <= hw; ++m4) add(m2, m3, m4);
                        continue;
                    }
                    int cand[4] = {m2, -m2, m3, -m3};
                    for (int i = 0; i < 4; ++i) {
                        bool seen = false;
                        for (int j = 0; j < i; ++j) seen = seen || cand[j] == cand[i];
                        if (!seen) add(m2, m3, cand[i]);
                    }
                }
            }
        });
        for (const auto& grid : partial)
            for (std::size_t i = 0; i < grid_size; ++i)
                if (grid[i].count) total[i].add(grid[i]);
    }

    std::vector<RawPole> raw;
    for (int b = 0; b < side; ++b)
        for (int a = 0; a < side; ++a) {
            const Cell& c = total[static_cast<std::size_t>(b) * side + a];
            if (c.count == 0) continue;
            raw.push_back({tab.cos_abs[b] - tab.cos_abs[a], c});
        }
    return raw;
}

// Sort by frequency and merge runs whose consecutive gaps are within the
// tolerance; the merged pole sits at the midpoint of its run.
inline std::vector<Pole> merge_poles(std::vector<RawPole> raw, int n, double freq_unit) {
    std::stable_sort(raw.begin(), raw.end(), [](const RawPole& x, const RawPole& y) { return x.omega < y.omega; });

    struct Group {
        real_ext lo, hi;
        Cell cell;
    };
    std::vector<Group> groups;
    for (const auto& r : raw) {
        if (!groups.empty() && r.omega - groups.back().hi <= merge_tolerance) {
            groups.back().hi = r.omega;
            groups.back().cell.add(r.cell);
        } else {
            groups.push_back({r.omega, r.omega, r.cell});
        }
    }

    const real_ext scale = 1.0L / (static_cast<real_ext>(n) * n * n * n);
    std::vector<Pole> poles;
    poles.reserve(groups.size());
    CompensatedSum<> abs_total;
    for (const auto& g : groups) {
        const auto w = g.cell.weight.value() * scale;
        Pole p;
        p.omega = static_cast<double>((g.lo + g.hi) / 2 * freq_unit);
        p.intensity = static_cast<double>(w.real());
        p.raw_complex_residual = static_cast<double>(w.imag());
        p.tuple_count = g.cell.count;
        p.diagonal_weight = g.cell.diagonal;
        p.cls = p.diagonal_weight ? PoleClass::dominant : PoleClass::suppressed;
        abs_total.add(std::abs(w.real()));
        poles.push_back(p);
    }

    const real_ext bound = 1e-10L * abs_total.value();
    for (const auto& p : poles) {
        if (std::abs(static_cast<real_ext>(p.raw_complex_residual)) > bound) {
            std::ostringstream msg;
            msg.precision(17);
            msg << "imaginary weight " << p.raw_complex_residual << " at omega=" << p.omega
                << " exceeds 1e-10 * sum|I| = " << static_cast<double>(bound);
            throw invariant_violation(msg.str());
        }
    }
    return poles;
}

inline void check_site(const ChainParams& params, int q) {
    if (!params.contains_site(q))
        throw range_error("site index " + std::to_string(q) + " outside [-" + std::to_string(params.half_width()) +
                          ", " + std::to_string(params.half_width()) + "]");
}

}  // namespace detail

inline Spectrum enumerate_poles(const ChainParams& params, int q, SpectrumMode mode, int workers = 1) {
    detail::check_site(params, q);
    const int n = params.n_sites();
    if (mode == SpectrumMode::full && n > full_mode_max_sites)
        throw capability_error("full enumeration is capped at N=" + std::to_string(full_mode_max_sites) + " (got N=" +
                               std::to_string(n) + "); use the dominant mode");
    auto raw = mode == SpectrumMode::full ? detail::enumerate_full(n, q, workers)
                                          : detail::enumerate_dominant(n, q, workers);
    return {q, params, mode, detail::merge_poles(std::move(raw), n, params.frequency_unit())};
}

/// Q_q(t) from a full spectrum: each +-omega pair contributes (I_+ + I_-) cos(omega t).
inline double reconstruct(const Spectrum& spectrum, double t) {
    if (spectrum.mode != SpectrumMode::full)
        throw capability_error("reconstruct needs a full spectrum; the dominant mode omits suppressed poles");
    const auto& poles = spectrum.poles;
    const std::size_t n = poles.size();
    const real_ext tol = merge_tolerance * spectrum.params.frequency_unit();
    const real_ext tt = t;
    CompensatedSum<> acc;
    std::size_t lo = 0;
    std::size_t hi = n;
    while (lo < hi) {
        const Pole& neg = poles[lo];
        const Pole& pos = poles[hi - 1];
        if (lo == hi - 1) {
            acc.add(static_cast<real_ext>(pos.intensity) * std::cos(static_cast<real_ext>(pos.omega) * tt));
            break;
        }
        if (std::abs(static_cast<real_ext>(neg.omega) + pos.omega) <= tol) {
            acc.add((static_cast<real_ext>(neg.intensity) + pos.intensity) *
                    std::cos(static_cast<real_ext>(pos.omega) * tt));
            ++lo;
            --hi;
        } else if (-neg.omega > pos.omega) {
            acc.add(static_cast<real_ext>(neg.intensity) * std::cos(static_cast<real_ext>(neg.omega) * tt));
            ++lo;
        } else {
            acc.add(static_cast<real_ext>(pos.intensity) * std::cos(static_cast<real_ext>(pos.omega) * tt));
            --hi;
        }
    }
    return static_cast<double>(acc.value());
}

/// Poles carrying any m2 == m4 weight are dominant, all others suppressed.
inline Spectrum classify(Spectrum spectrum) {
    for (auto& p : spectrum.poles) p.cls = p.diagonal_weight ? PoleClass::dominant : PoleClass::suppressed;
    return spectrum;
}

/// Sum of |I| over suppressed poles with |omega| > cut (units of J/hbar).
/// Runs the full enumerator up to N=101 without keeping the spectrum.
inline double suppressed_tail_intensity(const ChainParams& params, int q, double cut = 2.0, int workers = 1) {
    detail::check_site(params, q);
    if (params.n_sites() > tail_scan_max_sites)
        throw capability_error("tail scan is capped at N=" + std::to_string(tail_scan_max_sites));
    // dominant frequencies never exceed 2 J/hbar, so prefiltering cells above
    // the cut cannot drop a pole that would have merged with a dominant one
    const real_ext prefilter = std::max(0.0, cut - 10 * merge_tolerance);
    auto raw = detail::enumerate_full(params.n_sites(), q, workers, prefilter);
    const auto poles = detail::merge_poles(std::move(raw), params.n_sites(), params.frequency_unit());
    CompensatedSum<> acc;
    const double cut_abs = cut * params.frequency_unit();
    for (const auto& p : poles)
        if (!p.diagonal_weight && std::abs(p.omega) > cut_abs) acc.add(std::abs(p.intensity));
    return static_cast<double>(acc.value());
}

/// A dominant pole of the near-cutoff string, labelled by
/// eps = |m1| - |m3| - N/2 and delta = |m1| + |m3| - N/2.
struct StringPole {
    int epsilon = 0;              // nearest-integer label
    int delta = 0;                // nearest-integer label
    double epsilon_exact = 0.0;   // half-integer for odd N
    double delta_exact = 0.0;
    int m1_abs = 0;
    int m3_abs = 0;
    int degeneracy = 0;           // sign variants of (m1, m3): 4, or 2 when m3 == 0
    double omega = 0.0;
    double intensity = 0.0;
};

/// Positive-frequency dominant poles with |m1| > N/4 > |m3|, omega descending.
inline std::vector<StringPole> string_poles(const ChainParams& params, int q, int workers = 1) {
    detail::check_site(params, q);
    if (q <= 0) throw capability_error("string analysis is defined for q >= 1");
    const int n = params.n_sites();
    const int hw = params.half_width();
    const Spectrum spectrum = enumerate_poles(params, q, SpectrumMode::dominant_only, workers);
    const detail::ModeTables tab(n);
    const double unit = params.frequency_unit();

    auto intensity_at = [&](double omega) {
        const auto& poles = spectrum.poles;
        auto it = std::lower_bound(poles.begin(), poles.end(), omega,
                                   [](const Pole& p, double w) { return p.omega < w; });
        const Pole* best = nullptr;
        for (auto cand : {it, it == poles.begin() ? it : std::prev(it)}) {
            if (cand == poles.end()) continue;
            if (!best || std::abs(cand->omega - omega) < std::abs(best->omega - omega)) best = &*cand;
        }
        if (!best || std::abs(best->omega - omega) > 10 * merge_tolerance * unit)
            throw invariant_violation("no merged dominant pole at string frequency");
        return best->intensity;
    };

    std::vector<StringPole> out;
    for (int a = 0; a <= hw; ++a) {
        if (4 * a <= n) continue;
        for (int b = 0; 4 * b < n; ++b) {
            StringPole s;
            s.m1_abs = a;
            s.m3_abs = b;
            s.epsilon_exact = a - b - n / 2.0;
            s.delta_exact = a + b - n / 2.0;
            s.epsilon = static_cast<int>(std::lround(s.epsilon_exact));
            s.delta = static_cast<int>(std::lround(s.delta_exact));
            s.degeneracy = b == 0 ? 2 : 4;
            s.omega = static_cast<double>((tab.cos_abs[b] - tab.cos_abs[a]) * unit);
            s.intensity = intensity_at(s.omega);
            out.push_back(s);
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const StringPole& x, const StringPole& y) { return x.omega > y.omega; });
    return out;
}

/// Midpoint frequency of the first sign change of intensity walking down from the cutoff.
inline double first_zero_crossing(const ChainParams& params, int q, int workers = 1) {
    if (q < 2) throw capability_error("zero-crossing analysis needs q >= 2");
    if (params.n_sites() < 8 * q)
        throw capability_error("zero-crossing analysis needs N >= 8q (N=" + std::to_string(params.n_sites()) +
                               ", q=" + std::to_string(q) + ")");
    const auto poles = string_poles(params, q, workers);
    for (std::size_t i = 0; i + 1 < poles.size(); ++i) {
        if ((poles[i].intensity > 0) != (poles[i + 1].intensity > 0))
            return 0.5 * (poles[i].omega + poles[i + 1].omega);
    }
    std::ostringstream msg;
    msg << "no sign change among " << poles.size() << " string poles (N=" << params.n_sites() << ", q=" << q << ")";
    throw not_found(msg.str());
}

}  // namespace magnon
