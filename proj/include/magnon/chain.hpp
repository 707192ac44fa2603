#pragma once

// Periodic spin-1/2 XXZ chain restricted to the one-magnon sector:
// parameters, momentum grid, dispersion E(K) = J (Delta - cos K) and the
// plane-wave amplitudes c_q(t) of the state S_0^+ |F>.

#include <cmath>
#include <complex>
#include <string>
#include <vector>

#include "magnon/errors.hpp"
#include "magnon/numeric.hpp"

namespace magnon {

class ChainParams {
public:
    ChainParams(int n_sites, double coupling_j, double anisotropy_delta, double hbar = 1.0)
        : n_sites_(n_sites), coupling_j_(coupling_j), anisotropy_delta_(anisotropy_delta), hbar_(hbar) {
        if (n_sites < 3 || n_sites % 2 == 0)
            throw validation_error("n_sites must be odd and >= 3, got " + std::to_string(n_sites));
        if (!(coupling_j > 0.0) || !std::isfinite(coupling_j))
            throw validation_error("coupling_j must be positive and finite");
        if (!(hbar > 0.0) || !std::isfinite(hbar))
            throw validation_error("hbar must be positive and finite");
        if (!std::isfinite(anisotropy_delta))
            throw validation_error("anisotropy_delta must be finite");
    }

    int n_sites() const { return n_sites_; }
    double coupling_j() const { return coupling_j_; }
    double anisotropy_delta() const { return anisotropy_delta_; }
    double hbar() const { return hbar_; }

    /// Largest site / mode index; sites run over [-half_width, half_width].
    int half_width() const { return (n_sites_ - 1) / 2; }
    bool contains_site(int q) const { return q >= -half_width() && q <= half_width(); }

    /// J/hbar in sites per unit time (lattice spacing 1).
    double group_velocity() const { return coupling_j_ / hbar_; }

    /// J/hbar, the natural frequency unit.
    double frequency_unit() const { return coupling_j_ / hbar_; }

    friend bool operator==(const ChainParams&, const ChainParams&) = default;

private:
    int n_sites_;
    double coupling_j_;
    double anisotropy_delta_;
    double hbar_;
};

struct MomentumMode {
    int m;
    double momentum_k;
    double energy;
};

inline double group_velocity(const ChainParams& params) { return params.group_velocity(); }

inline real_ext momentum_of(const ChainParams& params, int m) {
    return 2 * pi_ext * m / params.n_sites();
}

inline real_ext dispersion(const ChainParams& params, real_ext k) {
    return static_cast<real_ext>(params.coupling_j()) * (params.anisotropy_delta() - std::cos(k));
}

inline std::vector<MomentumMode> momenta(const ChainParams& params) {
    std::vector<MomentumMode> modes;
    modes.reserve(params.n_sites());
    for (int m = -params.half_width(); m <= params.half_width(); ++m) {
        // cos(K) evaluated at |m| so that E(m) == E(-m) bitwise
        const real_ext k = momentum_of(params, m);
        const real_ext e = dispersion(params, momentum_of(params, std::abs(m)));
        modes.push_back({m, static_cast<double>(k), static_cast<double>(e)});
    }
    return modes;
}

/// Site-indexed complex amplitudes c_p, p = -half_width .. half_width.
struct AmplitudeVector {
    double time = 0.0;
    std::vector<std::complex<double>> entries;

    int half_width() const { return static_cast<int>(entries.size() - 1) / 2; }
    const std::complex<double>& at_site(int p) const { return entries.at(p + half_width()); }

    double norm_squared() const {
        CompensatedSum<> acc;
        for (const auto& c : entries) acc.add(std::norm(std::complex<real_ext>(c.real(), c.imag())));
        return static_cast<double>(acc.value());
    }
};

namespace detail {

// Per-mode phases exp(-i E(K_m) t / hbar) with the global Delta phase dropped:
// |c_q| does not depend on Delta, and the remaining phase is applied once.
inline std::vector<std::complex<real_ext>> mode_phases(const ChainParams& params, double t) {
    const int hw = params.half_width();
    const real_ext omega = static_cast<real_ext>(params.coupling_j()) / params.hbar();
    std::vector<std::complex<real_ext>> phases;
    phases.reserve(params.n_sites());
    for (int m = -hw; m <= hw; ++m) {
        const real_ext arg = omega * std::cos(momentum_of(params, std::abs(m))) * static_cast<real_ext>(t);
        phases.emplace_back(std::cos(arg), std::sin(arg));
    }
    return phases;
}

inline std::complex<real_ext> delta_phase(const ChainParams& params, double t) {
    const real_ext arg = -static_cast<real_ext>(params.coupling_j()) * params.anisotropy_delta() *
                         static_cast<real_ext>(t) / params.hbar();
    return {std::cos(arg), std::sin(arg)};
}

inline std::complex<real_ext> site_amplitude(const ChainParams& params,
                                             const std::vector<std::complex<real_ext>>& phases, int q) {
    const int hw = params.half_width();
    const int n = params.n_sites();
    // c_q = c_{-q} for the symmetric initial state; evaluate at |q| so both agree bitwise
    q = std::abs(q);
    CompensatedComplexSum<> acc;
    for (int m = -hw; m <= hw; ++m) {
        // exp(i K_m q), reduced mod N so large |m q| keeps full precision
        const int r = ((m * q) % n + n) % n;
        const real_ext arg = 2 * pi_ext * r / n;
        acc.add(phases[m + hw] * std::complex<real_ext>(std::cos(arg), std::sin(arg)));
    }
    return acc.value() / static_cast<real_ext>(n);
}

}  // namespace detail

/// c_q(t) = (1/N) sum_m exp(-i E(K_m) t / hbar) exp(i K_m q).
inline std::complex<double> amplitude(const ChainParams& params, int q, double t) {
    if (!params.contains_site(q))
        throw range_error("site index " + std::to_string(q) + " outside [-" +
                          std::to_string(params.half_width()) + ", " + std::to_string(params.half_width()) + "]");
    const auto phases = detail::mode_phases(params, t);
    const auto c = detail::site_amplitude(params, phases, q) * detail::delta_phase(params, t);
    return {static_cast<double>(c.real()), static_cast<double>(c.imag())};
}

/// All N amplitudes at time t.
inline AmplitudeVector amplitudes(const ChainParams& params, double t) {
    const auto phases = detail::mode_phases(params, t);
    const auto global = detail::delta_phase(params, t);
    AmplitudeVector out;
    out.time = t;
    out.entries.reserve(params.n_sites());
    for (int q = -params.half_width(); q <= params.half_width(); ++q) {
        const auto c = detail::site_amplitude(params, phases, q) * global;
        out.entries.emplace_back(static_cast<double>(c.real()), static_cast<double>(c.imag()));
    }
    return out;
}

}  // namespace magnon
