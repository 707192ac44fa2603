#pragma once

// Ground-truth entanglement of single spins, computed without the pole
// spectrum: the closed-form amplitude route, a dense ODE integration of the
// one-magnon Hamiltonian, and a full 2^N diagonalization for tiny chains.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <boost/numeric/odeint.hpp>

#include "magnon/chain.hpp"
#include "magnon/errors.hpp"
#include "magnon/numeric.hpp"

namespace magnon {

struct TimeSeries {
    int q = 0;
    ChainParams params;
    std::vector<double> times;
    std::vector<double> values;
};

/// det of the spin's reduced density matrix, |c|^2 (1 - |c|^2).
inline double entanglement_from_amplitude(std::complex<double> c) {
    constexpr double slack = 1e-12;
    const double a = std::abs(c);
    if (!(a <= 1.0 + slack)) {
        std::ostringstream msg;
        msg << "amplitude magnitude " << a << " exceeds 1";
        throw invariant_violation(msg.str());
    }
    const double p = std::norm(c);
    double det = p * (1.0 - p);
    if (det < 0.0 && det > -slack) det = 0.0;
    if (det > 0.25 && det < 0.25 + slack) det = 0.25;
    return det;
}

namespace detail {

inline void check_time_grid(const std::vector<double>& times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0)) throw validation_error("time grid must be nonnegative");
        if (i > 0 && !(times[i] > times[i - 1])) throw validation_error("time grid must be strictly increasing");
    }
}

}  // namespace detail

inline TimeSeries evolve_closed_form(const ChainParams& params, int q, const std::vector<double>& times) {
    detail::check_time_grid(times);
    TimeSeries out{q, params, times, {}};
    out.values.reserve(times.size());
    for (double t : times) out.values.push_back(entanglement_from_amplitude(amplitude(params, q, t)));
    return out;
}

/// Dense one-magnon Hamiltonian in the site basis: JDelta on the diagonal,
/// -J/2 between nearest neighbours, periodic wrap.
inline Eigen::MatrixXd one_magnon_hamiltonian(const ChainParams& params) {
    const int n = params.n_sites();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        h(i, i) = params.coupling_j() * params.anisotropy_delta();
        const int j = (i + 1) % n;
        h(i, j) += -0.5 * params.coupling_j();
        h(j, i) += -0.5 * params.coupling_j();
    }
    return h;
}

/// Integrates i hbar dc/dt = H c from c_p(0) = delta_{p,0}.
inline AmplitudeVector evolve_dense(const ChainParams& params, double t) {
    namespace odeint = boost::numeric::odeint;
    if (!(t >= 0.0)) throw validation_error("evolve_dense requires t >= 0");

    const int n = params.n_sites();
    const int hw = params.half_width();
    const Eigen::MatrixXd h = one_magnon_hamiltonian(params) / params.hbar();

    // state layout: [Re c_0..c_{N-1}, Im c_0..c_{N-1}], site p at index p + hw
    using state_type = std::vector<double>;
    state_type state(2 * n, 0.0);
    state[hw] = 1.0;

    auto rhs = [&h, n](const state_type& x, state_type& dxdt, double) {
        Eigen::Map<const Eigen::VectorXd> re(x.data(), n);
        Eigen::Map<const Eigen::VectorXd> im(x.data() + n, n);
        Eigen::Map<Eigen::VectorXd> dre(dxdt.data(), n);
        Eigen::Map<Eigen::VectorXd> dim(dxdt.data() + n, n);
        // d(re + i im)/dt = -i H (re + i im)
        dre.noalias() = h * im;
        dim.noalias() = -(h * re);
    };

    if (t > 0.0) {
        using stepper_type = odeint::runge_kutta_fehlberg78<state_type>;
        constexpr double tol = 1e-12;
        std::size_t steps = 0;
        try {
            steps = odeint::integrate_adaptive(odeint::make_controlled<stepper_type>(tol, tol), rhs, state, 0.0, t,
                                               std::min(0.01, t));
        } catch (const std::exception& e) {
            std::ostringstream msg;
            msg << "dense integration failed at N=" << n << ", t=" << t << ": " << e.what();
            throw numerical_error(msg.str());
        }
        (void)steps;
    }

    AmplitudeVector out;
    out.time = t;
    out.entries.resize(n);
    for (int i = 0; i < n; ++i) out.entries[i] = {state[i], state[i + n]};

    const double drift = std::abs(out.norm_squared() - 1.0);
    if (drift >= 1e-10) {
        std::ostringstream msg;
        msg << "dense integration lost unitarity: |norm^2 - 1| = " << drift << " at t=" << t;
        throw numerical_error(msg.str());
    }
    const double scale = 1.0 / std::sqrt(out.norm_squared());
    for (auto& c : out.entries) c *= scale;
    return out;
}

/// Reduced 2x2 density matrices of every spin, from the full 2^N evolution.
struct ReducedDensityMatrices {
    double time = 0.0;
    int half_width = 0;
    std::vector<Eigen::Matrix2cd> rho;  // index q + half_width

    const Eigen::Matrix2cd& at_site(int q) const { return rho.at(q + half_width); }
};

/// Full Hamiltonian of the XXZ chain on 2^N states; bit (p + hw) set means spin p is up.
inline Eigen::MatrixXd full_hamiltonian(const ChainParams& params) {
    const int n = params.n_sites();
    const std::size_t dim = std::size_t{1} << n;
    const double j = params.coupling_j();
    const double delta = params.anisotropy_delta();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t s = 0; s < dim; ++s) {
        for (int i = 0; i < n; ++i) {
            const int k = (i + 1) % n;
            const bool up_i = (s >> i) & 1U;
            const bool up_k = (s >> k) & 1U;
            const double szsz = (up_i == up_k) ? 0.25 : -0.25;
            h(s, s) += -j * delta * (szsz - 0.25);
            if (up_i != up_k) {
                // SxSx + SySy = (S+S- + S-S+)/2 flips an antiparallel pair
                const std::size_t flipped = s ^ (std::size_t{1} << i) ^ (std::size_t{1} << k);
                h(flipped, s) += -0.5 * j;
            }
        }
    }
    return h;
}

inline ReducedDensityMatrices full_hilbert_check(const ChainParams& params, double t) {
    const int n = params.n_sites();
    if (n > 8) throw capability_error("full_hilbert_check supports N <= 8, got N=" + std::to_string(n));
    const int hw = params.half_width();
    const std::size_t dim = std::size_t{1} << n;

    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(full_hamiltonian(params));
    if (eig.info() != Eigen::Success) throw numerical_error("full Hamiltonian diagonalization failed");

    // |F> is all spins down (state 0); flip site 0 up.
    Eigen::VectorXcd psi0 = Eigen::VectorXcd::Zero(dim);
    psi0(std::size_t{1} << hw) = 1.0;

    const Eigen::MatrixXcd v = eig.eigenvectors().cast<std::complex<double>>();
    Eigen::VectorXcd coeff = v.adjoint() * psi0;
    for (Eigen::Index k = 0; k < coeff.size(); ++k) {
        const double phase = -eig.eigenvalues()(k) * t / params.hbar();
        coeff(k) *= std::complex<double>(std::cos(phase), std::sin(phase));
    }
    const Eigen::VectorXcd psi = v * coeff;

    ReducedDensityMatrices out;
    out.time = t;
    out.half_width = hw;
    out.rho.assign(n, Eigen::Matrix2cd::Zero());
    for (int bit = 0; bit < n; ++bit) {
        Eigen::Matrix2cd& rho = out.rho[bit];
        const std::size_t mask = std::size_t{1} << bit;
        for (std::size_t s = 0; s < dim; ++s) {
            if (s & mask) continue;
            // s: spin down at `bit`; s|mask: spin up. Basis order (up, down).
            const auto down = psi(s);
            const auto up = psi(s | mask);
            rho(0, 0) += up * std::conj(up);
            rho(0, 1) += up * std::conj(down);
            rho(1, 0) += down * std::conj(up);
            rho(1, 1) += down * std::conj(down);
        }
    }
    return out;
}

struct PowerLawFit {
    double exponent = 0.0;
    double prefactor = 0.0;
    std::size_t points = 0;
};

/// Least-squares fit of log Q against log t on the transient window: values in
/// [1e-12, 1e-8] taken from the rising segment before Q first exceeds 1e-8.
inline PowerLawFit leading_exponent_fit(const TimeSeries& series) {
    constexpr double lo = 1e-12;
    constexpr double hi = 1e-8;
    std::vector<real_ext> xs;
    std::vector<real_ext> ys;
    for (std::size_t i = 0; i < series.times.size(); ++i) {
        const double v = series.values.at(i);
        if (v > hi) break;
        if (series.times[i] > 0.0 && v >= lo) {
            xs.push_back(std::log(static_cast<real_ext>(series.times[i])));
            ys.push_back(std::log(static_cast<real_ext>(v)));
        }
    }
    if (xs.size() < 8)
        throw insufficient_data("transient window [1e-12, 1e-8] holds " + std::to_string(xs.size()) +
                                " points, need >= 8");

    const auto n = static_cast<real_ext>(xs.size());
    CompensatedSum<> sx, sy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sx.add(xs[i]);
        sy.add(ys[i]);
    }
    const real_ext mx = sx.value() / n;
    const real_ext my = sy.value() / n;
    CompensatedSum<> sxx, sxy;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx.add((xs[i] - mx) * (xs[i] - mx));
        sxy.add((xs[i] - mx) * (ys[i] - my));
    }
    const real_ext slope = sxy.value() / sxx.value();
    const real_ext intercept = my - slope * mx;
    return {static_cast<double>(slope), static_cast<double>(std::exp(intercept)), xs.size()};
}

}  // namespace magnon
