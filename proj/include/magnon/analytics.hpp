#pragma once

// Closed-form time-domain results: spectral moments, exact even derivatives
// at t = 0, the Taylor / squared-Bessel series, the Bessel transient and the
// entanglement-edge velocity estimator.

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "magnon/chain.hpp"
#include "magnon/errors.hpp"
#include "magnon/numeric.hpp"
#include "magnon/oracle.hpp"
#include "magnon/special.hpp"
#include "magnon/spectrum.hpp"

namespace magnon {

/// sum_j I_j omega_j^{2r}; the even derivative is Q^{(2r)}(0) = (-1)^r times this.
inline double moments(const Spectrum& spectrum, int r) {
    if (r < 0) throw validation_error("moment order must be >= 0");
    CompensatedSum<> acc;
    for (const auto& p : spectrum.poles) {
        const real_ext w2 = static_cast<real_ext>(p.omega) * p.omega;
        real_ext power = 1;
        for (int i = 0; i < r; ++i) power *= w2;
        acc.add(static_cast<real_ext>(p.intensity) * power);
    }
    return static_cast<double>(acc.value());
}

struct DerivativeRecord {
    int q = 0;
    int kbar = 0;
    int order = 0;
    double exact_value = 0.0;
    std::optional<double> moment_value;
    bool exactness_flag = false;  // formula exact only while kbar < q
};

/// Q_q^{(2(q+kbar))}(0) = (J/2hbar)^{2(q+kbar)} (-1)^kbar multinomial(2(q+kbar); kbar, q, q+kbar)
///                       * 2F1(-kbar, -kbar-q; q+1; 1)
inline DerivativeRecord derivative_exact(const ChainParams& params, int q, int kbar) {
    if (q == 0) throw capability_error("derivative formula applies to q >= 1");
    if (q < 0 || kbar < 0) throw validation_error("derivative_exact needs q >= 1 and kbar >= 0");
    const rational coeff = rational(multinomial(kbar, q, q + kbar)) * hyp2f1_terminating(kbar, q);
    DerivativeRecord rec;
    rec.q = q;
    rec.kbar = kbar;
    rec.order = 2 * (q + kbar);
    const real_ext unit = static_cast<real_ext>(params.coupling_j()) / (2 * static_cast<real_ext>(params.hbar()));
    real_ext value = static_cast<real_ext>(coeff) * std::pow(unit, static_cast<real_ext>(rec.order));
    if (kbar % 2) value = -value;
    rec.exact_value = static_cast<double>(value);
    rec.exactness_flag = kbar < q;
    return rec;
}

/// Attach the derivative implied by a full spectrum's moment of the same order.
inline DerivativeRecord with_moment(DerivativeRecord rec, const Spectrum& spectrum) {
    const int r = rec.order / 2;
    const double m = moments(spectrum, r);
    rec.moment_value = (r % 2) ? -m : m;
    return rec;
}

struct TaylorSum {
    double value = 0.0;
    bool warning = false;  // terms still growing at the cutoff
};

/// sum_{kbar<K} C(2(q+kbar), q+kbar) (-1)^kbar / (kbar! (2q+kbar)!) (Jt/2hbar)^{2(q+kbar)}
inline TaylorSum taylor_series(const ChainParams& params, int q, double t, int terms) {
    if (terms < 1) throw validation_error("taylor_series needs at least one term");
    if (q < 0 || !(t >= 0.0)) throw validation_error("taylor_series needs q >= 0 and t >= 0");
    const real_ext x = static_cast<real_ext>(params.coupling_j()) * t / (2 * static_cast<real_ext>(params.hbar()));
    const real_ext x2 = x * x;

    // leading term x^{2q} / (q!)^2
    real_ext term = 1;
    for (int i = 1; i <= q; ++i) term *= (x / i) * (x / i);

    auto next = [&](real_ext current, int k) {
        // ratio of consecutive terms, k -> k+1
        const real_ext n = q + k;
        return -current * x2 * ((2 * n + 2) * (2 * n + 1)) / ((n + 1) * (n + 1)) /
               (static_cast<real_ext>(k + 1) * (2 * q + k + 1));
    };

    CompensatedSum<> acc;
    real_ext last = term;
    for (int k = 0; k < terms; ++k) {
        acc.add(term);
        last = term;
        term = next(term, k);
    }
    return {static_cast<double>(acc.value()), std::abs(term) > std::abs(last)};
}

/// alpha_q J_{2q}(2 J t / hbar)
inline double transient(const ChainParams& params, int q, double t) {
    if (q < 1) throw capability_error("transient approximation applies to q >= 1");
    if (!(t >= 0.0)) throw validation_error("transient needs t >= 0");
    return to_float<double>(alpha(q)) * bessel_j(2 * q, 2.0 * params.coupling_j() * t / params.hbar());
}

struct EdgeEstimate {
    std::string threshold_rule = "first t with Q_q(t) >= 1/(2 pi q), log-log interpolated";
    std::vector<std::pair<int, double>> per_q;  // (q, arrival time)
    double fitted_velocity = 0.0;
    double intercept = 0.0;
    double fit_residual = 0.0;  // rms of arrival-time residuals
};

inline double arrival_threshold(int q) { return 1.0 / (2.0 * pi_ext * q); }

/// Arrival time of the threshold crossing, refined between the bracketing grid points.
inline double arrival_time(const TimeSeries& series) {
    const double thr = arrival_threshold(series.q);
    for (std::size_t i = 0; i < series.values.size(); ++i) {
        if (series.values[i] < thr) continue;
        if (i == 0) return series.times[0];
        const double t0 = series.times[i - 1], t1 = series.times[i];
        const double v0 = series.values[i - 1], v1 = series.values[i];
        if (t0 > 0.0 && v0 > 0.0) {
            const double f = (std::log(thr) - std::log(v0)) / (std::log(v1) - std::log(v0));
            return std::exp(std::log(t0) + f * (std::log(t1) - std::log(t0)));
        }
        return t0 + (thr - v0) / (v1 - v0) * (t1 - t0);
    }
    std::ostringstream msg;
    msg << "threshold 1/(2 pi q) never reached for q=" << series.q << " (t_max=" <<
        (series.times.empty() ? 0.0 : series.times.back()) << ")";
    throw insufficient_data(msg.str());
}

inline EdgeEstimate edge_fit(std::vector<TimeSeries> series, const ChainParams& params) {
    if (series.size() < 2) throw validation_error("edge_fit needs series for at least two q values");
    std::sort(series.begin(), series.end(), [](const TimeSeries& a, const TimeSeries& b) { return a.q < b.q; });
    if (series.front().q < 1) throw validation_error("edge_fit needs q >= 1");
    const int q_max = series.back().q;
    if (params.n_sites() < 8 * q_max)
        throw capability_error("edge_fit needs N >= 8 max(q) (N=" + std::to_string(params.n_sites()) +
                               ", max q=" + std::to_string(q_max) + ")");

    EdgeEstimate est;
    for (const auto& s : series) est.per_q.emplace_back(s.q, arrival_time(s));
    for (std::size_t i = 1; i < est.per_q.size(); ++i)
        if (!(est.per_q[i].second > est.per_q[i - 1].second))
            throw invariant_violation("arrival times not increasing at q=" + std::to_string(est.per_q[i].first));

    const auto n = static_cast<real_ext>(est.per_q.size());
    CompensatedSum<> sq, st;
    for (const auto& [q, t] : est.per_q) {
        sq.add(q);
        st.add(t);
    }
    const real_ext mq = sq.value() / n, mt = st.value() / n;
    CompensatedSum<> sqq, sqt;
    for (const auto& [q, t] : est.per_q) {
        sqq.add((q - mq) * (q - mq));
        sqt.add((q - mq) * (t - mt));
    }
    const real_ext slope = sqt.value() / sqq.value();
    const real_ext intercept = mt - slope * mq;
    CompensatedSum<> ss;
    for (const auto& [q, t] : est.per_q) {
        const real_ext r = t - (intercept + slope * q);
        ss.add(r * r);
    }
    est.fitted_velocity = static_cast<double>(1 / slope);
    est.intercept = static_cast<double>(intercept);
    est.fit_residual = static_cast<double>(std::sqrt(ss.value() / n));
    return est;
}

}  // namespace magnon
