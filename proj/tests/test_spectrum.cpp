#include <cmath>
#include <complex>
#include <map>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "magnon/oracle.hpp"
#include "magnon/spectrum.hpp"

using namespace magnon;

namespace {

// Direct four-fold loop with an explicit p-sum (p != q); frequencies keyed on a
// 1e-9 grid. Shares nothing with the cell enumerator.
std::map<long long, std::complex<double>> brute_force_weights(int n, int q) {
    const int hw = (n - 1) / 2;
    const double th = 2 * std::numbers::pi / n;
    std::map<long long, std::complex<double>> out;
    for (int m1 = -hw; m1 <= hw; ++m1)
        for (int m2 = -hw; m2 <= hw; ++m2)
            for (int m3 = -hw; m3 <= hw; ++m3)
                for (int m4 = -hw; m4 <= hw; ++m4) {
                    const double w = std::cos(th * m2) - std::cos(th * m1) - std::cos(th * m4) + std::cos(th * m3);
                    std::complex<double> sum = 0;
                    for (int p = -hw; p <= hw; ++p) {
                        if (p == q) continue;
                        sum += std::polar(1.0, th * (q * (m1 - m3) + p * (m4 - m2)));
                    }
                    out[std::llround(w * 1e7)] += sum / std::pow(n, 4);
                }
    return out;
}

double oracle_q(const ChainParams& p, int q, double t) {
    return entanglement_from_amplitude(amplitude(p, q, t));
}

}  // namespace

TEST(EnumeratePoles, SmallChainInvariants) {
    const ChainParams p(5, 1.0, 0.0);
    const auto s = enumerate_poles(p, 0, SpectrumMode::full);
    double sum = 0;
    for (const auto& pole : s.poles) {
        sum += pole.intensity;
        EXPECT_LT(std::abs(pole.omega), 4.0);
    }
    EXPECT_NEAR(sum, 0.0, 1e-12);
}

TEST(EnumeratePoles, MatchesBruteForce) {
    for (int n : {5, 7}) {
        for (int q : {0, 1, 2}) {
            const auto ref = brute_force_weights(n, q);
            const auto s = enumerate_poles(ChainParams(n, 1.0, 0.0), q, SpectrumMode::full);
            std::map<long long, double> got;
            for (const auto& pole : s.poles) got[std::llround(pole.omega * 1e7)] += pole.intensity;
            for (const auto& [key, w] : ref) {
                EXPECT_NEAR(w.imag(), 0.0, 1e-14);
                EXPECT_NEAR(got[key], w.real(), 1e-14) << "N=" << n << " q=" << q << " omega=" << key * 1e-7;
            }
            for (const auto& [key, w] : got)
                if (!ref.contains(key)) EXPECT_NEAR(w, 0.0, 1e-14);
        }
    }
}

TEST(EnumeratePoles, ConjugateSymmetryAndBounds) {
    const ChainParams p(33, 1.0, 0.0);
    for (int q : {0, 3}) {
        const auto s = enumerate_poles(p, q, SpectrumMode::full);
        const auto& poles = s.poles;
        for (std::size_t i = 0; i < poles.size(); ++i) {
            const auto& mirror = poles[poles.size() - 1 - i];
            EXPECT_EQ(poles[i].omega, -mirror.omega);
            EXPECT_NEAR(poles[i].intensity, mirror.intensity, 1e-15);
            EXPECT_LT(std::abs(poles[i].omega), 4.0);
            if (poles[i].cls == PoleClass::dominant) EXPECT_LE(std::abs(poles[i].omega), 2.0 + 1e-12);
        }
    }
}

TEST(EnumeratePoles, QZeroDominantLines) {
    // dominant q=0 intensities are whole multiples of N^-4 and fall into two
    // lines near 104 u and 52 u (u = N^-3 - N^-4)
    const int n = 33;
    const auto s = enumerate_poles(ChainParams(n, 1.0, 0.0), 0, SpectrumMode::full);
    const double n4 = std::pow(n, 4);
    const double u = 1.0 / (n * n * n) - 1.0 / n4;
    for (const auto& pole : s.poles) {
        const double k = pole.intensity * n4;
        EXPECT_NEAR(k, std::round(k), 1e-6);
        if (pole.cls != PoleClass::dominant || pole.omega == 0.0) continue;
        const double lines = pole.intensity / u;
        EXPECT_TRUE(std::abs(lines - 104) < 2.5 || std::abs(lines - 52) < 1.5) << lines;
    }
}

TEST(EnumeratePoles, CapabilityAndRange) {
    EXPECT_THROW(enumerate_poles(ChainParams(67, 1.0, 0.0), 0, SpectrumMode::full), capability_error);
    EXPECT_THROW(enumerate_poles(ChainParams(9, 1.0, 0.0), 5, SpectrumMode::full), range_error);
    EXPECT_NO_THROW(enumerate_poles(ChainParams(67, 1.0, 0.0), 0, SpectrumMode::dominant_only));
}

TEST(EnumeratePoles, DeterministicAcrossWorkers) {
    const ChainParams p(21, 1.0, 0.0);
    for (auto mode : {SpectrumMode::full, SpectrumMode::dominant_only}) {
        const auto a = enumerate_poles(p, 3, mode, 1);
        const auto b = enumerate_poles(p, 3, mode, 3);
        ASSERT_EQ(a.poles.size(), b.poles.size());
        for (std::size_t i = 0; i < a.poles.size(); ++i) {
            EXPECT_EQ(a.poles[i].omega, b.poles[i].omega);
            EXPECT_EQ(a.poles[i].intensity, b.poles[i].intensity);
            EXPECT_EQ(a.poles[i].tuple_count, b.poles[i].tuple_count);
        }
    }
}

TEST(EnumeratePoles, DominantModeMatchesFullDominantPoles) {
    // prime N: no accidental frequency coincidences between difference-form and generic tuples
    for (int n : {13, 17, 31}) {
        for (int q : {0, 1, 4}) {
            const ChainParams p(n, 1.0, 0.0);
            const auto full = enumerate_poles(p, q, SpectrumMode::full);
            const auto dom = enumerate_poles(p, q, SpectrumMode::dominant_only);
            std::vector<Pole> expected;
            for (const auto& pole : full.poles)
                if (pole.cls == PoleClass::dominant) expected.push_back(pole);
            ASSERT_EQ(expected.size(), dom.poles.size()) << "N=" << n << " q=" << q;
            for (std::size_t i = 0; i < expected.size(); ++i) {
                EXPECT_NEAR(expected[i].omega, dom.poles[i].omega, 1e-12);
                EXPECT_NEAR(expected[i].intensity, dom.poles[i].intensity, 1e-15);
                EXPECT_EQ(dom.poles[i].cls, PoleClass::dominant);
            }
        }
    }
}

TEST(EnumeratePoles, CompositeNDominantModeDiffersOnlyByCoincidentGenericTuples) {
    // N=15, 33: some generic (m2 != m4) tuples land exactly on a dominant frequency;
    // dominant_only leaves them out. At q=0 each generic tuple weighs -N^-4, so
    // every gap is a whole number of N^-4 units
    for (int n : {15, 33}) {
        const ChainParams p(n, 1.0, 0.0);
        const double unit = 1.0 / std::pow(static_cast<double>(n), 4);
        const auto full = enumerate_poles(p, 0, SpectrumMode::full);
        const auto dom = enumerate_poles(p, 0, SpectrumMode::dominant_only);
        std::vector<Pole> expected;
        for (const auto& pole : full.poles)
            if (pole.cls == PoleClass::dominant) expected.push_back(pole);
        ASSERT_EQ(expected.size(), dom.poles.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            EXPECT_NEAR(expected[i].omega, dom.poles[i].omega, 1e-12);
            EXPECT_LE(dom.poles[i].tuple_count, expected[i].tuple_count);
            const double k = (expected[i].intensity - dom.poles[i].intensity) / unit;
            EXPECT_NEAR(k, std::round(k), 1e-6) << "N=" << n << " omega=" << expected[i].omega;
        }
    }
}

TEST(Reconstruct, MatchesOracle) {
    {
        const ChainParams p(9, 1.0, 0.0);
        const auto s = enumerate_poles(p, 1, SpectrumMode::full);
        for (double t : {0.5, 1.0, 2.0}) EXPECT_NEAR(reconstruct(s, t), oracle_q(p, 1, t), 1e-10);
    }
    const ChainParams p(33, 1.0, 0.25);
    const auto s = enumerate_poles(p, 2, SpectrumMode::full);
    EXPECT_NEAR(reconstruct(s, 0.0), 0.0, 1e-9);
    EXPECT_NEAR(reconstruct(s, 3.0), oracle_q(p, 2, 3.0), 1e-9);
    EXPECT_NEAR(reconstruct(s, 40.0), oracle_q(p, 2, 40.0), 1e-8);
}

TEST(Reconstruct, RejectsDominantOnly) {
    const auto s = enumerate_poles(ChainParams(9, 1.0, 0.0), 1, SpectrumMode::dominant_only);
    EXPECT_THROW(reconstruct(s, 1.0), capability_error);
}

TEST(Classify, HighFrequenciesAreSuppressed) {
    const auto s = classify(enumerate_poles(ChainParams(33, 1.0, 0.0), 0, SpectrumMode::full));
    std::size_t dominant = 0;
    for (const auto& pole : s.poles) {
        if (std::abs(pole.omega) > 2.0) EXPECT_EQ(pole.cls, PoleClass::suppressed);
        dominant += pole.cls == PoleClass::dominant;
    }
    EXPECT_GT(dominant, 0u);
    EXPECT_LT(dominant, s.poles.size());
}

TEST(Classify, LargestPoleIsDominant) {
    const auto s = classify(enumerate_poles(ChainParams(9, 1.0, 0.0), 1, SpectrumMode::full));
    const Pole* largest = &s.poles.front();
    for (const auto& pole : s.poles)
        if (std::abs(pole.intensity) > std::abs(largest->intensity)) largest = &pole;
    EXPECT_EQ(largest->cls, PoleClass::dominant);
}

TEST(Classify, PerPoleSuppressionShrinksWithN) {
    // individual suppressed poles scale like N^-4 against N^-3 dominant ones
    auto largest_suppressed = [](int n) {
        const auto s = enumerate_poles(ChainParams(n, 1.0, 0.0), 2, SpectrumMode::full);
        double worst = 0;
        for (const auto& pole : s.poles)
            if (pole.cls == PoleClass::suppressed) worst = std::max(worst, std::abs(pole.intensity));
        return worst;
    };
    EXPECT_GT(largest_suppressed(17) / largest_suppressed(33), 2.5);
}

TEST(SuppressedTail, AgreesWithFullSpectrum) {
    const ChainParams p(21, 1.0, 0.0);
    const auto s = enumerate_poles(p, 1, SpectrumMode::full);
    double tail = 0;
    for (const auto& pole : s.poles)
        if (pole.cls == PoleClass::suppressed && std::abs(pole.omega) > 2.0) tail += std::abs(pole.intensity);
    EXPECT_NEAR(suppressed_tail_intensity(p, 1), tail, 1e-13);
    EXPECT_THROW(suppressed_tail_intensity(ChainParams(103, 1.0, 0.0), 0), capability_error);
}

TEST(StringPoles, FrequencyParametrization) {
    const ChainParams p(101, 1.0, 0.0);
    const auto poles = string_poles(p, 3);
    ASSERT_FALSE(poles.empty());
    for (std::size_t i = 0; i < poles.size(); ++i) {
        const auto& s = poles[i];
        const double w = 2 * std::cos(std::numbers::pi * s.epsilon_exact / 101) *
                         std::cos(std::numbers::pi * s.delta_exact / 101);
        EXPECT_NEAR(s.omega, w, 1e-12);
        EXPECT_LE(std::abs(s.epsilon - s.epsilon_exact), 0.5);
        if (i > 0) EXPECT_LE(s.omega, poles[i - 1].omega);
    }
    // eps, delta -> 0 reaches the cutoff
    EXPECT_NEAR(2 * std::cos(0.0) * std::cos(0.0), 2.0, 0.0);
    EXPECT_NEAR(poles.front().omega, 2.0, 1e-3);
    EXPECT_EQ(poles.front().m1_abs, 50);
    EXPECT_EQ(poles.front().m3_abs, 0);
}

TEST(StringPoles, LeadingSignAlternatesWithQ) {
    const ChainParams p(101, 1.0, 0.0);
    for (int q = 1; q <= 6; ++q) {
        const auto poles = string_poles(p, q);
        EXPECT_EQ(poles.front().intensity > 0, q % 2 == 0) << "q=" << q;
    }
}

TEST(StringPoles, IntensityFollowsCosineForm) {
    // exact weights regressed on cos(2 pi q eps/N) + cos(2 pi q delta/N) with one constant
    const int n = 201, q = 4;
    const auto poles = string_poles(ChainParams(n, 1.0, 0.0), q);
    double sxx = 0, syy = 0, sxy = 0, sx = 0, sy = 0;
    for (const auto& s : poles) {
        const double x = std::cos(2 * std::numbers::pi * q * s.epsilon_exact / n) +
                         std::cos(2 * std::numbers::pi * q * s.delta_exact / n);
        const double y = s.intensity / s.degeneracy;
        sx += x; sy += y; sxx += x * x; syy += y * y; sxy += x * y;
    }
    const double k = static_cast<double>(poles.size());
    const double corr = (sxy - sx * sy / k) / std::sqrt((sxx - sx * sx / k) * (syy - sy * sy / k));
    EXPECT_GE(std::abs(corr), 0.999);
}

TEST(StringPoles, Errors) {
    EXPECT_THROW(string_poles(ChainParams(33, 1.0, 0.0), 0), capability_error);
    EXPECT_THROW(first_zero_crossing(ChainParams(33, 1.0, 0.0), 1), capability_error);
    EXPECT_THROW(first_zero_crossing(ChainParams(33, 1.0, 0.0), 5), capability_error);
}

TEST(FirstZeroCrossing, MonotoneInQ) {
    const ChainParams p(101, 1.0, 0.0);
    double prev = 0;
    for (int q = 2; q <= 6; ++q) {
        const double w = first_zero_crossing(p, q);
        EXPECT_GT(w, prev);
        EXPECT_NEAR(w / (2 * std::pow(std::cos(std::numbers::pi / (4 * q)), 2)), 1.0, 0.03);
        prev = w;
    }
}
