#include <gtest/gtest.h>

#include <cmath>

#include "apfoe/channel.hpp"
#include "apfoe/errors.hpp"
#include "apfoe/foe.hpp"
#include "apfoe/harness.hpp"

using namespace apfoe;

namespace {

constexpr double kRs = 28e9;
constexpr double kTs = 1.0 / kRs;
const EstimatorParams kP{512, 256, kTs};

// Spacing of the 4th-power DFT grid, expressed as an offset f_d.
constexpr double kBin = 1.0 / (4 * 512 * kTs);

SymbolSequence tone(double f_d, std::size_t n = 1535, double phase = 0.3) {
    return apply_carrier({CVec(n, cplx(1, 0)), kTs}, f_d, phase);
}

SymbolSequence qam(double f_d, std::size_t n = 1535, int order = 16) {
    return apply_carrier(generate_symbols(build_constellation(order), n, 42, kTs), f_d, 0.1);
}

} // namespace

TEST(Names, RoundTrip) {
    for (auto a : {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft, Algorithm::Diff})
        EXPECT_EQ(parse_algorithm(to_string(a)), a);
    EXPECT_FALSE(parse_algorithm("bogus").has_value());
}

TEST(Params, Validation) {
    EXPECT_THROW((EstimatorParams{500, 256, kTs}.validate()), std::invalid_argument);
    EXPECT_THROW((EstimatorParams{512, 3, kTs}.validate()), std::invalid_argument);
    EXPECT_THROW((EstimatorParams{512, 256, 0.0}.validate()), std::invalid_argument);
    EXPECT_EQ(samples_required(Algorithm::ApFft, kP), 1535u);
    EXPECT_EQ(samples_required(Algorithm::Czt, kP), 512u);
    EXPECT_EQ(samples_required(Algorithm::Diff, kP), 2u);
}

TEST(FftFoe, OnBinQamExact) {
    const double f_d = 10 * kBin;
    const auto r = fft_foe(qam(f_d), kP);
    EXPECT_NEAR(r.f_hat, f_d, 1e-3);
    EXPECT_EQ(r.k_hat, 10);
    EXPECT_EQ(r.delta, 0.0);
}

TEST(FftFoe, QuantizationBound) {
    const double f_d = 10.4 * kBin;
    EXPECT_LE(std::abs(fft_foe(qam(f_d), kP).f_hat - f_d), 0.5 * kBin);
}

TEST(FftFoe, NegativeOffset) {
    const auto r = fft_foe(qam(-2e9), kP);
    EXPECT_LT(r.f_hat, 0.0);
    EXPECT_LE(std::abs(r.f_hat + 2e9), 0.5 * kBin);
    EXPECT_LT(r.k_hat, 0);
}

TEST(FftFoe, Errors) {
    EXPECT_THROW(fft_foe(tone(0.0, 100), kP), InsufficientSamples);
    EXPECT_THROW(fft_foe({CVec(512), kTs}, kP), DegenerateInput);
}

TEST(ApFftFoe, FractionalToneExact) {
    const double f_d = 25.3 * kBin;
    const auto r = apfft_foe(tone(f_d), kP);
    EXPECT_EQ(r.k_hat, 25);
    EXPECT_NEAR(r.delta, 0.3, 1e-6);
    EXPECT_LT(std::abs(r.f_hat - f_d), 1.0);
}

TEST(ApFftFoe, ZeroOffset) {
    const auto r = apfft_foe(tone(0.0), kP);
    EXPECT_EQ(r.k_hat, 0);
    EXPECT_NEAR(r.delta, 0.0, 1e-12);
    EXPECT_NEAR(r.f_hat, 0.0, 1e-3);
}

TEST(ApFftFoe, IdentityHoldsExactly) {
    for (double f_d : {-3.4e9, -1.23e9, 0.0, 7.7e8, 3.45e9}) {
        const auto r = apfft_foe(qam(f_d), kP);
        EXPECT_DOUBLE_EQ(r.f_hat * 4 * 512 * kTs, static_cast<double>(r.k_hat) + r.delta);
        EXPECT_GT(r.delta, -0.5);
        EXPECT_LE(r.delta, 0.5);
    }
}

TEST(ApFftFoe, RangeNoiseFree) {
    const double step = 50e6;
    for (double f_d = -kRs / 8 + step; f_d < kRs / 8; f_d += 97e6)
        EXPECT_LT(std::abs(apfft_foe(tone(f_d), kP).f_hat - f_d), 1e-6 * kRs) << f_d;
}

TEST(ApFftFoe, AliasesBeyondRange) {
    const double f_d = kRs / 8 + 3e8;
    const auto r = apfft_foe(tone(f_d), kP);
    EXPECT_NEAR(r.f_hat, f_d - kRs / 4, 1e-6 * kRs);
}

TEST(ApFftFoe, LiteralModeMatchesOnCleanTone) {
    const double f_d = -40.2 * kBin;
    const auto lit = apfft_foe(tone(f_d), kP, ApFftOptions{false, false});
    const auto def = apfft_foe(tone(f_d), kP);
    EXPECT_NEAR(lit.f_hat, def.f_hat, 1.0);
    // With delta dropped, the literal estimator reduces to fft_foe's coarse peak.
    EXPECT_EQ(lit.k_hat, fft_foe(tone(f_d), kP).k_hat);
}

TEST(ApFftFoe, ResolvesHalfBinAmbiguity) {
    // Right at a half bin the argmax and the phase wrap can disagree; the
    // resolved estimator must still land on the true frequency.
    for (double frac : {0.49, 0.5, -0.49}) {
        const double f_d = (30 + frac) * kBin;
        EXPECT_LT(std::abs(apfft_foe(tone(f_d), kP).f_hat - f_d), 1e-6 * kRs) << frac;
    }
}

TEST(ApFftFoe, Errors) {
    try {
        apfft_foe(tone(0.0, 1000), kP);
        FAIL();
    } catch (const InsufficientSamples& e) {
        EXPECT_EQ(e.needed(), 1535u);
        EXPECT_EQ(e.got(), 1000u);
        EXPECT_NE(std::string(e.what()).find("1000"), std::string::npos);
    }
    EXPECT_THROW(apfft_foe({CVec(1535), kTs}, kP), DegenerateInput);
}

TEST(CztFoe, OnBinMatchesFft) {
    const auto s = tone(12 * kBin);
    EXPECT_DOUBLE_EQ(czt_foe(s, kP).f_hat, fft_foe(s, kP).f_hat);
}

TEST(CztFoe, FineGridBound) {
    const double fine = 2.0 / (512 * 256 * kTs) / 4;
    for (double frac : {0.13, 0.37, -0.41}) {
        const double f_d = (-17 + frac) * kBin;
        EXPECT_LE(std::abs(czt_foe(tone(f_d), kP).f_hat - f_d), 0.5 * fine + 1e-3) << frac;
    }
}

TEST(ZoomFftFoe, OnBin) {
    const double f_d = 21 * kBin;
    EXPECT_NEAR(zoomfft_foe(tone(f_d), kP).f_hat, f_d, 1e-6 * kBin);
}

TEST(ZoomFftFoe, HalfBinBeatsFft) {
    const double f_d = 21.5 * kBin;
    const auto s = tone(f_d);
    EXPECT_LT(std::abs(zoomfft_foe(s, kP).f_hat - f_d), std::abs(fft_foe(s, kP).f_hat - f_d));
}

TEST(ZoomFftFoe, RequiresHalfLength) {
    EXPECT_THROW(zoomfft_foe(tone(0.0), EstimatorParams{512, 128, kTs}), std::invalid_argument);
}

TEST(DiffFoe, PureTone) { EXPECT_NEAR(diff_foe(tone(1e9)).f_hat, 1e9, 1e3); }

TEST(DiffFoe, CornerSymbolsZero) {
    CVec s(200);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::polar(1.0, (0.25 + 0.5 * (i % 4)) * 3.141592653589793);
    EXPECT_NEAR(diff_foe({s, kTs}).f_hat, 0.0, 1e-3);
    EXPECT_THROW(diff_foe({CVec(1), kTs}), InsufficientSamples);
}

TEST(Properties, ConjugationAntisymmetry) {
    for (auto a : {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft, Algorithm::Diff}) {
        for (double f_d : {1.3e9, 11.25 * kBin}) {
            auto s = tone(f_d);
            auto c = s;
            for (auto& v : c.samples) v = std::conj(v);
            const double tol = a == Algorithm::Fft ? 0.5 * kBin : 1e-3 * kBin;
            EXPECT_NEAR(estimate(a, c, kP).f_hat, -estimate(a, s, kP).f_hat, tol) << to_string(a);
        }
    }
}

TEST(Properties, ScaleInvariance) {
    const auto s = qam(8.7e8);
    for (auto a : {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft, Algorithm::Diff}) {
        const double ref = estimate(a, s, kP).f_hat;
        for (double c : {1e-3, 1e3, -1.0}) {
            auto t = s;
            for (auto& v : t.samples) v *= c;
            EXPECT_NEAR(estimate(a, t, kP).f_hat, ref, 1e-12 * kRs) << to_string(a) << " " << c;
        }
    }
}

TEST(Properties, PairedCoarsePeak) {
    // Two-stage estimators refine the same coarse peak as fft_foe.
    const auto s = qam(-1.1e9);
    const auto f = fft_foe(s, kP);
    EXPECT_DOUBLE_EQ(czt_foe(s, kP).f_coarse, f.f_coarse);
    EXPECT_DOUBLE_EQ(zoomfft_foe(s, kP).f_coarse, f.f_coarse);
}

TEST(Baselines, DiffWorseThanApFftFor64Qam) {
    SweepConfig c = default_sweep_config(64);
    c.algorithms = {Algorithm::ApFft, Algorithm::Diff};
    c.osnr_values = {24.0};
    double ap = 0.0, df = 0.0;
    for (std::size_t i = 0; i < c.offsets.size(); i += 7)
        for (std::size_t t = 0; t < 5; ++t) {
            const auto recs = run_trial(c, c.offsets[i], 24.0, {i, 0, t});
            ap += recs[0].normalized_sq_error;
            df += recs[1].normalized_sq_error;
        }
    EXPECT_GT(df, 10 * ap);
}
