// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "apfoe/complexity.hpp"
#include "apfoe/foe.hpp"
#include "apfoe/harness.hpp"
#include "apfoe/rng.hpp"
#include "apfoe/spectral.hpp"

using namespace apfoe;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

int failures = 0;

void report(int id, bool ok, const std::string& what, const std::string& detail) {
    std::printf("%s [%d] %s -- %s\n", ok ? "PASS" : "FAIL", id, what.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

std::string fmtd(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double wrap_pi(double x) { return std::remainder(x, kTwoPi); }

// ---------------------------------------------------------------------------

void criterion1() {
    const auto a = build_report(512, 256);
    const auto b = build_report(1024, 512);
    const bool exact = a.mul_czt == 52353 && a.mul_zoomfft == 20480 && a.mul_apfft == 14334
                       && b.mul_czt == 113563 && b.mul_zoomfft == 44032 && b.mul_apfft == 30718;
    bool pct = true;
    for (const auto& r : {a, b})
        pct = pct && std::abs(100.0 * r.reduction_vs_czt - 73.0) <= 1.0
              && std::abs(100.0 * r.reduction_vs_zoomfft - 30.0) <= 1.0;
    char d[256];
    std::snprintf(d, sizeof d, "%llu/%llu/%llu, %llu/%llu/%llu; reductions %.1f%%/%.1f%%, %.1f%%/%.1f%%",
                  (unsigned long long)a.mul_czt, (unsigned long long)a.mul_zoomfft,
                  (unsigned long long)a.mul_apfft, (unsigned long long)b.mul_czt,
                  (unsigned long long)b.mul_zoomfft, (unsigned long long)b.mul_apfft,
                  100 * a.reduction_vs_czt, 100 * a.reduction_vs_zoomfft, 100 * b.reduction_vs_czt,
                  100 * b.reduction_vs_zoomfft);
    report(1, exact && pct, "complexity table bit-exact", d);
}

void criterion2() {
    SweepConfig c = default_sweep_config(16);
    c.source = SignalSource::Tone;
    c.linewidth_per_laser = 0.0;
    c.algorithms = {Algorithm::ApFft};
    Rng rng(derive_seed({kSeed, 2}));
    std::uniform_real_distribution<double> u(-c.symbol_rate / 8.0, c.symbol_rate / 8.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < 50; ++i) {
        const double f_d = u(rng);
        const auto rx = simulate_received(c, f_d, std::numeric_limits<double>::infinity(), {i, 0, 0});
        const auto r = apfft_foe(rx, c.estimator_params());
        worst = std::max(worst, std::abs(r.f_hat - f_d));
    }
    const double limit = 1e-6 * c.symbol_rate;
    report(2, worst < limit, "noise-free apfft exactness (50 offsets)",
           fmtd("max |error| = %.3e Hz", worst) + fmtd(" (limit %.1e Hz)", limit));
}

void criterion3() {
    const std::size_t n = 512;
    const auto w = build_allphase_window(n);
    Rng rng(derive_seed({kSeed, 3}));
    std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
    double worst = 0.0;
    for (double delta : {-0.45, -0.3, 0.0, 0.3, 0.45}) {
        for (long k0 : {-100L, 3L, 57L}) {
            const double theta = u(rng);
            const double bins = static_cast<double>(k0) + delta;
            CVec x(2 * n - 1);
            for (std::size_t i = 0; i < x.size(); ++i)
                x[i] = std::polar(1.0, kTwoPi * bins * static_cast<double>(i) / static_cast<double>(n) + theta);
            const auto y = apfft(x, w);
            std::size_t peak = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (std::abs(y.bins[i]) > std::abs(y.bins[peak])) peak = i;
            const double centre = std::arg(x[n - 1]);
            worst = std::max(worst, std::abs(wrap_pi(std::arg(y.bins[peak]) - centre)));
        }
    }
    report(3, worst < 1e-9, "apFFT peak phase equals centre-sample phase",
           fmtd("max phase error = %.3e rad", worst));
}

CVec direct_czt(const CVec& x, double start, double step, std::size_t m) {
    CVec out(m);
    for (std::size_t k = 0; k < m; ++k) {
        std::complex<long double> acc{};
        const long double f = static_cast<long double>(start) + static_cast<long double>(k) * step;
        for (std::size_t i = 0; i < x.size(); ++i) {
            const long double ph = -2.0L * std::numbers::pi_v<long double> * f * static_cast<long double>(i);
            acc += std::complex<long double>(x[i]) * std::polar(1.0L, ph);
        }
        out[k] = cplx(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
    }
    return out;
}

double rel_err(const CVec& a, const CVec& b) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        num = std::max(num, std::abs(a[i] - b[i]));
        den = std::max(den, std::abs(b[i]));
    }
    return num / den;
}

void criterion4() {
    Rng rng(derive_seed({kSeed, 4}));
    std::normal_distribution<double> g;
    std::uniform_int_distribution<int> len(1, 64), lg(0, 6);
    std::uniform_real_distribution<double> u(-0.5, 0.5);
    double worst_dft = 0.0, worst_czt = 0.0;
    for (int t = 0; t < 200; ++t) {
        const std::size_t n = std::size_t{1} << lg(rng);
        CVec x(n);
        for (auto& v : x) v = {g(rng), g(rng)};
        worst_dft = std::max(worst_dft, rel_err(dft(x), direct_czt(x, 0.0, 1.0 / static_cast<double>(n), n)));

        const std::size_t n_in = static_cast<std::size_t>(len(rng));
        const std::size_t n_out = static_cast<std::size_t>(len(rng));
        CVec y(n_in);
        for (auto& v : y) v = {g(rng), g(rng)};
        const double start = u(rng), step = u(rng) / 16.0;
        worst_czt = std::max(worst_czt, rel_err(czt(y, start, step, n_out, 1.0), direct_czt(y, start, step, n_out)));
    }
    report(4, worst_dft < 1e-9 && worst_czt < 1e-9, "dft/czt match direct summation (200 inputs)",
           fmtd("dft %.2e", worst_dft) + fmtd(", czt %.2e relative", worst_czt));
}

// ---------------------------------------------------------------------------

struct FormatRun {
    int format;
    double osnr;
    double target;
    SweepResult offsets;
};

std::vector<double> column(const SweepResult& r, Algorithm a) {
    std::vector<double> out;
    for (const auto& row : r.rows)
        if (row.algorithm == a) out.push_back(row.mse_normalized);
    return out;
}

double mean(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

std::vector<FormatRun> run_offset_sweeps() {
    std::vector<FormatRun> runs{{16, 22.0, 3.0e-9, {}}, {64, 28.0, 1.6e-9, {}}};
    for (auto& r : runs) {
        SweepConfig c = default_sweep_config(r.format);
        c.osnr_values = {r.osnr};
        c.trials_per_point = 100;
        c.master_seed = kSeed;
        r.offsets = sweep_offsets(c);
    }
    return runs;
}

void criterion5(const std::vector<FormatRun>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        const double m = mean(column(r.offsets, Algorithm::ApFft));
        const double ratio = m / r.target;
        ok = ok && ratio <= 3.0 && ratio >= 1.0 / 3.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%dQAM@%gdB apfft %.3e vs %.1e (x%.2f)", detail.empty() ? "" : "; ",
                      r.format, r.osnr, m, r.target, ratio);
        detail += buf;
    }
    report(5, ok, "apfft MSE floor within factor 3", detail);
}

void criterion7(const std::vector<FormatRun>& runs) {
    bool ok = true;
    std::string detail;
    for (const auto& r : runs) {
        const auto f = column(r.offsets, Algorithm::Fft);
        const auto a = column(r.offsets, Algorithm::ApFft);
        const auto [fmin, fmax] = std::minmax_element(f.begin(), f.end());
        const auto [amin, amax] = std::minmax_element(a.begin(), a.end());
        const double fr = *fmax / *fmin, ar = *amax / *amin;
        ok = ok && fr > 10.0 && ar < 3.0;
        char buf[160];
        std::snprintf(buf, sizeof buf, "%s%dQAM fft max/min %.3g, apfft max/min %.3g", detail.empty() ? "" : "; ",
                      r.format, fr, ar);
        detail += buf;
    }
    report(7, ok, "fft fluctuates (>10), apfft stable (<3)", detail);
}

void criterion6() {
    struct Grid {
        int format;
        std::vector<double> osnr;
    };
    const std::vector<Grid> grids{{16, {10, 12, 14, 16, 18, 20, 22, 24}},
                                  {64, {16, 18, 20, 22, 24, 26, 28, 30}}};
    bool ok = true;
    std::string detail;
    for (const auto& g : grids) {
        SweepConfig c = default_sweep_config(g.format);
        c.osnr_values = g.osnr;
        c.algorithms = {Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft};
        c.trials_per_point = 100;
        c.master_seed = kSeed;
        const auto res = sweep_osnr(c);
        const auto ap = column(res, Algorithm::ApFft);
        const auto cz = column(res, Algorithm::Czt);
        const auto zf = column(res, Algorithm::ZoomFft);
        const double cz_min = *std::min_element(cz.begin(), cz.end());
        const double zf_min = *std::min_element(zf.begin(), zf.end());
        std::printf("  %dQAM OSNR sweep (MSE):  osnr  apfft  czt  zoomfft\n", g.format);
        std::size_t checked = 0, bad = 0;
        double worst = 1.0;
        for (std::size_t i = 0; i < g.osnr.size(); ++i) {
            const bool above = cz[i] <= 2.0 * cz_min && zf[i] <= 2.0 * zf_min;
            std::printf("    %5.1f  %.3e  %.3e  %.3e%s\n", g.osnr[i], ap[i], cz[i], zf[i],
                        above ? "  (above threshold)" : "");
            if (!above) continue;
            ++checked;
            for (double ref : {cz[i], zf[i]}) {
                const double r = ap[i] / ref;
                const double dev = std::max(r, 1.0 / r);
                worst = std::max(worst, dev);
                if (dev > 2.0) ++bad;
            }
        }
        ok = ok && checked > 0 && bad == 0;
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s%dQAM: %zu above-threshold points, %zu comparisons outside x2, worst ratio %.2f",
                      detail.empty() ? "" : "; ", g.format, checked, bad, worst);
        detail += buf;
    }
    report(6, ok, "apfft within factor 2 of czt and zoomfft above threshold", detail);
}

void criterion8() {
    SweepConfig c = default_sweep_config(16);
    c.trials_per_point = 10;
    c.master_seed = kSeed;
    c.algorithms = {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft, Algorithm::Diff};
    std::vector<std::string> off, osnr;
    for (unsigned t : {1u, 2u, 4u, 7u}) {
        c.threads = t;
        c.osnr_values = {18.0};
        off.push_back(sweep_offsets(c).to_csv());
        c.osnr_values = {12.0, 18.0, std::numeric_limits<double>::infinity()};
        osnr.push_back(sweep_osnr(c).to_csv());
    }
    bool same = true;
    for (std::size_t i = 1; i < off.size(); ++i) same = same && off[i] == off[0] && osnr[i] == osnr[0];
    report(8, same, "sweep CSV byte-identical across thread counts",
           "threads 1/2/4/7, offset and OSNR sweeps, " + std::to_string(off[0].size() + osnr[0].size()) + " bytes");
}

void criterion9() {
    double worst = 0.0;
    std::size_t cases = 0;
    for (int format : {16, 64}) {
        SweepConfig c = default_sweep_config(format);
        const auto p = c.estimator_params();
        for (std::size_t i = 0; i < c.offsets.size(); i += 5) {
            auto rx = simulate_received(c, c.offsets[i], c.osnr_values.front(), {i, 0, 9});
            for (auto a : {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft, Algorithm::Diff}) {
                const double ref = estimate(a, rx, p).f_hat;
                for (double s : {1e-3, 1e3}) {
                    SymbolSequence scaled = rx;
                    for (auto& v : scaled.samples) v *= s;
                    const double f = estimate(a, scaled, p).f_hat;
                    worst = std::max(worst, std::abs(f - ref) * p.t_s);
                    ++cases;
                }
            }
        }
    }
    report(9, worst <= 1e-12, "f_hat invariant to input scaling",
           std::to_string(cases) + " cases" + fmtd(", max |df|*T_s = %.3e (tolerance 1e-12)", worst));
}

} // namespace

int main() {
    const auto t0 = std::chrono::steady_clock::now();
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    const auto runs = run_offset_sweeps();
    criterion5(runs);
    criterion6();
    criterion7(runs);
    criterion8();
    criterion9();
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s: %d criterion(s) failed, %.1f s\n", failures ? "FAILED" : "ALL PASSED", failures, secs);
    return failures ? 1 : 0;
}
