#include "apfoe/foe.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "apfoe/errors.hpp"
#include "apfoe/spectral.hpp"

namespace apfoe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

long signed_bin(std::size_t k, std::size_t n) noexcept {
    const auto ks = static_cast<long>(k);
    const auto nn = static_cast<long>(n);
    return ks < nn / 2 ? ks : ks - nn;
}

// Signed magnitude argmax; ties go to the smaller |k|.
long peak_bin(std::span<const cplx> spectrum) {
    double best = -1.0;
    long best_k = 0;
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double m = std::norm(spectrum[i]);
        const long k = signed_bin(i, spectrum.size());
        if (m > best || (m == best && std::abs(k) < std::abs(best_k))) {
            best = m;
            best_k = k;
        }
    }
    if (!(best > 0.0)) throw DegenerateInput("spectrum is identically zero");
    return best_k;
}

std::size_t bin_index(long k, std::size_t n) noexcept {
    const auto nn = static_cast<long>(n);
    return static_cast<std::size_t>(((k % nn) + nn) % nn);
}

// Wrap into (-0.5, 0.5].
double wrap_half(double x) noexcept {
    double r = x - std::round(x);
    if (r <= -0.5) r += 1.0;
    return r;
}

// Builds a result from a continuous position in bins of the 4th-power tone,
// aliased into [-N/2, N/2), so that f_hat * 4 * N * T_s == k_hat + delta.
FoeResult from_bins(double bins, std::size_t n, double t_s, Algorithm algo, double f_coarse) {
    const double nn = static_cast<double>(n);
    bins -= nn * std::floor((bins + nn / 2.0) / nn);

    FoeResult r;
    r.algorithm = algo;
    r.f_coarse = f_coarse;
    r.k_hat = static_cast<long>(std::ceil(bins - 0.5));
    r.delta = bins - static_cast<double>(r.k_hat);
    r.f_hat = (static_cast<double>(r.k_hat) + r.delta) / (4.0 * nn * t_s);
    return r;
}

void require(const SymbolSequence& rx, std::size_t needed, const char* who) {
    if (rx.size() < needed) throw InsufficientSamples(who, needed, rx.size());
}

std::span<const cplx> head(const SymbolSequence& rx, std::size_t n) {
    return std::span<const cplx>(rx.samples).first(n);
}

// 4th power and N1-point DFT shared by the FFT, CZT and ZoomFFT estimators.
struct CoarseStage {
    CVec x4;
    long k = 0;
};

CoarseStage coarse_stage(const SymbolSequence& rx, const EstimatorParams& p) {
    CoarseStage c;
    c.x4 = fourth_power(head(rx, p.n1));
    c.k = peak_bin(dft(c.x4));
    return c;
}

FoeResult diff_impl(std::span<const cplx> rx, double t_s) {
    if (rx.size() < 2) throw InsufficientSamples("diff_foe", 2, rx.size());
    if (!(t_s > 0.0)) throw std::invalid_argument("diff_foe: t_s must be > 0");
    cplx acc{};
    for (std::size_t n = 0; n + 1 < rx.size(); ++n) {
        const cplx d = rx[n + 1] * std::conj(rx[n]);
        const cplx d2 = d * d;
        acc += d2 * d2;
    }
    FoeResult r;
    r.algorithm = Algorithm::Diff;
    r.f_hat = std::arg(acc) / (kTwoPi * 4.0 * t_s);
    r.f_coarse = 4.0 * r.f_hat;
    return r;
}

} // namespace

std::string_view to_string(Algorithm a) noexcept {
    switch (a) {
    case Algorithm::Fft: return "fft";
    case Algorithm::ApFft: return "apfft";
    case Algorithm::Czt: return "czt";
    case Algorithm::ZoomFft: return "zoomfft";
    case Algorithm::Diff: return "diff";
    }
    return "unknown";
}

std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept {
    for (auto a : {Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt, Algorithm::ZoomFft,
                   Algorithm::Diff})
        if (to_string(a) == name) return a;
    return std::nullopt;
}

void EstimatorParams::validate() const {
    if (n1 < 4 || !is_power_of_two(n1))
        throw std::invalid_argument("EstimatorParams: n1 must be a power of two >= 4");
    if (n2 < 2 || !is_power_of_two(n2))
        throw std::invalid_argument("EstimatorParams: n2 must be a power of two >= 2");
    if (!(t_s > 0.0)) throw std::invalid_argument("EstimatorParams: t_s must be > 0");
}

std::size_t samples_required(Algorithm a, const EstimatorParams& p) noexcept {
    switch (a) {
    case Algorithm::ApFft: return 3 * p.n1 - 1;
    case Algorithm::Diff: return 2;
    default: return p.n1;
    }
}

FoeResult fft_foe(const SymbolSequence& rx, const EstimatorParams& p) {
    p.validate();
    require(rx, p.n1, "fft_foe");
    const auto c = coarse_stage(rx, p);

    FoeResult r;
    r.algorithm = Algorithm::Fft;
    r.k_hat = c.k;
    r.delta = 0.0;
    r.f_coarse = static_cast<double>(c.k) / (static_cast<double>(p.n1) * p.t_s);
    r.f_hat = r.f_coarse / 4.0;
    return r;
}

FoeResult apfft_foe(const SymbolSequence& rx, const EstimatorParams& p, const ApFftOptions& opt) {
    p.validate();
    const std::size_t n = p.n1;
    require(rx, 3 * n - 1, "apfft_foe");

    const CVec x4 = fourth_power(head(rx, 3 * n - 1));
    const auto block1 = std::span<const cplx>(x4).subspan(0, 2 * n - 1);
    const auto block2 = std::span<const cplx>(x4).subspan(n, 2 * n - 1);

    const AllPhaseWindow w = build_allphase_window(n);
    const ApFftSpectrum y1 = apfft(block1, w, p.t_s);
    const ApFftSpectrum y2 = apfft(block2, w, p.t_s);

    const long k = peak_bin(y1.bins);
    const std::size_t ki = bin_index(k, n);
    // Both blocks are read at block 1's peak.
    const double delta = std::arg(y2.bins[ki] * std::conj(y1.bins[ki])) / kTwoPi;

    double k_int = static_cast<double>(k);
    if (opt.resolve_integer) {
        double best = std::abs(allphase_dtft(block1, w, k_int + delta));
        for (long m : {k - 1, k + 1}) {
            const double mag = std::abs(allphase_dtft(block1, w, static_cast<double>(m) + delta));
            if (mag > best) {
                best = mag;
                k_int = static_cast<double>(m);
            }
        }
    }

    double bins = k_int + delta;
    if (opt.recenter) {
        const cplx a1 = allphase_dtft(block1, w, bins);
        const cplx a2 = allphase_dtft(block2, w, bins);
        const double delta2 = std::arg(a2 * std::conj(a1)) / kTwoPi;
        bins += wrap_half(delta2 - delta);
    }

    const double f_coarse = static_cast<double>(k) / (static_cast<double>(n) * p.t_s);
    return from_bins(bins, n, p.t_s, Algorithm::ApFft, f_coarse);
}

FoeResult czt_foe(const SymbolSequence& rx, const EstimatorParams& p) {
    p.validate();
    require(rx, p.n1, "czt_foe");
    const auto c = coarse_stage(rx, p);

    const double n1 = static_cast<double>(p.n1);
    const double coarse_bin = 1.0 / (n1 * p.t_s);
    // Band of two coarse bins centred on the peak, N2 points.
    const double f_step = 2.0 * coarse_bin / static_cast<double>(p.n2);
    const double f_start = (static_cast<double>(c.k) - 1.0) * coarse_bin;
    const CVec z = czt(c.x4, f_start, f_step, p.n2, p.t_s);

    std::size_t best_m = 0;
    double best = -1.0;
    for (std::size_t m = 0; m < z.size(); ++m) {
        const double mag = std::norm(z[m]);
        const double f = f_start + static_cast<double>(m) * f_step;
        const double f_best = f_start + static_cast<double>(best_m) * f_step;
        if (mag > best || (mag == best && std::abs(f) < std::abs(f_best))) {
            best = mag;
            best_m = m;
        }
    }
    if (!(best > 0.0)) throw DegenerateInput("czt_foe: zero fine spectrum");

    const double f4 = f_start + static_cast<double>(best_m) * f_step;
    return from_bins(f4 * n1 * p.t_s, p.n1, p.t_s, Algorithm::Czt,
                     static_cast<double>(c.k) * coarse_bin);
}

FoeResult zoomfft_foe(const SymbolSequence& rx, const EstimatorParams& p) {
    p.validate();
    if (p.n1 != 2 * p.n2)
        throw std::invalid_argument("zoomfft_foe: requires n1 == 2 * n2 (n1=" + std::to_string(p.n1)
                                    + ", n2=" + std::to_string(p.n2) + ")");
    require(rx, p.n1, "zoomfft_foe");
    const auto c = coarse_stage(rx, p);

    const double n1 = static_cast<double>(p.n1);
    const double f_center = static_cast<double>(c.k) / (n1 * p.t_s);
    const double f4 = zoom_refine(c.x4, f_center, p.n2, p.t_s);
    return from_bins(f4 * n1 * p.t_s, p.n1, p.t_s, Algorithm::ZoomFft, f_center);
}

FoeResult diff_foe(const SymbolSequence& rx) { return diff_impl(rx.samples, rx.t_s); }

FoeResult estimate(Algorithm a, const SymbolSequence& rx, const EstimatorParams& p) {
    switch (a) {
    case Algorithm::Fft: return fft_foe(rx, p);
    case Algorithm::ApFft: return apfft_foe(rx, p);
    case Algorithm::Czt: return czt_foe(rx, p);
    case Algorithm::ZoomFft: return zoomfft_foe(rx, p);
    case Algorithm::Diff: return diff_impl(rx.samples, p.t_s);
    }
    throw std::invalid_argument("estimate: unknown algorithm");
}

} // namespace apfoe
