#include "apfoe/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <tuple>

#include "apfoe/mulcount.hpp"

namespace apfoe {

namespace {

constexpr double kPi = std::numbers::pi;

inline cplx cmul(cplx a, cplx b) noexcept {
    return {a.real() * b.real() - a.imag() * b.imag(), a.real() * b.imag() + a.imag() * b.real()};
}

inline cplx cmul_conj(cplx a, cplx b) noexcept { // a * conj(b)
    return {a.real() * b.real() + a.imag() * b.imag(), a.imag() * b.real() - a.real() * b.imag()};
}

// exp(-j*pi*step*n^2) with the argument reduced modulo 2 before scaling by pi.
cplx chirp(double step_cycles, std::size_t n) {
    const double n2 = static_cast<double>(n) * static_cast<double>(n);
    const double turns = std::fmod(step_cycles * n2, 2.0);
    return std::polar(1.0, -kPi * turns);
}

} // namespace

bool is_power_of_two(std::size_t n) noexcept { return n != 0 && std::has_single_bit(n); }

int log2_exact(std::size_t n) {
    if (!is_power_of_two(n))
        throw std::invalid_argument("size " + std::to_string(n) + " is not a power of two");
    return std::countr_zero(n);
}

// ---------------------------------------------------------------------------
// FFT

FftPlan::FftPlan(std::size_t n) : n_(n), log2n_(log2_exact(n)) {
    twiddles_.resize(n / 2);
    for (std::size_t k = 0; k < n / 2; ++k)
        twiddles_[k] = std::polar(1.0, -2.0 * kPi * static_cast<double>(k) / static_cast<double>(n));

    bitrev_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < log2n_; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (log2n_ - 1 - b);
        bitrev_[i] = r;
    }
}

void FftPlan::execute(std::span<cplx> a, bool inverse) const {
    if (a.size() != n_)
        throw std::invalid_argument("FftPlan: buffer length " + std::to_string(a.size())
                                    + " does not match plan size " + std::to_string(n_));
    for (std::size_t i = 0; i < n_; ++i)
        if (i < bitrev_[i]) std::swap(a[i], a[bitrev_[i]]);

    for (std::size_t len = 2; len <= n_; len <<= 1) {
        const std::size_t half = len / 2;
        const std::size_t stride = n_ / len;
        for (std::size_t i = 0; i < n_; i += len) {
            for (std::size_t k = 0; k < half; ++k) {
                cplx w = twiddles_[k * stride];
                if (inverse) w = std::conj(w);
                const cplx u = a[i + k];
                const cplx v = cmul(a[i + k + half], w);
                a[i + k] = u + v;
                a[i + k + half] = u - v;
            }
        }
    }
    // One complex multiply per butterfly: 4 * (N/2) * log2(N).
    detail::count_muls(MulKind::Fft, 2 * n_ * static_cast<std::uint64_t>(log2n_));

    if (inverse) {
        const double s = 1.0 / static_cast<double>(n_);
        for (auto& v : a) v *= s;
        detail::count_muls(MulKind::Fft, 2 * n_);
    }
}

std::shared_ptr<const FftPlan> FftPlan::get(std::size_t n) {
    static std::mutex mu;
    static std::map<std::size_t, std::shared_ptr<const FftPlan>> cache;
    std::lock_guard lock(mu);
    auto& slot = cache[n];
    if (!slot) slot = std::make_shared<const FftPlan>(n);
    return slot;
}

CVec dft(std::span<const cplx> x) {
    CVec out(x.begin(), x.end());
    FftPlan::get(x.size())->execute(out, false);
    return out;
}

CVec idft(std::span<const cplx> x) {
    CVec out(x.begin(), x.end());
    FftPlan::get(x.size())->execute(out, true);
    return out;
}

// ---------------------------------------------------------------------------
// All-phase FFT

AllPhaseWindow build_allphase_window(std::size_t n) {
    if (n < 2) throw std::invalid_argument("build_allphase_window: n must be >= 2");
    log2_exact(n);

    AllPhaseWindow w;
    w.n = n;
    w.weights.resize(2 * n - 1);
    const double norm = static_cast<double>(n) * static_cast<double>(n);
    for (std::size_t idx = 0; idx < w.weights.size(); ++idx) {
        const auto i = static_cast<std::ptrdiff_t>(idx) - static_cast<std::ptrdiff_t>(n - 1);
        w.weights[idx] = static_cast<double>(static_cast<std::ptrdiff_t>(n) - std::abs(i)) / norm;
    }
    return w;
}

ApFftSpectrum apfft(std::span<const cplx> x, const AllPhaseWindow& window, double t_s) {
    const std::size_t n = window.n;
    if (n < 2 || window.weights.size() != 2 * n - 1)
        throw std::invalid_argument("apfft: malformed window");
    if (x.size() != 2 * n - 1)
        throw std::invalid_argument("apfft: expected " + std::to_string(2 * n - 1)
                                    + " samples, got " + std::to_string(x.size()));

    // z(0) = v(0); z(m) = v(m) + v(m - N). Index i maps to i + N - 1.
    CVec z(n);
    z[0] = window.weights[n - 1] * x[n - 1];
    for (std::size_t m = 1; m < n; ++m)
        z[m] = window.weights[n - 1 + m] * x[n - 1 + m] + window.weights[m - 1] * x[m - 1];
    detail::count_muls(MulKind::Window, 2 * (2 * n - 1));

    FftPlan::get(n)->execute(z, false);

    ApFftSpectrum s;
    s.bins = std::move(z);
    s.n = n;
    s.bin_resolution = t_s > 0.0 ? 1.0 / (static_cast<double>(n) * t_s) : 0.0;
    return s;
}

cplx allphase_dtft(std::span<const cplx> x, const AllPhaseWindow& window, double bin) {
    const std::size_t n = window.n;
    if (x.size() != 2 * n - 1 || window.weights.size() != 2 * n - 1)
        throw std::invalid_argument("allphase_dtft: length mismatch");

    // Pair i and -i so each pair costs one phasor; phasors are re-anchored every
    // 64 steps to bound recurrence drift.
    const double theta = -2.0 * kPi * bin / static_cast<double>(n);
    const cplx step = std::polar(1.0, theta);
    const std::size_t c = n - 1;
    cplx acc = window.weights[c] * x[c];
    cplx ph{1.0, 0.0};
    for (std::size_t i = 1; i < n; ++i) {
        if ((i & 63) == 0) ph = std::polar(1.0, theta * static_cast<double>(i));
        else ph = cmul(ph, step);
        const cplx pos = cmul(x[c + i], ph);
        const cplx neg = cmul_conj(x[c - i], ph);
        acc += window.weights[c + i] * (pos + neg);
    }
    // Per pair: phasor step 4, two complex products 8, window 2.
    detail::count_muls(MulKind::Refine, 2 + 14 * (n - 1));
    return acc;
}

// ---------------------------------------------------------------------------
// Chirp-Z

std::size_t czt_conv_length(std::size_t n_in, std::size_t n_out) {
    if (n_in == 0 || n_out == 0) throw std::invalid_argument("czt: empty input or output");
    return std::bit_ceil(n_in + n_out - 1);
}

CztPlan::CztPlan(std::size_t n_in, std::size_t n_out, double step_cycles)
    : n_in_(n_in), n_out_(n_out), l_(czt_conv_length(n_in, n_out)) {
    if (!std::isfinite(step_cycles)) throw std::invalid_argument("czt: f_step must be finite");

    in_chirp_.resize(n_in);
    for (std::size_t n = 0; n < n_in; ++n) in_chirp_[n] = chirp(step_cycles, n);
    out_chirp_.resize(n_out);
    for (std::size_t m = 0; m < n_out; ++m) out_chirp_[m] = chirp(step_cycles, m);

    // h[k] = W^{-k^2/2} for k in (-(n_in-1), n_out-1], wrapped circularly.
    kernel_fft_.assign(l_, cplx{});
    for (std::size_t k = 0; k < n_out; ++k) kernel_fft_[k] = std::conj(chirp(step_cycles, k));
    for (std::size_t k = 1; k < n_in; ++k) kernel_fft_[l_ - k] = std::conj(chirp(step_cycles, k));

    fft_ = FftPlan::get(l_);
    {
        // Table setup is not part of the per-call cost.
        MulCountScope silence;
        fft_->execute(kernel_fft_, false);
    }
}

CVec CztPlan::execute(std::span<const cplx> x, double start_cycles) const {
    if (x.size() != n_in_)
        throw std::invalid_argument("czt: plan expects " + std::to_string(n_in_) + " samples, got "
                                    + std::to_string(x.size()));

    CVec y(l_, cplx{});
    for (std::size_t n = 0; n < n_in_; ++n) {
        const double turns = std::fmod(start_cycles * static_cast<double>(n), 1.0);
        const cplx a = std::polar(1.0, -2.0 * kPi * turns);
        y[n] = cmul(cmul(x[n], a), in_chirp_[n]);
    }
    detail::count_muls(MulKind::Chirp, 8 * n_in_);

    fft_->execute(y, false);
    for (std::size_t k = 0; k < l_; ++k) y[k] = cmul(y[k], kernel_fft_[k]);
    detail::count_muls(MulKind::Chirp, 4 * l_);
    fft_->execute(y, true);

    CVec out(n_out_);
    for (std::size_t m = 0; m < n_out_; ++m) out[m] = cmul(y[m], out_chirp_[m]);
    detail::count_muls(MulKind::Chirp, 4 * n_out_);
    return out;
}

std::shared_ptr<const CztPlan> CztPlan::get(std::size_t n_in, std::size_t n_out,
                                            double step_cycles) {
    using Key = std::tuple<std::size_t, std::size_t, std::uint64_t>;
    static std::mutex mu;
    static std::map<Key, std::shared_ptr<const CztPlan>> cache;

    std::uint64_t bits = 0;
    std::memcpy(&bits, &step_cycles, sizeof bits);
    const Key key{n_in, n_out, bits};

    std::lock_guard lock(mu);
    auto& slot = cache[key];
    if (!slot) slot = std::make_shared<const CztPlan>(n_in, n_out, step_cycles);
    return slot;
}

CVec czt(std::span<const cplx> x, double f_start, double f_step, std::size_t n_out, double t_s) {
    if (n_out == 0) throw std::invalid_argument("czt: n_out must be >= 1");
    if (!std::isfinite(f_step)) throw std::invalid_argument("czt: f_step must be finite");
    if (!(t_s > 0.0)) throw std::invalid_argument("czt: t_s must be > 0");
    if (x.empty()) throw std::invalid_argument("czt: empty input");
    return CztPlan::get(x.size(), n_out, f_step * t_s)->execute(x, f_start * t_s);
}

// ---------------------------------------------------------------------------
// Zoom refinement

double zoom_refine(std::span<const cplx> x, double f_center, std::size_t n_out, double t_s) {
    const std::size_t n1 = x.size();
    if (n1 != 2 * n_out)
        throw std::invalid_argument("zoom_refine: input length " + std::to_string(n1)
                                    + " must equal 2 * n_out = " + std::to_string(2 * n_out));
    if (n_out < 4) throw std::invalid_argument("zoom_refine: n_out must be >= 4");
    log2_exact(n_out);
    if (!(t_s > 0.0)) throw std::invalid_argument("zoom_refine: t_s must be > 0");

    // Mix down.
    CVec y(n1);
    const double cyc = f_center * t_s;
    for (std::size_t n = 0; n < n1; ++n) {
        const double turns = std::fmod(cyc * static_cast<double>(n), 1.0);
        y[n] = cmul(x[n], std::polar(1.0, -2.0 * kPi * turns));
    }
    detail::count_muls(MulKind::Mix, 4 * n1);

    // 2-tap average at the input rate, then keep every second output.
    constexpr double h0 = 0.5, h1 = 0.5;
    CVec d(n_out);
    cplx prev{};
    for (std::size_t n = 0; n < n1; ++n) {
        const cplx f = h0 * y[n] + h1 * prev;
        if (n % 2 == 1) d[n / 2] = f;
        prev = y[n];
    }
    detail::count_muls(MulKind::Filter, 4 * n1);

    FftPlan::get(n_out)->execute(d, false);

    std::size_t k = 0;
    double best = -1.0;
    long best_signed = 0;
    const long half = static_cast<long>(n_out / 2);
    for (std::size_t i = 0; i < n_out; ++i) {
        const double m = std::norm(d[i]);
        const long s = static_cast<long>(i) < half ? static_cast<long>(i) : static_cast<long>(i) - static_cast<long>(n_out);
        if (m > best || (m == best && std::abs(s) < std::abs(best_signed))) {
            best = m;
            k = i;
            best_signed = s;
        }
    }

    // Complex three-point interpolation with the tan(pi/N)/(pi/N) bias correction
    // for a rectangular window.
    const cplx a = d[(k + n_out - 1) % n_out];
    const cplx b = d[k];
    const cplx c = d[(k + 1) % n_out];
    const cplx den = 2.0 * b - a - c;
    double p = 0.0;
    if (std::norm(den) > 0.0) {
        const double g = std::tan(kPi / static_cast<double>(n_out)) / (kPi / static_cast<double>(n_out));
        p = std::clamp(g * ((a - c) / den).real(), -1.0, 1.0);
    }
    detail::count_muls(MulKind::Refine, 10);

    const double decimated_bin = 1.0 / (static_cast<double>(n_out) * 2.0 * t_s);
    return f_center + (static_cast<double>(best_signed) + p) * decimated_bin;
}

} // namespace apfoe
