#pragma once

#include <memory>
#include <span>
#include <vector>

#include "apfoe/qam.hpp"

namespace apfoe {

bool is_power_of_two(std::size_t n) noexcept;
int log2_exact(std::size_t n); // throws unless n is a power of two

/// Iterative radix-2 FFT with a precomputed twiddle table.
/// Plans are immutable and may be shared across threads.
class FftPlan {
public:
    explicit FftPlan(std::size_t n);

    std::size_t size() const noexcept { return n_; }

    /// In-place unnormalized transform. `inverse` uses +j and scales by 1/N.
    void execute(std::span<cplx> data, bool inverse = false) const;

    /// Process-wide cache keyed by size.
    static std::shared_ptr<const FftPlan> get(std::size_t n);

private:
    std::size_t n_;
    int log2n_;
    CVec twiddles_; // exp(-j*2*pi*k/n), k < n/2
    std::vector<std::size_t> bitrev_;
};

/// Forward unnormalized DFT; size must be a power of two.
CVec dft(std::span<const cplx> x);
/// Inverse of dft(), including the 1/N factor.
CVec idft(std::span<const cplx> x);

/// Convolution window of length 2N-1, index i in [-(N-1), N-1] stored at i + N - 1.
struct AllPhaseWindow {
    std::size_t n = 0;
    std::vector<double> weights;

    double at(std::ptrdiff_t i) const { return weights.at(static_cast<std::size_t>(i + static_cast<std::ptrdiff_t>(n) - 1)); }
};

/// Triangular window w(i) = (N - |i|) / N^2, the normalized self-convolution of a
/// length-N rectangle. Its apFFT magnitude response is the squared Dirichlet kernel.
AllPhaseWindow build_allphase_window(std::size_t n);

struct ApFftSpectrum {
    CVec bins;
    std::size_t n = 0;
    double bin_resolution = 0.0; ///< 1/(N*T_s) in Hz, 0 when T_s is unknown
};

/// All-phase FFT of 2N-1 samples whose centre x(0) is stored at x[N-1]:
/// weight, fold z(m) = v(m) + v(m-N), then N-point DFT. Every non-zero bin of a
/// pure tone carries the phase of the centre sample.
ApFftSpectrum apfft(std::span<const cplx> x, const AllPhaseWindow& window, double t_s = 0.0);

/// DTFT of the windowed 2N-1 block at a continuous bin position `bin`
/// (frequency bin / (N*T_s)), phase-referenced to the centre sample.
/// Agrees with apfft() at integer bins.
cplx allphase_dtft(std::span<const cplx> x, const AllPhaseWindow& window, double bin);

/// Bluestein chirp-Z plan for a fixed (input length, output length, normalized step).
class CztPlan {
public:
    /// step_cycles = f_step * t_s, in cycles per sample.
    CztPlan(std::size_t n_in, std::size_t n_out, double step_cycles);

    std::size_t conv_length() const noexcept { return l_; }

    /// start_cycles = f_start * t_s.
    CVec execute(std::span<const cplx> x, double start_cycles) const;

    static std::shared_ptr<const CztPlan> get(std::size_t n_in, std::size_t n_out,
                                              double step_cycles);

private:
    std::size_t n_in_;
    std::size_t n_out_;
    std::size_t l_;
    CVec in_chirp_;  // W^{n^2/2}, n < n_in
    CVec out_chirp_; // W^{m^2/2}, m < n_out
    CVec kernel_fft_;
    std::shared_ptr<const FftPlan> fft_;
};

/// Bluestein convolution length 2^ceil(log2(n_in + n_out - 1)).
std::size_t czt_conv_length(std::size_t n_in, std::size_t n_out);

/// Value m = sum_n x[n] exp(-j*2*pi*(f_start + m*f_step)*n*t_s), m < n_out.
CVec czt(std::span<const cplx> x, double f_start, double f_step, std::size_t n_out, double t_s);

/// Zoom refinement around f_center: mix down, 2-tap average, decimate by 2,
/// N2-point DFT, complex three-point peak interpolation. Requires x.size() == 2*n_out.
/// Returns the refined frequency in Hz.
double zoom_refine(std::span<const cplx> x, double f_center, std::size_t n_out, double t_s);

} // namespace apfoe
