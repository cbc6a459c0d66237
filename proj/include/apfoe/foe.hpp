#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "apfoe/qam.hpp"

namespace apfoe {

enum class Algorithm { Fft, ApFft, Czt, ZoomFft, Diff };

std::string_view to_string(Algorithm a) noexcept;
std::optional<Algorithm> parse_algorithm(std::string_view name) noexcept;

struct FoeResult {
    double f_hat = 0.0;     ///< estimated offset, Hz
    double f_coarse = 0.0;  ///< coarse estimate of the 4th-power tone, Hz
    long k_hat = 0;         ///< signed peak bin
    double delta = 0.0;     ///< fractional bin correction, (-0.5, 0.5]
    Algorithm algorithm = Algorithm::Fft;
};

struct EstimatorParams {
    std::size_t n1 = 512;
    std::size_t n2 = 256;
    double t_s = 1.0 / 28e9;

    void validate() const;
};

struct ApFftOptions {
    /// Pick the integer bin among {k-1, k, k+1} whose coherent response at
    /// (bin + delta) is largest. Without it, a tone near a half-bin position
    /// lands a whole bin off whenever argmax and phase wrap disagree.
    bool resolve_integer = true;
    /// Re-measure the block phase difference at the resolved frequency instead
    /// of at the peak bin, avoiding the scalloping loss of the squared-Dirichlet peak.
    bool recenter = true;
};

/// Samples each estimator consumes from the front of the sequence.
std::size_t samples_required(Algorithm a, const EstimatorParams& p) noexcept;

FoeResult fft_foe(const SymbolSequence& rx, const EstimatorParams& p);
FoeResult apfft_foe(const SymbolSequence& rx, const EstimatorParams& p,
                    const ApFftOptions& opt = {});
FoeResult czt_foe(const SymbolSequence& rx, const EstimatorParams& p);
FoeResult zoomfft_foe(const SymbolSequence& rx, const EstimatorParams& p);
FoeResult diff_foe(const SymbolSequence& rx);

FoeResult estimate(Algorithm a, const SymbolSequence& rx, const EstimatorParams& p);

} // namespace apfoe
