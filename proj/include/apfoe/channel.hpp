#pragma once

#include <cstdint>
#include <limits>

#include "apfoe/qam.hpp"

namespace apfoe {

inline constexpr double kDefaultReferenceBandwidth = 12.5e9; // 0.1 nm at 1550 nm
inline constexpr double kInfiniteSnr = std::numeric_limits<double>::infinity();

struct ChannelParams {
    double f_d = 0.0;                 ///< carrier frequency offset, Hz
    double symbol_rate = 28e9;        ///< Baud
    double combined_linewidth = 0.0;  ///< Tx + LO linewidth, Hz
    double osnr_db = std::numeric_limits<double>::infinity();
    double reference_bandwidth = kDefaultReferenceBandwidth;

    double t_s() const noexcept { return 1.0 / symbol_rate; }
    void validate() const;
};

/// Sample n is multiplied by exp(j(2*pi*f_d*n*T_s + initial_phase)).
SymbolSequence apply_carrier(const SymbolSequence& seq, double f_d, double initial_phase = 0.0);

/// Wiener phase noise: phi_0 = 0, increments ~ N(0, 2*pi*linewidth*T_s).
SymbolSequence apply_phase_noise(const SymbolSequence& seq, double combined_linewidth,
                                 std::uint64_t seed);

/// Linear per-symbol SNR, single polarization:
/// 10^(osnr_db/10) * reference_bandwidth / symbol_rate.
double osnr_to_snr(double osnr_db, double symbol_rate,
                   double reference_bandwidth = kDefaultReferenceBandwidth);

/// Adds circular Gaussian noise of total variance 1/snr_linear per sample.
/// An infinite SNR returns the input unchanged.
SymbolSequence add_awgn(const SymbolSequence& seq, double snr_linear, std::uint64_t seed);

} // namespace apfoe
