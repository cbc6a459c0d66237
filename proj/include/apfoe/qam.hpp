#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace apfoe {

using cplx = std::complex<double>;
using CVec = std::vector<cplx>;

/// Square M-QAM constellation scaled to unit mean power.
///
/// `fourth_moment` is E[s^4] over the point set. On the unnormalized odd-integer
/// grid it equals -68 for 16QAM (mean power 10), so the normalized value is
/// -68 / 10^2 = -0.68. For 64QAM it is -1092 / 42^2.
struct Constellation {
    int order = 0;
    CVec points;
    cplx fourth_moment;
};

/// Received or transmitted samples at one sample per symbol.
struct SymbolSequence {
    CVec samples;
    double t_s = 0.0; ///< symbol duration in seconds

    std::size_t size() const noexcept { return samples.size(); }
};

Constellation build_constellation(int order);

/// Uniform i.i.d. draws from `c`. Same seed gives the same sequence bit for bit.
SymbolSequence generate_symbols(const Constellation& c, std::size_t count, std::uint64_t seed,
                                double t_s);

/// Element-wise s^4 (modulation removal).
SymbolSequence fourth_power(const SymbolSequence& seq);
CVec fourth_power(std::span<const cplx> x);

} // namespace apfoe
