#include "apfoe/channel.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "apfoe/rng.hpp"

namespace apfoe {

void ChannelParams::validate() const {
    if (!(symbol_rate > 0.0)) throw std::invalid_argument("ChannelParams: symbol_rate must be > 0");
    if (combined_linewidth < 0.0)
        throw std::invalid_argument("ChannelParams: combined_linewidth must be >= 0");
    if (!(reference_bandwidth > 0.0))
        throw std::invalid_argument("ChannelParams: reference_bandwidth must be > 0");
    if (!(std::abs(f_d) < symbol_rate / 2.0))
        throw std::invalid_argument("ChannelParams: |f_d| must be below symbol_rate/2");
}

SymbolSequence apply_carrier(const SymbolSequence& seq, double f_d, double initial_phase) {
    SymbolSequence out{CVec(seq.size()), seq.t_s};
    const double w = 2.0 * std::numbers::pi * f_d * seq.t_s;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        const double ph = std::fma(w, static_cast<double>(n), initial_phase);
        out.samples[n] = seq.samples[n] * std::polar(1.0, ph);
    }
    return out;
}

SymbolSequence apply_phase_noise(const SymbolSequence& seq, double combined_linewidth,
                                 std::uint64_t seed) {
    if (combined_linewidth < 0.0)
        throw std::invalid_argument("apply_phase_noise: negative linewidth");
    if (combined_linewidth == 0.0 || seq.size() == 0) return seq;

    const double sigma = std::sqrt(2.0 * std::numbers::pi * combined_linewidth * seq.t_s);
    Rng rng(seed);
    std::normal_distribution<double> step(0.0, sigma);

    SymbolSequence out{CVec(seq.size()), seq.t_s};
    double phi = 0.0;
    for (std::size_t n = 0; n < seq.size(); ++n) {
        out.samples[n] = seq.samples[n] * std::polar(1.0, phi);
        phi += step(rng);
    }
    return out;
}

double osnr_to_snr(double osnr_db, double symbol_rate, double reference_bandwidth) {
    if (!(symbol_rate > 0.0)) throw std::invalid_argument("osnr_to_snr: symbol_rate must be > 0");
    return std::pow(10.0, osnr_db / 10.0) * reference_bandwidth / symbol_rate;
}

SymbolSequence add_awgn(const SymbolSequence& seq, double snr_linear, std::uint64_t seed) {
    if (std::isinf(snr_linear)) return seq;
    if (!(snr_linear > 0.0)) throw std::invalid_argument("add_awgn: snr_linear must be > 0");

    Rng rng(seed);
    std::normal_distribution<double> g(0.0, std::sqrt(0.5 / snr_linear));
    SymbolSequence out = seq;
    for (auto& s : out.samples) {
        const double re = g(rng);
        const double im = g(rng);
        s += cplx(re, im);
    }
    return out;
}

} // namespace apfoe
