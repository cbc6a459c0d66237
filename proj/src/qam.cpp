#include "apfoe/qam.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "apfoe/mulcount.hpp"
#include "apfoe/rng.hpp"

namespace apfoe {

Constellation build_constellation(int order) {
    int side = 0;
    switch (order) {
    case 16: side = 4; break;
    case 64: side = 8; break;
    default:
        throw std::invalid_argument("build_constellation: unsupported QAM order "
                                    + std::to_string(order) + " (expected 16 or 64)");
    }

    Constellation c;
    c.order = order;
    c.points.reserve(static_cast<std::size_t>(order));

    // Mean power of the odd-integer grid is 2(M-1)/3.
    const double scale = 1.0 / std::sqrt(2.0 * (order - 1) / 3.0);
    for (int i = 0; i < side; ++i) {
        for (int q = 0; q < side; ++q) {
            const double re = 2 * i - (side - 1);
            const double im = 2 * q - (side - 1);
            c.points.emplace_back(re * scale, im * scale);
        }
    }

    cplx acc{0.0, 0.0};
    for (const auto& p : c.points) {
        const cplx p2 = p * p;
        acc += p2 * p2;
    }
    c.fourth_moment = acc / static_cast<double>(order);
    return c;
}

SymbolSequence generate_symbols(const Constellation& c, std::size_t count, std::uint64_t seed,
                                double t_s) {
    if (c.points.empty()) throw std::invalid_argument("generate_symbols: empty constellation");
    if (count == 0) throw std::invalid_argument("generate_symbols: count must be positive");

    Rng rng(seed);
    // Index by masking the raw 64-bit draw: M is a power of two, so this is uniform
    // and, unlike uniform_int_distribution, identical across standard libraries.
    const std::uint64_t mask = c.points.size() - 1;
    SymbolSequence out;
    out.t_s = t_s;
    out.samples.resize(count);
    for (auto& s : out.samples) s = c.points[static_cast<std::size_t>((rng() >> 32) & mask)];
    return out;
}

namespace {
// Three real multiplications per complex square.
inline cplx square3(cplx z) noexcept {
    const double a = z.real(), b = z.imag();
    const double ab = a * b;
    return {a * a - b * b, ab + ab};
}
} // namespace

CVec fourth_power(std::span<const cplx> x) {
    CVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = square3(square3(x[i]));
    detail::count_muls(MulKind::FourthPower, 6 * x.size());
    return out;
}

SymbolSequence fourth_power(const SymbolSequence& seq) {
    return {fourth_power(std::span<const cplx>(seq.samples)), seq.t_s};
}

} // namespace apfoe
