#include "apfoe/complexity.hpp"

#include <bit>
#include <stdexcept>
#include <string>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

namespace apfoe {

namespace {

std::uint64_t log2_pow2(std::uint64_t n, const char* who) {
    if (n == 0 || !std::has_single_bit(n))
        throw std::invalid_argument(std::string(who) + ": " + std::to_string(n)
                                    + " is not a power of two");
    return static_cast<std::uint64_t>(std::countr_zero(n));
}

} // namespace

std::uint64_t mul_first_stage(std::uint64_t n1) {
    const auto lg = log2_pow2(n1, "mul_first_stage");
    return 6 * n1 + 2 * n1 * lg;
}

std::uint64_t mul_czt_stage(std::uint64_t n1, std::uint64_t n2) {
    log2_pow2(n1, "mul_czt_stage");
    const auto lg2 = log2_pow2(n2, "mul_czt_stage");
    const std::uint64_t l = std::bit_ceil(n1 + n2 - 1);
    const auto lgl = static_cast<std::int64_t>(std::countr_zero(l));

    // (106/9 + (4/3) log2 L + 2 log2 N2) * L = (106 + 12 log2 L + 18 log2 N2) * L / 9,
    // rounded half-up in integer arithmetic.
    const std::int64_t num = (106 + 12 * lgl + 18 * static_cast<std::int64_t>(lg2))
                             * static_cast<std::int64_t>(l);
    const std::int64_t scaled = (2 * num + 9) / 18;
    const std::int64_t sign = (lgl % 2 == 0) ? 1 : -1;
    const std::int64_t total = scaled + 14 + sign - 8 * static_cast<std::int64_t>(n2);
    if (total < 0) throw std::domain_error("mul_czt_stage: negative count");
    return static_cast<std::uint64_t>(total);
}

std::uint64_t mul_czt_total(std::uint64_t n1, std::uint64_t n2) {
    return mul_first_stage(n1) + mul_czt_stage(n1, n2);
}

std::uint64_t mul_zoomfft_total(std::uint64_t n1, std::uint64_t n2) {
    const auto lg2 = log2_pow2(n2, "mul_zoomfft_total");
    return mul_first_stage(n1) + 2 * n2 * lg2 + 8 * n1;
}

std::uint64_t mul_apfft_total(std::uint64_t n1) {
    return mul_first_stage(n1) + 2 * (2 * n1 - 1);
}

ComplexityReport build_report(std::uint64_t n1, std::uint64_t n2) {
    ComplexityReport r;
    r.n1 = n1;
    r.n2 = n2;
    r.mul_czt = mul_czt_total(n1, n2);
    r.mul_zoomfft = mul_zoomfft_total(n1, n2);
    r.mul_apfft = mul_apfft_total(n1);
    r.reduction_vs_czt = 1.0 - static_cast<double>(r.mul_apfft) / static_cast<double>(r.mul_czt);
    r.reduction_vs_zoomfft =
        1.0 - static_cast<double>(r.mul_apfft) / static_cast<double>(r.mul_zoomfft);
    return r;
}

std::string format_table(const std::vector<ComplexityReport>& rows) {
    std::string out = fmt::format("{:<22} {:>10} {:>12} {:>10} {:>10} {:>10}\n", "N1, N2", "MUL_CZT",
                                  "MUL_ZoomFFT", "MUL_apFFT", "vs CZT", "vs Zoom");
    for (const auto& r : rows) {
        out += fmt::format("{:<22} {:>10} {:>12} {:>10} {:>9.1f}% {:>9.1f}%\n",
                           fmt::format("N1={}, N2={}", r.n1, r.n2), r.mul_czt, r.mul_zoomfft,
                           r.mul_apfft, 100.0 * r.reduction_vs_czt, 100.0 * r.reduction_vs_zoomfft);
    }
    return out;
}

std::string format_json(const std::vector<ComplexityReport>& rows) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        arr.push_back({{"n1", r.n1},
                       {"n2", r.n2},
                       {"mul_czt", r.mul_czt},
                       {"mul_zoomfft", r.mul_zoomfft},
                       {"mul_apfft", r.mul_apfft},
                       {"reduction_vs_czt", r.reduction_vs_czt},
                       {"reduction_vs_zoomfft", r.reduction_vs_zoomfft}});
    }
    return arr.dump(2) + "\n";
}

std::string format_csv(const std::vector<ComplexityReport>& rows) {
    std::string out = "n1,n2,mul_czt,mul_zoomfft,mul_apfft,reduction_vs_czt,reduction_vs_zoomfft\n";
    for (const auto& r : rows)
        out += fmt::format("{},{},{},{},{},{:.6f},{:.6f}\n", r.n1, r.n2, r.mul_czt, r.mul_zoomfft,
                           r.mul_apfft, r.reduction_vs_czt, r.reduction_vs_zoomfft);
    return out;
}

} // namespace apfoe
