#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace apfoe {

// Real-multiplication counts. Table totals include the shared first stage
// (4th power + N1-point FFT) for every algorithm.

std::uint64_t mul_first_stage(std::uint64_t n1);
/// Second-stage CZT term, rounded to the nearest integer.
std::uint64_t mul_czt_stage(std::uint64_t n1, std::uint64_t n2);
std::uint64_t mul_czt_total(std::uint64_t n1, std::uint64_t n2);
std::uint64_t mul_zoomfft_total(std::uint64_t n1, std::uint64_t n2);
std::uint64_t mul_apfft_total(std::uint64_t n1);

struct ComplexityReport {
    std::uint64_t n1 = 0;
    std::uint64_t n2 = 0;
    std::uint64_t mul_czt = 0;
    std::uint64_t mul_zoomfft = 0;
    std::uint64_t mul_apfft = 0;
    double reduction_vs_czt = 0.0;
    double reduction_vs_zoomfft = 0.0;
};

ComplexityReport build_report(std::uint64_t n1, std::uint64_t n2);

std::string format_table(const std::vector<ComplexityReport>& rows);
std::string format_json(const std::vector<ComplexityReport>& rows);
std::string format_csv(const std::vector<ComplexityReport>& rows);

} // namespace apfoe
