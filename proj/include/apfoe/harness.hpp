#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "apfoe/foe.hpp"

namespace apfoe {

enum class SignalSource { Qam, Tone };

struct SweepConfig {
    int format = 16;
    SignalSource source = SignalSource::Qam;
    double symbol_rate = 28e9;
    double linewidth_per_laser = 100e3;
    double reference_bandwidth = 12.5e9;
    std::vector<Algorithm> algorithms{Algorithm::Fft, Algorithm::ApFft, Algorithm::Czt,
                                      Algorithm::ZoomFft};
    std::size_t n1 = 512;
    std::size_t n2 = 256;
    std::vector<double> offsets;     ///< Hz
    std::vector<double> osnr_values; ///< dB; +inf disables AWGN
    std::size_t trials_per_point = 100;
    std::uint64_t master_seed = 1;
    unsigned threads = 1;

    double t_s() const noexcept { return 1.0 / symbol_rate; }
    double combined_linewidth() const noexcept { return 2.0 * linewidth_per_laser; }
    EstimatorParams estimator_params() const noexcept { return {n1, n2, t_s()}; }
    std::size_t samples_per_trial() const noexcept;
    void validate() const;
};

/// Inclusive grid min, min+step, ..., max (count rounded from the span).
std::vector<double> offset_grid(double min, double max, double step);

/// Default sweep: +-R_s/8 in 200 MHz steps (36 points at 28 GBaud).
SweepConfig default_sweep_config(int format);

SweepConfig sweep_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const SweepConfig& c);
SweepConfig load_sweep_config(const std::filesystem::path& path);

struct TrialRecord {
    Algorithm algorithm = Algorithm::Fft;
    double f_d_true = 0.0;
    double osnr_db = 0.0;
    double f_hat = 0.0;
    double normalized_sq_error = 0.0;
    bool failed = false;
};

/// Squared normalized error ((f_hat - f_d) * T_s)^2 with the difference wrapped
/// into [-1/8, 1/8): offsets R_s/4 apart are indistinguishable after the 4th power.
double normalized_sq_error(double f_hat, double f_d, double t_s) noexcept;

struct TrialKey {
    std::size_t offset_index = 0;
    std::size_t osnr_index = 0;
    std::size_t trial_index = 0;
};

/// Received sequence for one trial: carrier -> phase noise -> AWGN.
SymbolSequence simulate_received(const SweepConfig& c, double f_d, double osnr_db,
                                 const TrialKey& key);

/// Runs every configured estimator on one shared received sequence.
std::vector<TrialRecord> run_trial(const SweepConfig& c, double f_d, double osnr_db,
                                   const TrialKey& key);

struct SweepRow {
    Algorithm algorithm = Algorithm::Fft;
    double f_d_hz = 0.0; ///< unused for OSNR sweeps
    double osnr_db = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;
    double mse_normalized = 0.0;
};

enum class SweepKind { Offset, Osnr };

struct SweepResult {
    SweepKind kind = SweepKind::Offset;
    std::vector<SweepRow> rows;

    std::string to_csv() const;
};

/// One row per (offset, algorithm) at osnr_values.front() (noise-free if empty).
SweepResult sweep_offsets(const SweepConfig& c);
/// One row per (osnr, algorithm), averaged over the full offset grid.
SweepResult sweep_osnr(const SweepConfig& c);

// IQ files: little-endian float64 (re, im) pairs without header, or two-column CSV.
enum class IqFormat { Auto, Binary, Csv };

CVec read_iq_file(const std::filesystem::path& path, IqFormat fmt = IqFormat::Auto);
void write_iq_file(const std::filesystem::path& path, std::span<const cplx> samples,
                   IqFormat fmt = IqFormat::Binary);

FoeResult estimate_from_file(const std::filesystem::path& path, Algorithm a,
                             const EstimatorParams& p, IqFormat fmt = IqFormat::Auto);

nlohmann::json to_json(const FoeResult& r);

} // namespace apfoe
