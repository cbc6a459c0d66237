// apfoe: command-line front end for the frequency-offset estimators.
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11/CLI11.hpp>
#include <fmt/format.h>

#include "apfoe/channel.hpp"
#include "apfoe/complexity.hpp"
#include "apfoe/errors.hpp"
#include "apfoe/foe.hpp"
#include "apfoe/harness.hpp"
#include "apfoe/qam.hpp"

namespace {

using namespace apfoe;

constexpr int kUsageError = 1;
constexpr int kRuntimeError = 2;

struct SweepFlags {
    std::string config;
    std::string out;
    int qam = 0;
    std::string source;
    double symbol_rate = 0.0;
    double linewidth = -1.0;
    std::vector<std::string> algos;
    std::size_t n1 = 0, n2 = 0;
    double offset_min = NAN, offset_max = NAN, offset_step = NAN;
    std::vector<std::string> osnr;
    std::size_t trials = 0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    unsigned threads = 0;
};

void add_sweep_flags(CLI::App* cmd, SweepFlags& f) {
    cmd->add_option("--config", f.config, "JSON sweep configuration")->check(CLI::ExistingFile);
    cmd->add_option("--qam", f.qam, "Modulation order")->check(CLI::IsMember({16, 64}));
    cmd->add_option("--source", f.source, "Signal source")->check(CLI::IsMember({"qam", "tone"}));
    cmd->add_option("--symbol-rate", f.symbol_rate, "Symbol rate, Baud");
    cmd->add_option("--linewidth", f.linewidth, "Linewidth per laser, Hz");
    cmd->add_option("--algos", f.algos, "Estimators (fft apfft czt zoomfft diff)")->delimiter(',');
    cmd->add_option("--n1", f.n1, "First-stage DFT length");
    cmd->add_option("--n2", f.n2, "Refinement length");
    cmd->add_option("--offset-min", f.offset_min, "Offset grid start, Hz");
    cmd->add_option("--offset-max", f.offset_max, "Offset grid end, Hz");
    cmd->add_option("--offset-step", f.offset_step, "Offset grid step, Hz");
    cmd->add_option("--osnr", f.osnr, "OSNR values in dB ('inf' disables noise)")->delimiter(',');
    cmd->add_option("--trials", f.trials, "Trials per point");
    cmd->add_option("--seed", f.seed, "Master seed")->each([&f](const std::string&) { f.seed_set = true; });
    cmd->add_option("--threads", f.threads, "Worker threads");
    cmd->add_option("--out", f.out, "Output CSV (default stdout)");
}

double parse_osnr(const std::string& s) {
    if (s == "inf") return std::numeric_limits<double>::infinity();
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != s.size()) throw CLI::ValidationError("--osnr", "bad value '" + s + "'");
    return v;
}

Algorithm parse_algo(const std::string& name) {
    const auto a = parse_algorithm(name);
    if (!a) throw CLI::ValidationError("--algo", "unknown algorithm '" + name + "'");
    return *a;
}

SweepConfig build_config(const SweepFlags& f) {
    SweepConfig c = f.config.empty() ? default_sweep_config(f.qam ? f.qam : 16)
                                     : load_sweep_config(f.config);
    if (f.qam && !f.config.empty()) {
        // Switching format also switches the default transform lengths.
        const auto d = default_sweep_config(f.qam);
        c.format = f.qam;
        c.n1 = d.n1;
        c.n2 = d.n2;
    }
    if (!f.source.empty()) c.source = f.source == "tone" ? SignalSource::Tone : SignalSource::Qam;
    if (f.symbol_rate > 0.0) {
        c.symbol_rate = f.symbol_rate;
        const double edge = c.symbol_rate / 8.0;
        c.offsets = offset_grid(-edge, edge, 200e6);
    }
    if (f.linewidth >= 0.0) c.linewidth_per_laser = f.linewidth;
    if (!f.algos.empty()) {
        c.algorithms.clear();
        for (const auto& a : f.algos) c.algorithms.push_back(parse_algo(a));
    }
    if (f.n1) c.n1 = f.n1;
    if (f.n2) c.n2 = f.n2;
    const bool any_grid = !std::isnan(f.offset_min) || !std::isnan(f.offset_max) || !std::isnan(f.offset_step);
    if (any_grid) {
        const double edge = c.symbol_rate / 8.0;
        c.offsets = offset_grid(std::isnan(f.offset_min) ? -edge : f.offset_min,
                                std::isnan(f.offset_max) ? edge : f.offset_max,
                                std::isnan(f.offset_step) ? 200e6 : f.offset_step);
    }
    if (!f.osnr.empty()) {
        c.osnr_values.clear();
        for (const auto& s : f.osnr) c.osnr_values.push_back(parse_osnr(s));
    }
    if (f.trials) c.trials_per_point = f.trials;
    if (f.seed_set) c.master_seed = f.seed;
    if (f.threads) c.threads = f.threads;
    c.validate();
    return c;
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

IqFormat parse_iq_format(const std::string& s) {
    if (s == "binary") return IqFormat::Binary;
    if (s == "csv") return IqFormat::Csv;
    return IqFormat::Auto;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Frequency-offset estimation for M-QAM: all-phase FFT and two-stage baselines"};
    app.require_subcommand(1);

    // complexity
    auto* cx = app.add_subcommand("complexity", "Real-multiplication counts per estimator");
    std::vector<std::size_t> cx_n1, cx_n2;
    std::string cx_format = "table";
    cx->add_option("--n1", cx_n1, "First-stage length(s)")->delimiter(',');
    cx->add_option("--n2", cx_n2, "Refinement length(s)")->delimiter(',');
    cx->add_option("--format", cx_format, "Output format")->check(CLI::IsMember({"table", "json", "csv"}));

    // sweeps
    SweepFlags off_flags, osnr_flags;
    auto* so = app.add_subcommand("sweep-offset", "MSE versus frequency offset");
    add_sweep_flags(so, off_flags);
    auto* sn = app.add_subcommand("sweep-osnr", "MSE versus OSNR, averaged over offsets");
    add_sweep_flags(sn, osnr_flags);

    // estimate
    auto* est = app.add_subcommand("estimate", "Estimate the offset of a recorded IQ file");
    std::string est_file, est_algo = "apfft", est_fmt = "auto";
    std::size_t est_n1 = 512, est_n2 = 256;
    double est_rs = 28e9;
    est->add_option("file", est_file, "IQ file (binary float64 pairs, or .csv/.txt)")->required();
    est->add_option("--algo", est_algo, "Estimator")->check(CLI::IsMember({"fft", "apfft", "czt", "zoomfft", "diff"}));
    est->add_option("--n1", est_n1, "First-stage length");
    est->add_option("--n2", est_n2, "Refinement length");
    est->add_option("--symbol-rate", est_rs, "Symbol rate, Baud");
    est->add_option("--input-format", est_fmt, "Input format")->check(CLI::IsMember({"auto", "binary", "csv"}));

    // gen-tone
    auto* gen = app.add_subcommand("gen-tone", "Write a synthetic offset signal to an IQ file");
    double g_freq = 0.0, g_rs = 28e9, g_amp = 1.0, g_phase = 0.0, g_lw = 0.0;
    std::size_t g_count = 1535;
    std::string g_out, g_fmt = "auto", g_osnr = "inf";
    int g_qam = 0;
    std::uint64_t g_seed = 1;
    gen->add_option("--freq", g_freq, "Offset, Hz")->required();
    gen->add_option("--count", g_count, "Number of samples");
    gen->add_option("--out", g_out, "Output file")->required();
    gen->add_option("--symbol-rate", g_rs, "Symbol rate, Baud");
    gen->add_option("--amplitude", g_amp, "Amplitude");
    gen->add_option("--phase", g_phase, "Initial phase, rad");
    gen->add_option("--qam", g_qam, "Modulate random M-QAM symbols instead of a pure tone")
        ->check(CLI::IsMember({16, 64}));
    gen->add_option("--osnr", g_osnr, "OSNR, dB ('inf' for none)");
    gen->add_option("--linewidth", g_lw, "Linewidth per laser, Hz");
    gen->add_option("--seed", g_seed, "Seed");
    gen->add_option("--output-format", g_fmt, "Output format")->check(CLI::IsMember({"auto", "binary", "csv"}));

    if (argc <= 1) {
        std::cerr << app.help();
        return kUsageError;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    }

    try {
        if (*cx) {
            if (cx_n1.empty() && cx_n2.empty()) {
                cx_n1 = {512, 1024};
                cx_n2 = {256, 512};
            }
            if (cx_n1.size() != cx_n2.size()) {
                std::cerr << "complexity: --n1 and --n2 need the same number of values\n";
                return kUsageError;
            }
            std::vector<ComplexityReport> rows;
            for (std::size_t i = 0; i < cx_n1.size(); ++i) rows.push_back(build_report(cx_n1[i], cx_n2[i]));
            std::cout << (cx_format == "json" ? format_json(rows)
                          : cx_format == "csv" ? format_csv(rows)
                                               : format_table(rows));
        } else if (*so) {
            emit(sweep_offsets(build_config(off_flags)).to_csv(), off_flags.out);
        } else if (*sn) {
            emit(sweep_osnr(build_config(osnr_flags)).to_csv(), osnr_flags.out);
        } else if (*est) {
            const EstimatorParams p{est_n1, est_n2, 1.0 / est_rs};
            const auto r = estimate_from_file(est_file, parse_algo(est_algo), p, parse_iq_format(est_fmt));
            std::cout << to_json(r).dump(2) << "\n";
        } else if (*gen) {
            if (g_count == 0) {
                std::cerr << "gen-tone: --count must be > 0\n";
                return kUsageError;
            }
            SymbolSequence tx;
            if (g_qam) {
                tx = generate_symbols(build_constellation(g_qam), g_count, g_seed, 1.0 / g_rs);
            } else {
                tx = SymbolSequence{CVec(g_count, cplx{1.0, 0.0}), 1.0 / g_rs};
            }
            for (auto& s : tx.samples) s *= g_amp;
            auto rx = apply_carrier(tx, g_freq, g_phase);
            if (g_lw > 0.0) rx = apply_phase_noise(rx, 2.0 * g_lw, g_seed + 1);
            const double osnr = parse_osnr(g_osnr);
            if (!std::isinf(osnr)) {
                rx = add_awgn(rx, osnr_to_snr(osnr, g_rs), g_seed + 2);
                if (g_amp != 1.0) std::cerr << "gen-tone: note: OSNR assumes unit signal power\n";
            }
            write_iq_file(g_out, rx.samples, parse_iq_format(g_fmt));
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kRuntimeError;
    }
    return 0;
}
