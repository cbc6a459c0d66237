#include "apfoe/harness.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "apfoe/channel.hpp"
#include "apfoe/errors.hpp"
#include "apfoe/rng.hpp"
#include "apfoe/spectral.hpp"

namespace apfoe {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Config

std::size_t SweepConfig::samples_per_trial() const noexcept {
    std::size_t n = 2;
    const auto p = estimator_params();
    for (auto a : algorithms) n = std::max(n, samples_required(a, p));
    return n;
}

void SweepConfig::validate() const {
    if (source == SignalSource::Qam && format != 16 && format != 64)
        throw std::invalid_argument("SweepConfig: format must be 16 or 64");
    if (!(symbol_rate > 0.0)) throw std::invalid_argument("SweepConfig: symbol_rate must be > 0");
    if (linewidth_per_laser < 0.0)
        throw std::invalid_argument("SweepConfig: linewidth_per_laser must be >= 0");
    if (!(reference_bandwidth > 0.0))
        throw std::invalid_argument("SweepConfig: reference_bandwidth must be > 0");
    if (algorithms.empty()) throw std::invalid_argument("SweepConfig: no algorithms");
    if (trials_per_point < 1) throw std::invalid_argument("SweepConfig: trials_per_point must be >= 1");
    if (threads < 1) throw std::invalid_argument("SweepConfig: threads must be >= 1");
    estimator_params().validate();
    if (std::find(algorithms.begin(), algorithms.end(), Algorithm::ZoomFft) != algorithms.end()
        && n1 != 2 * n2)
        throw std::invalid_argument("SweepConfig: zoomfft requires n1 == 2 * n2");
    const double limit = symbol_rate / 8.0 * (1.0 + 1e-12);
    for (double f : offsets)
        if (!(std::abs(f) <= limit))
            throw std::invalid_argument(fmt::format(
                "SweepConfig: offset {} Hz outside +-symbol_rate/8 = {} Hz", f, symbol_rate / 8.0));
}

std::vector<double> offset_grid(double min, double max, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("offset_grid: step must be > 0");
    if (max < min) throw std::invalid_argument("offset_grid: max < min");
    const auto count = static_cast<std::size_t>(std::llround((max - min) / step)) + 1;
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = min + static_cast<double>(i) * step;
    return out;
}

SweepConfig default_sweep_config(int format) {
    SweepConfig c;
    c.format = format;
    if (format == 64) {
        c.n1 = 1024;
        c.n2 = 512;
        c.osnr_values = {28.0};
    } else {
        c.osnr_values = {22.0};
    }
    const double edge = c.symbol_rate / 8.0;
    c.offsets = offset_grid(-edge, edge, 200e6);
    return c;
}

namespace {

double osnr_from_json(const json& v) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "Infinity" || s == "+inf")
            return std::numeric_limits<double>::infinity();
    }
    throw ParseError("config: osnr value must be a number or \"inf\"");
}

json osnr_to_json(double v) {
    if (std::isinf(v)) return "inf";
    return v;
}

std::string source_name(SignalSource s) { return s == SignalSource::Tone ? "tone" : "qam"; }

} // namespace

SweepConfig sweep_config_from_json(const json& j) {
    if (!j.is_object()) throw ParseError("config: top level must be a JSON object");
    static const char* known[] = {"format",   "source",          "symbol_rate", "linewidth_per_laser",
                                  "reference_bandwidth", "algorithms", "n1", "n2", "offsets",
                                  "osnr_values", "trials_per_point", "master_seed", "threads"};
    for (const auto& [key, _] : j.items())
        if (std::find(std::begin(known), std::end(known), key) == std::end(known))
            throw ParseError("config: unknown field '" + key + "'");

    try {
        SweepConfig c = default_sweep_config(j.value("format", 16));
        if (j.contains("source")) {
            const auto s = j.at("source").get<std::string>();
            if (s == "qam") c.source = SignalSource::Qam;
            else if (s == "tone") c.source = SignalSource::Tone;
            else throw ParseError("config: source must be \"qam\" or \"tone\"");
        }
        c.symbol_rate = j.value("symbol_rate", c.symbol_rate);
        c.linewidth_per_laser = j.value("linewidth_per_laser", c.linewidth_per_laser);
        c.reference_bandwidth = j.value("reference_bandwidth", c.reference_bandwidth);
        if (j.contains("algorithms")) {
            c.algorithms.clear();
            for (const auto& a : j.at("algorithms")) {
                const auto name = a.get<std::string>();
                const auto algo = parse_algorithm(name);
                if (!algo) throw ParseError("config: unknown algorithm '" + name + "'");
                c.algorithms.push_back(*algo);
            }
        }
        c.n1 = j.value("n1", c.n1);
        c.n2 = j.value("n2", c.n2);
        if (j.contains("offsets")) {
            const auto& o = j.at("offsets");
            if (o.is_array()) c.offsets = o.get<std::vector<double>>();
            else if (o.is_object())
                c.offsets = offset_grid(o.at("min").get<double>(), o.at("max").get<double>(),
                                        o.at("step").get<double>());
            else throw ParseError("config: offsets must be a list or {min, max, step}");
        } else if (j.contains("symbol_rate")) {
            const double edge = c.symbol_rate / 8.0;
            c.offsets = offset_grid(-edge, edge, 200e6);
        }
        if (j.contains("osnr_values")) {
            c.osnr_values.clear();
            for (const auto& v : j.at("osnr_values")) c.osnr_values.push_back(osnr_from_json(v));
        }
        c.trials_per_point = j.value("trials_per_point", c.trials_per_point);
        c.master_seed = j.value("master_seed", c.master_seed);
        c.threads = j.value("threads", c.threads);
        return c;
    } catch (const json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

json to_json(const SweepConfig& c) {
    json algos = json::array();
    for (auto a : c.algorithms) algos.push_back(std::string(to_string(a)));
    json osnr = json::array();
    for (double v : c.osnr_values) osnr.push_back(osnr_to_json(v));
    return {{"format", c.format},
            {"source", source_name(c.source)},
            {"symbol_rate", c.symbol_rate},
            {"linewidth_per_laser", c.linewidth_per_laser},
            {"reference_bandwidth", c.reference_bandwidth},
            {"algorithms", algos},
            {"n1", c.n1},
            {"n2", c.n2},
            {"offsets", c.offsets},
            {"osnr_values", osnr},
            {"trials_per_point", c.trials_per_point},
            {"master_seed", c.master_seed},
            {"threads", c.threads}};
}

SweepConfig load_sweep_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open config file " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("config " + path.string() + ": " + e.what());
    }
    return sweep_config_from_json(j);
}

// ---------------------------------------------------------------------------
// Trials

double normalized_sq_error(double f_hat, double f_d, double t_s) noexcept {
    double e = (f_hat - f_d) * t_s;
    e -= 0.25 * std::round(4.0 * e);
    return e * e;
}

SymbolSequence simulate_received(const SweepConfig& c, double f_d, double osnr_db,
                                 const TrialKey& key) {
    const std::uint64_t base =
        derive_seed({c.master_seed, key.offset_index, key.osnr_index, key.trial_index});
    const std::size_t n = c.samples_per_trial();
    const double t_s = c.t_s();

    SymbolSequence tx;
    if (c.source == SignalSource::Tone) {
        tx = SymbolSequence{CVec(n, cplx{1.0, 0.0}), t_s};
    } else {
        tx = generate_symbols(build_constellation(c.format), n, derive_seed({base, 1}), t_s);
    }

    Rng phase_rng(derive_seed({base, 2}));
    const double u = static_cast<double>(phase_rng() >> 11) * 0x1.0p-53;
    const double initial_phase = 2.0 * std::numbers::pi * u;

    auto rx = apply_carrier(tx, f_d, initial_phase);
    rx = apply_phase_noise(rx, c.combined_linewidth(), derive_seed({base, 3}));
    if (!std::isinf(osnr_db))
        rx = add_awgn(rx, osnr_to_snr(osnr_db, c.symbol_rate, c.reference_bandwidth),
                      derive_seed({base, 4}));
    return rx;
}

std::vector<TrialRecord> run_trial(const SweepConfig& c, double f_d, double osnr_db,
                                   const TrialKey& key) {
    const SymbolSequence rx = simulate_received(c, f_d, osnr_db, key);
    const EstimatorParams p = c.estimator_params();

    std::vector<TrialRecord> out;
    out.reserve(c.algorithms.size());
    for (auto a : c.algorithms) {
        TrialRecord r;
        r.algorithm = a;
        r.f_d_true = f_d;
        r.osnr_db = osnr_db;
        try {
            r.f_hat = estimate(a, rx, p).f_hat;
            r.normalized_sq_error = normalized_sq_error(r.f_hat, f_d, p.t_s);
        } catch (const DegenerateInput&) {
            r.failed = true;
        }
        out.push_back(r);
    }
    return out;
}

namespace {

struct WorkItem {
    double f_d;
    double osnr_db;
    TrialKey key;
};

// Results are stored by work-item index, so the reduction order (and every
// output byte) is independent of the number of threads.
std::vector<std::vector<TrialRecord>> run_all(const SweepConfig& c,
                                              const std::vector<WorkItem>& items) {
    std::vector<std::vector<TrialRecord>> results(items.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < items.size(); i = next++)
            results[i] = run_trial(c, items[i].f_d, items[i].osnr_db, items[i].key);
    };

    const unsigned nthreads = std::max(1u, std::min<unsigned>(c.threads, static_cast<unsigned>(items.size())));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(nthreads);
        for (unsigned t = 0; t < nthreads; ++t) pool.emplace_back(worker);
    }
    return results;
}

struct Accumulator {
    double sum = 0.0;
    std::size_t trials = 0;
    std::size_t failures = 0;

    void add(const TrialRecord& r) {
        ++trials;
        if (r.failed) ++failures;
        else sum += r.normalized_sq_error;
    }
    double mean() const {
        const std::size_t ok = trials - failures;
        return ok ? sum / static_cast<double>(ok) : std::numeric_limits<double>::quiet_NaN();
    }
};

} // namespace

SweepResult sweep_offsets(const SweepConfig& c) {
    c.validate();
    const double osnr =
        c.osnr_values.empty() ? std::numeric_limits<double>::infinity() : c.osnr_values.front();

    std::vector<WorkItem> items;
    items.reserve(c.offsets.size() * c.trials_per_point);
    for (std::size_t i = 0; i < c.offsets.size(); ++i)
        for (std::size_t t = 0; t < c.trials_per_point; ++t)
            items.push_back({c.offsets[i], osnr, {i, 0, t}});
    const auto results = run_all(c, items);

    SweepResult out;
    out.kind = SweepKind::Offset;
    const std::size_t na = c.algorithms.size();
    for (std::size_t i = 0; i < c.offsets.size(); ++i) {
        std::vector<Accumulator> acc(na);
        for (std::size_t t = 0; t < c.trials_per_point; ++t) {
            const auto& recs = results[i * c.trials_per_point + t];
            for (std::size_t a = 0; a < na; ++a) acc[a].add(recs[a]);
        }
        for (std::size_t a = 0; a < na; ++a)
            out.rows.push_back({c.algorithms[a], c.offsets[i], osnr, acc[a].trials, acc[a].failures,
                                acc[a].mean()});
    }
    return out;
}

SweepResult sweep_osnr(const SweepConfig& c) {
    c.validate();
    if (c.osnr_values.empty()) throw std::invalid_argument("sweep_osnr: no OSNR values");

    std::vector<WorkItem> items;
    const std::size_t per_osnr = c.offsets.size() * c.trials_per_point;
    items.reserve(c.osnr_values.size() * per_osnr);
    for (std::size_t j = 0; j < c.osnr_values.size(); ++j)
        for (std::size_t i = 0; i < c.offsets.size(); ++i)
            for (std::size_t t = 0; t < c.trials_per_point; ++t)
                items.push_back({c.offsets[i], c.osnr_values[j], {i, j, t}});
    const auto results = run_all(c, items);

    SweepResult out;
    out.kind = SweepKind::Osnr;
    const std::size_t na = c.algorithms.size();
    for (std::size_t j = 0; j < c.osnr_values.size(); ++j) {
        std::vector<Accumulator> acc(na);
        for (std::size_t k = 0; k < per_osnr; ++k) {
            const auto& recs = results[j * per_osnr + k];
            for (std::size_t a = 0; a < na; ++a) acc[a].add(recs[a]);
        }
        for (std::size_t a = 0; a < na; ++a)
            out.rows.push_back({c.algorithms[a], std::numeric_limits<double>::quiet_NaN(),
                                c.osnr_values[j], acc[a].trials, acc[a].failures, acc[a].mean()});
    }
    return out;
}

namespace {
std::string sci(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return fmt::format("{:.16e}", v);
}
} // namespace

std::string SweepResult::to_csv() const {
    std::string out;
    if (kind == SweepKind::Offset) {
        out = "algorithm,f_d_hz,osnr_db,trials,failures,mse_normalized\n";
        for (const auto& r : rows)
            out += fmt::format("{},{},{},{},{},{}\n", to_string(r.algorithm), sci(r.f_d_hz),
                               sci(r.osnr_db), r.trials, r.failures, sci(r.mse_normalized));
    } else {
        out = "algorithm,osnr_db,trials,failures,mse_normalized\n";
        for (const auto& r : rows)
            out += fmt::format("{},{},{},{},{}\n", to_string(r.algorithm), sci(r.osnr_db), r.trials,
                               r.failures, sci(r.mse_normalized));
    }
    return out;
}

// ---------------------------------------------------------------------------
// IQ files

namespace {

IqFormat resolve_format(const std::filesystem::path& path, IqFormat fmt) {
    if (fmt != IqFormat::Auto) return fmt;
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char ch) { return std::tolower(ch); });
    return (ext == ".csv" || ext == ".txt") ? IqFormat::Csv : IqFormat::Binary;
}

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::little) return v;
    std::uint64_t r = 0;
    for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
    return r;
}

double load_le_double(const char* p) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, p, 8);
    bits = to_little_endian(bits);
    double d = 0.0;
    std::memcpy(&d, &bits, 8);
    return d;
}

void store_le_double(std::ostream& os, double d) {
    std::uint64_t bits = 0;
    std::memcpy(&bits, &d, 8);
    bits = to_little_endian(bits);
    char buf[8];
    std::memcpy(buf, &bits, 8);
    os.write(buf, 8);
}

bool parse_pair(const std::string& line, cplx& out) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) return false;
    try {
        std::size_t used = 0;
        const std::string re_s = line.substr(0, comma);
        const std::string im_s = line.substr(comma + 1);
        const double re = std::stod(re_s, &used);
        if (re_s.find_first_not_of(" \t\r", used) != std::string::npos) return false;
        const double im = std::stod(im_s, &used);
        if (im_s.find_first_not_of(" \t\r", used) != std::string::npos) return false;
        out = {re, im};
        return true;
    } catch (const std::exception&) {
        return false;
    }
}

CVec read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open IQ file " + path.string());
    CVec out;
    std::string line;
    std::size_t lineno = 0;
    bool first_data_line = true;
    while (std::getline(in, line)) {
        ++lineno;
        const auto start = line.find_first_not_of(" \t\r");
        if (start == std::string::npos || line[start] == '#') continue;
        cplx v;
        if (parse_pair(line, v)) {
            out.push_back(v);
        } else if (!first_data_line) {
            throw ParseError(fmt::format("{}:{}: expected 'real,imag'", path.string(), lineno));
        }
        // A non-numeric first line is taken as a column header.
        first_data_line = false;
    }
    if (out.empty()) throw ParseError("IQ file " + path.string() + " contains no samples");
    return out;
}

CVec read_binary(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open IQ file " + path.string());
    const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (bytes.empty()) throw ParseError("IQ file " + path.string() + " is empty");
    if (bytes.size() % 16 != 0)
        throw ParseError(fmt::format("IQ file {}: size {} bytes is not a multiple of 16",
                                     path.string(), bytes.size()));
    CVec out(bytes.size() / 16);
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = {load_le_double(bytes.data() + 16 * i), load_le_double(bytes.data() + 16 * i + 8)};
    return out;
}

} // namespace

CVec read_iq_file(const std::filesystem::path& path, IqFormat fmt) {
    if (!std::filesystem::exists(path)) throw ParseError("IQ file not found: " + path.string());
    return resolve_format(path, fmt) == IqFormat::Csv ? read_csv(path) : read_binary(path);
}

void write_iq_file(const std::filesystem::path& path, std::span<const cplx> samples, IqFormat fmt) {
    if (resolve_format(path, fmt) == IqFormat::Csv) {
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        for (const auto& s : samples) out << fmt::format("{:.17g},{:.17g}\n", s.real(), s.imag());
    } else {
        std::ofstream out(path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        for (const auto& s : samples) {
            store_le_double(out, s.real());
            store_le_double(out, s.imag());
        }
    }
}

FoeResult estimate_from_file(const std::filesystem::path& path, Algorithm a,
                             const EstimatorParams& p, IqFormat fmt) {
    SymbolSequence rx{read_iq_file(path, fmt), p.t_s};
    return estimate(a, rx, p);
}

json to_json(const FoeResult& r) {
    return {{"algorithm", std::string(to_string(r.algorithm))},
            {"f_hat_hz", r.f_hat},
            {"f_coarse_hz", r.f_coarse},
            {"k_hat", r.k_hat},
            {"delta", r.delta}};
}

} // namespace apfoe
