#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "apfoe/channel.hpp"
#include "apfoe/complexity.hpp"
#include "apfoe/errors.hpp"
#include "apfoe/foe.hpp"
#include "apfoe/harness.hpp"
#include "apfoe/qam.hpp"

namespace py = pybind11;
using namespace apfoe;

namespace {

using CArray = py::array_t<cplx, py::array::c_style | py::array::forcecast>;

CVec to_cvec(const CArray& a) {
    if (a.ndim() != 1) throw std::invalid_argument("expected a 1-D complex array");
    return CVec(a.data(), a.data() + a.size());
}

CArray to_array(const CVec& v) {
    CArray out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

Algorithm algo_from(const std::string& name) {
    const auto a = parse_algorithm(name);
    if (!a) throw std::invalid_argument("unknown algorithm '" + name + "'");
    return *a;
}

py::dict result_dict(const FoeResult& r) {
    py::dict d;
    d["algorithm"] = std::string(to_string(r.algorithm));
    d["f_hat"] = r.f_hat;
    d["f_coarse"] = r.f_coarse;
    d["k_hat"] = r.k_hat;
    d["delta"] = r.delta;
    return d;
}

SweepConfig config_from(const py::object& cfg) {
    if (cfg.is_none()) return default_sweep_config(16);
    auto json_mod = py::module_::import("json");
    const auto text = json_mod.attr("dumps")(cfg).cast<std::string>();
    return sweep_config_from_json(nlohmann::json::parse(text));
}

} // namespace

PYBIND11_MODULE(_apfoe, m) {
    m.doc() = "Frequency-offset estimation for M-QAM (all-phase FFT and baselines)";

    py::register_exception<InsufficientSamples>(m, "InsufficientSamples", PyExc_ValueError);
    py::register_exception<DegenerateInput>(m, "DegenerateInput", PyExc_RuntimeError);
    py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);

    m.def("constellation", [](int order) { return to_array(build_constellation(order).points); },
          py::arg("order"));
    m.def("fourth_moment", [](int order) { return build_constellation(order).fourth_moment; },
          py::arg("order"));
    m.def("generate_symbols",
          [](int order, std::size_t count, std::uint64_t seed) {
              return to_array(generate_symbols(build_constellation(order), count, seed, 1.0).samples);
          },
          py::arg("order"), py::arg("count"), py::arg("seed"));

    m.def("apply_carrier",
          [](const CArray& x, double f_d, double symbol_rate, double phase) {
              return to_array(apply_carrier({to_cvec(x), 1.0 / symbol_rate}, f_d, phase).samples);
          },
          py::arg("x"), py::arg("f_d"), py::arg("symbol_rate") = 28e9, py::arg("phase") = 0.0);
    m.def("apply_phase_noise",
          [](const CArray& x, double combined_linewidth, double symbol_rate, std::uint64_t seed) {
              return to_array(
                  apply_phase_noise({to_cvec(x), 1.0 / symbol_rate}, combined_linewidth, seed).samples);
          },
          py::arg("x"), py::arg("combined_linewidth"), py::arg("symbol_rate") = 28e9, py::arg("seed"));
    m.def("add_awgn",
          [](const CArray& x, double snr_linear, std::uint64_t seed) {
              return to_array(add_awgn({to_cvec(x), 1.0}, snr_linear, seed).samples);
          },
          py::arg("x"), py::arg("snr_linear"), py::arg("seed"));
    m.def("osnr_to_snr", [](double db, double rs) { return osnr_to_snr(db, rs); }, py::arg("osnr_db"),
          py::arg("symbol_rate") = 28e9);

    m.def("samples_required",
          [](const std::string& algo, std::size_t n1, std::size_t n2) {
              return samples_required(algo_from(algo), EstimatorParams{n1, n2, 1.0});
          },
          py::arg("algorithm"), py::arg("n1") = 512, py::arg("n2") = 256);
    m.def("estimate",
          [](const CArray& x, const std::string& algo, std::size_t n1, std::size_t n2,
             double symbol_rate) {
              const EstimatorParams p{n1, n2, 1.0 / symbol_rate};
              SymbolSequence rx{to_cvec(x), p.t_s};
              const Algorithm a = algo_from(algo);
              FoeResult r;
              {
                  py::gil_scoped_release release;
                  r = estimate(a, rx, p);
              }
              return result_dict(r);
          },
          py::arg("x"), py::arg("algorithm") = "apfft", py::arg("n1") = 512, py::arg("n2") = 256,
          py::arg("symbol_rate") = 28e9);

    m.def("mul_counts",
          [](std::uint64_t n1, std::uint64_t n2) {
              const auto r = build_report(n1, n2);
              py::dict d;
              d["czt"] = r.mul_czt;
              d["zoomfft"] = r.mul_zoomfft;
              d["apfft"] = r.mul_apfft;
              d["reduction_vs_czt"] = r.reduction_vs_czt;
              d["reduction_vs_zoomfft"] = r.reduction_vs_zoomfft;
              return d;
          },
          py::arg("n1"), py::arg("n2"));

    m.def("default_config",
          [](int format) {
              auto json_mod = py::module_::import("json");
              return json_mod.attr("loads")(to_json(default_sweep_config(format)).dump());
          },
          py::arg("format") = 16);
    m.def("sweep_offsets",
          [](const py::object& cfg) {
              const auto c = config_from(cfg);
              py::gil_scoped_release release;
              return sweep_offsets(c).to_csv();
          },
          py::arg("config") = py::none());
    m.def("sweep_osnr",
          [](const py::object& cfg) {
              const auto c = config_from(cfg);
              py::gil_scoped_release release;
              return sweep_osnr(c).to_csv();
          },
          py::arg("config") = py::none());
}
