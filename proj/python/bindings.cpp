#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "coordbeam/errors.hpp"
#include "coordbeam/harness.hpp"
#include "coordbeam/oracle.hpp"
#include "coordbeam/receiver.hpp"

namespace py = pybind11;
using namespace coordbeam;

namespace {

py::dict summary_dict(const StrategySummary& s) {
  py::dict d;
  d["strategy"] = std::string(to_string(s.strategy));
  d["mean_sum_rate"] = s.mean_sum_rate;
  d["stderr"] = s.stderr_sum_rate;
  d["mean_per_ue_min_rate"] = s.mean_min_rate;
  d["collision_rate"] = s.collision_rate;
  d["exchange_bits"] = s.exchange_bits;
  d["sum_rates"] = s.sum_rates;
  return d;
}

py::list run_sweep(const std::string& config_json, const std::string& axis,
                   const std::vector<double>& values) {
  const ScenarioConfig config = config_from_json(config_json);
  std::vector<SweepPoint> points;
  {
    py::gil_scoped_release release;
    points = sweep(config, sweep_axis_from_string(axis), values);
  }
  py::list out;
  for (const SweepPoint& p : points) {
    py::dict d;
    d["value"] = p.reported_value;
    d["disk_radius_m"] = p.disk_radius_m;
    d["snr_db"] = p.snr_db;
    d["noise_var"] = p.noise_var;
    py::list strategies;
    for (const StrategySummary& s : p.strategies) strategies.append(summary_dict(s));
    d["strategies"] = strategies;
    out.append(d);
  }
  return out;
}

std::string sweep_csv(const std::string& config_json, const std::string& axis,
                      const std::vector<double>& values) {
  const ScenarioConfig config = config_from_json(config_json);
  const SweepAxis a = sweep_axis_from_string(axis);
  std::ostringstream os;
  py::gil_scoped_release release;
  write_results_csv(os, config, a, sweep(config, a, values));
  return os.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Sub-6 GHz aided mmWave multi-user beam selection";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<InvalidParameter>(m, "InvalidParameter", PyExc_ValueError);
  py::register_exception<BudgetExceeded>(m, "BudgetExceeded", PyExc_RuntimeError);

  m.def("inverse_cosine_grid", [](int m) { return inverse_cosine_grid(m).angles(); },
        py::arg("num_beams"));
  m.def("steering_vector", &steering_vector, py::arg("num_antennas"), py::arg("angle"));
  m.def("codebook",
        [](int n, int m) { return CMatrix(build_codebook(n, m).matrix()); },
        py::arg("num_antennas"), py::arg("num_beams"),
        "N x M matrix whose columns are the codewords");
  m.def("association",
        [](int sub6_n, int mm_n) {
          const Codebook s6 = build_codebook(sub6_n, mm_n);
          const Codebook mm = build_codebook(mm_n, mm_n);
          return build_association(s6, s6, mm, mm).bs_sets;
        },
        py::arg("sub6_antennas"), py::arg("mm_antennas"),
        "mmWave beam sets of every sub-6 beam for one side of the link");
  m.def("lemma1_audit", py::overload_cast<int>(&lemma1_audit), py::arg("num_antennas"));
  m.def("lemma1_audit_distinct",
        [](int n) { return lemma1_audit_distinct(build_codebook(n, n)); },
        py::arg("num_antennas"));

  m.def("zf_combine",
        [](const CMatrix& h, double noise_var) {
          const CombinerOutput z = zf_combine(h, noise_var);
          py::dict d;
          d["combiner"] = z.combiner;
          d["sinr"] = z.sinr;
          d["sum_rate"] = z.sum_rate;
          d["condition_number"] = z.condition_number;
          d["pseudo_inverse"] = z.pseudo_inverse;
          return d;
        },
        py::arg("effective"), py::arg("noise_var"));
  m.def("sinr_schur", &sinr_schur, py::arg("effective"), py::arg("ue"), py::arg("noise_var"));
  m.def("sum_rate", [](const std::vector<double>& g) { return sum_rate(g); }, py::arg("sinrs"));

  m.def("exhaustive_search",
        [](const std::vector<CMatrix>& channels, double noise_var, std::uint64_t budget) {
          if (channels.empty()) throw InvalidParameter("need at least one channel");
          const Codebook bs = build_codebook(static_cast<int>(channels[0].rows()),
                                             static_cast<int>(channels[0].rows()));
          const Codebook ue = build_codebook(static_cast<int>(channels[0].cols()),
                                             static_cast<int>(channels[0].cols()));
          const ExhaustiveResult r =
              exhaustive_search(std::span<const CMatrix>(channels), bs, ue, noise_var, budget);
          std::vector<std::pair<int, int>> beams;
          for (const BeamPair& b : r.beams) beams.emplace_back(b.ue_beam, b.bs_beam);
          return py::make_tuple(r.sum_rate, beams);
        },
        py::arg("channels"), py::arg("noise_var"), py::arg("budget") = 1u << 20,
        "Best ZF sum-rate over M = N codebooks; returns (sum_rate, [(ue_beam, bs_beam)])");

  m.def("default_config", [] { return config_to_json(ScenarioConfig{}); });
  m.def("normalize_config", [](const std::string& text) {
    return config_to_json(config_from_json(text));
  }, py::arg("config_json"), "Validates a JSON config and fills in defaults");
  m.def("sweep", &run_sweep, py::arg("config_json"), py::arg("axis"), py::arg("values"));
  m.def("sweep_csv", &sweep_csv, py::arg("config_json"), py::arg("axis"), py::arg("values"));
  m.def("verify",
        [](std::uint64_t seed) {
          VerifyOptions o;
          o.seed = seed;
          VerifyReport r;
          {
            py::gil_scoped_release release;
            r = verify(o);
          }
          py::list checks;
          for (const CheckResult& c : r.checks) {
            checks.append(py::make_tuple(c.name, c.passed, c.measured, c.detail));
          }
          return checks;
        },
        py::arg("seed") = VerifyOptions{}.seed);
}
