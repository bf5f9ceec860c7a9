// SPDX-License-Identifier: Apache-2.0
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "beamsched/acceptance.hpp"
#include "beamsched/channel.hpp"
#include "beamsched/harness.hpp"
#include "beamsched/quantize.hpp"
#include "beamsched/rates.hpp"
#include "beamsched/schedulers.hpp"

namespace py = pybind11;
using namespace beamsched;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Uplink multi-user MIMO scheduling with low-resolution ADCs";

  py::register_exception<SingularMatrixError>(m, "SingularMatrixError", PyExc_ArithmeticError);

  py::class_<Rng>(m, "Rng", "Deterministic 64-bit Mersenne Twister stream")
      .def(py::init<std::uint64_t>(), py::arg("seed"));
  m.def("derive_seed", &derive_seed, py::arg("master"), py::arg("stream"));

  py::class_<SystemConfig>(m, "SystemConfig")
      .def(py::init<>())
      .def_readwrite("num_antennas", &SystemConfig::num_antennas)
      .def_readwrite("num_users", &SystemConfig::num_users)
      .def_readwrite("num_scheduled", &SystemConfig::num_scheduled)
      .def_readwrite("num_paths", &SystemConfig::num_paths)
      .def_readwrite("num_stored_beams", &SystemConfig::num_stored_beams)
      .def_readwrite("transmit_power", &SystemConfig::transmit_power)
      .def_readwrite("ortho_threshold", &SystemConfig::ortho_threshold)
      .def_readwrite("beam_overlap_limit", &SystemConfig::beam_overlap_limit)
      .def_readwrite("antenna_spacing_ratio", &SystemConfig::antenna_spacing_ratio)
      .def("validate", &SystemConfig::validate);

  // channel
  py::class_<UserChannel>(m, "UserChannel")
      .def_readonly("path_gains", &UserChannel::path_gains)
      .def_readonly("path_angles", &UserChannel::path_angles)
      .def_readonly("antenna_vector", &UserChannel::antenna_vector);

  py::enum_<PowerSpread>(m, "PowerSpread")
      .value("equal", PowerSpread::equal)
      .value("single_beam", PowerSpread::single_beam)
      .value("random_dirichlet", PowerSpread::random_dirichlet);

  py::class_<VirtualChannelSpec>(m, "VirtualChannelSpec")
      .def(py::init<>())
      .def_readwrite("support", &VirtualChannelSpec::support)
      .def_readwrite("norm_sq", &VirtualChannelSpec::norm_sq)
      .def_readwrite("spread", &VirtualChannelSpec::spread)
      .def_readwrite("num_beams", &VirtualChannelSpec::num_beams);

  m.def("steering_vector", &steering_vector, py::arg("theta"), py::arg("num_antennas"),
        py::arg("d_over_lambda") = 0.5);
  m.def("dft_codebook", &dft_codebook, py::arg("num_antennas"));
  m.def("draw_user_channel", &draw_user_channel, py::arg("rng"), py::arg("num_antennas"),
        py::arg("num_paths"), py::arg("d_over_lambda") = 0.5);
  m.def("draw_user_channel_on_grid", &draw_user_channel_on_grid, py::arg("rng"),
        py::arg("num_antennas"), py::arg("num_paths"));
  m.def("to_beamspace", &to_beamspace, py::arg("channel"), py::arg("codebook"));
  m.def("make_virtual_channel", &make_virtual_channel, py::arg("spec"), py::arg("rng"));
  m.def("dominant_beams", &dominant_beams, py::arg("beam_channel"), py::arg("num_stored"));

  // quantize
  py::class_<AqnmParams>(m, "AqnmParams")
      .def_readonly("bits", &AqnmParams::bits)
      .def_readonly("beta", &AqnmParams::beta)
      .def_readonly("alpha", &AqnmParams::alpha)
      .def_static("from_bits", &AqnmParams::from_bits, py::arg("bits"))
      .def_static("from_beta", &AqnmParams::from_beta, py::arg("beta"))
      .def_static("infinite_resolution", &AqnmParams::infinite_resolution);

  py::class_<LloydMaxCodebook>(m, "LloydMaxCodebook")
      .def_readonly("levels", &LloydMaxCodebook::levels)
      .def_readonly("thresholds", &LloydMaxCodebook::thresholds)
      .def_readonly("distortion", &LloydMaxCodebook::distortion);
  m.def("lloyd_max_codebook", &lloyd_max_codebook, py::arg("bits"),
        py::return_value_policy::reference);
  m.def("beta_for_bits", &beta_for_bits, py::arg("bits"));
  m.def("quantization_covariance", &quantization_covariance, py::arg("beam_channels"),
        py::arg("rho"), py::arg("params"));

  py::class_<QuantizedRxSample>(m, "QuantizedRxSample")
      .def_readonly("analog", &QuantizedRxSample::analog)
      .def_readonly("quantized", &QuantizedRxSample::quantized);
  m.def("simulate_quantizer", &simulate_quantizer, py::arg("input"), py::arg("bits"),
        py::arg("input_variance"));

  // rates
  py::class_<RateReport>(m, "RateReport")
      .def_readonly("per_user", &RateReport::per_user)
      .def_readonly("sum", &RateReport::sum);
  m.def("zf_combiner", &zf_combiner, py::arg("beam_channels"));
  m.def("user_rate", &user_rate, py::arg("beam_channels"), py::arg("user"), py::arg("rho"),
        py::arg("params"));
  m.def("sum_rate", &sum_rate, py::arg("beam_channels"), py::arg("rho"), py::arg("params"));
  m.def("approx_sinr", &approx_sinr, py::arg("beam_channels"), py::arg("user"), py::arg("rho"),
        py::arg("params"));
  m.def("closed_form_single_user_rate", &closed_form_single_user_rate, py::arg("norm_sq"),
        py::arg("num_paths"), py::arg("rho"), py::arg("alpha"));
  m.def("rate_limit_infinite_power", &rate_limit_infinite_power, py::arg("num_paths"),
        py::arg("alpha"));

  // schedulers
  py::class_<ScheduleTrace>(m, "ScheduleTrace")
      .def_readonly("selected", &ScheduleTrace::selected)
      .def_readonly("candidate_sizes", &ScheduleTrace::candidate_sizes)
      .def_readonly("rates", &ScheduleTrace::rates)
      .def_readonly("algorithm", &ScheduleTrace::algorithm);

  m.def(
      "schedule_css",
      [](const Eigen::MatrixXcd& ch, const SystemConfig& cfg, const AqnmParams& p) {
        return schedule_css(ch, cfg, p);
      },
      py::arg("all_beam_channels"), py::arg("cfg"), py::arg("params"));
  m.def(
      "schedule_greedy",
      [](const Eigen::MatrixXcd& ch, const SystemConfig& cfg, const AqnmParams& p) {
        return schedule_greedy(ch, cfg, p);
      },
      py::arg("all_beam_channels"), py::arg("cfg"), py::arg("params"));
  m.def("schedule_sus", &schedule_sus, py::arg("all_beam_channels"), py::arg("cfg"),
        py::arg("report_params"));
  m.def("schedule_beam_select", &schedule_beam_select, py::arg("all_beam_channels"),
        py::arg("cfg"), py::arg("report_params"));
  m.def("schedule_random", &schedule_random, py::arg("all_beam_channels"), py::arg("cfg"),
        py::arg("report_params"), py::arg("rng"));
  m.def("schedule_exhaustive", &schedule_exhaustive, py::arg("all_beam_channels"),
        py::arg("cfg"), py::arg("params"));

  // harness
  py::class_<SweepSpec>(m, "SweepSpec")
      .def(py::init<>())
      .def_readwrite("base_config", &SweepSpec::base_config)
      .def_readwrite("rho_grid_db", &SweepSpec::rho_grid_db)
      .def_readwrite("bits_grid", &SweepSpec::bits_grid)
      .def_readwrite("trials", &SweepSpec::trials)
      .def_readwrite("n_ol_overrides", &SweepSpec::n_ol_overrides)
      .def_readwrite("algorithms", &SweepSpec::algorithms)
      .def_readwrite("master_seed", &SweepSpec::master_seed)
      .def_readwrite("num_threads", &SweepSpec::num_threads);

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("algorithm", &SweepRow::algorithm)
      .def_readonly("rho_db", &SweepRow::rho_db)
      .def_readonly("bits", &SweepRow::bits)
      .def_readonly("trial", &SweepRow::trial)
      .def_readonly("sum_rate", &SweepRow::sum_rate)
      .def_readonly("num_selected", &SweepRow::num_selected)
      .def_readonly("candidate_sizes", &SweepRow::candidate_sizes);

  py::class_<SweepResult>(m, "SweepResult").def_readonly("rows", &SweepResult::rows);

  m.def("known_algorithms", &known_algorithms);
  m.def("trial_channels", &trial_channels, py::arg("spec"), py::arg("trial"));
  m.def("run_sweep", &run_sweep, py::arg("spec"), py::call_guard<py::gil_scoped_release>());
  m.def("emit_csv", &emit_csv, py::arg("result"), py::arg("path"));
  m.def("figure_preset", &figure_preset, py::arg("name"));
  m.def("db_to_linear", &db_to_linear, py::arg("db"));

  m.attr("__version__") = "0.1.0";
}
