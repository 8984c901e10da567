// Copyright 2026 The qoedist Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings: the main numerical operations plus scenario runs.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "qoedist/core.h"
#include "qoedist/error.h"
#include "qoedist/mos_mappings.h"
#include "qoedist/qos_distributions.h"
#include "qoedist/rating_models.h"
#include "qoedist/scenario.h"
#include "qoedist/special_functions.h"
#include "qoedist/system_qoe.h"

namespace py = pybind11;

namespace qoedist {
namespace {

PyObject* qoe_error = nullptr;

py::dict MetricsDict(const QoeMetrics& m) {
  py::dict quantiles;
  for (const auto& [level, value] : m.quantiles) quantiles[py::float_(level)] = value;
  py::dict d;
  d["mean"] = m.mean;
  d["std"] = m.std;
  d["gob"] = m.gob;
  d["pow"] = m.pow;
  d["quantiles"] = quantiles;
  return d;
}

py::dict ReportDict(const MixResult& mix, bool continuous) {
  py::dict d;
  const QoeDistribution& dist = mix.distribution;
  d["pmf"] = std::vector<double>(dist.pmf().begin(), dist.pmf().end());
  d["cdf"] = dist.CdfValues();
  d["metrics"] = MetricsDict(MetricsFromDistribution(dist, MetricsMode::kDiscrete));
  if (continuous && dist.has_continuous_cdf()) {
    d["continuous_metrics"] =
        MetricsDict(MetricsFromDistribution(dist, MetricsMode::kContinuous));
  }
  d["normalization_deficit"] = mix.diagnostics.normalization_deficit;
  d["quadrature_error"] = mix.diagnostics.quadrature_error;
  return d;
}

std::optional<OutputMode> ParseMode(const std::optional<std::string>& mode) {
  if (!mode) return std::nullopt;
  if (*mode == "discrete") return OutputMode::kDiscrete;
  if (*mode == "continuous") return OutputMode::kContinuous;
  if (*mode == "both") return OutputMode::kBoth;
  throw py::value_error("mode must be 'discrete', 'continuous' or 'both'");
}

RunOptions Options(bool normalize, const std::optional<std::string>& mode,
                   std::optional<double> tolerance) {
  RunOptions options;
  options.normalize = normalize;
  options.mode = ParseMode(mode);
  options.absolute_tolerance = tolerance;
  return options;
}

std::shared_ptr<const ConditionalRatingModel> WebModel(const std::string& model,
                                                       double beta, double theta,
                                                       const RatingScale& scale) {
  if (model == "binomial") {
    return std::make_shared<const BinomialRatingModel>(scale, beta);
  }
  if (model == "beta") {
    return std::make_shared<const BetaApproxModel>(
        BetaRatingModel(scale, SosParameter(theta)),
        std::make_shared<const IqxMapping>(scale.span(), beta, scale.low()));
  }
  throw py::value_error("model must be 'binomial' or 'beta'");
}

}  // namespace
}  // namespace qoedist

PYBIND11_MODULE(_core, m) {
  using namespace qoedist;
  m.doc() = "QoE rating distributions from MOS mappings, SOS and QoS distributions";
  m.attr("__version__") = kToolVersion;

  qoe_error = PyErr_NewException("qoedist.QoeError", PyExc_ValueError, nullptr);
  m.attr("QoeError") = py::handle(qoe_error);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::tuple args = py::make_tuple(e.what(), ErrorKindName(e.kind()), e.pointer());
      PyErr_SetObject(qoe_error, args.ptr());
    }
  });

  py::class_<RatingScale>(m, "RatingScale")
      .def(py::init<int, int, int, int>(), py::arg("low") = 1, py::arg("high") = 5,
           py::arg("good") = 4, py::arg("poor") = 2)
      .def_property_readonly("low", &RatingScale::low)
      .def_property_readonly("high", &RatingScale::high)
      .def_property_readonly("good", &RatingScale::gob_threshold)
      .def_property_readonly("poor", &RatingScale::pow_threshold)
      .def("__repr__", [](const RatingScale& s) {
        return "RatingScale(" + std::to_string(s.low()) + ", " +
               std::to_string(s.high()) + ", " + std::to_string(s.gob_threshold()) +
               ", " + std::to_string(s.pow_threshold()) + ")";
      });

  m.def("log_gamma", &LogGamma, py::arg("z"));
  m.def("reg_inc_beta", &RegIncBeta, py::arg("x"), py::arg("a"), py::arg("b"));

  m.def(
      "sos_std",
      [](double mos, double theta, const RatingScale& scale) {
        return SosStd(mos, SosParameter(theta), scale);
      },
      py::arg("mos"), py::arg("theta"), py::arg("scale") = RatingScale::FivePoint());
  m.def(
      "beta_params",
      [](double mos, double theta, const RatingScale& scale) -> py::object {
        const BetaShape shape = BetaParams(mos, SosParameter(theta), scale);
        if (const auto* mass = std::get_if<BoundaryMass>(&shape)) {
          py::dict d;
          d["point_mass"] = mass->rating;
          return d;
        }
        const auto& p = std::get<BetaParameters>(shape);
        return py::make_tuple(p.a, p.b);
      },
      py::arg("mos"), py::arg("theta"), py::arg("scale") = RatingScale::FivePoint(),
      "(a, b), or {'point_mass': rating} when the MOS sits on the scale boundary.");
  m.def(
      "beta_rating_cdf",
      [](double y, double mos, double theta, const RatingScale& scale) {
        return BetaRatingModel(scale, SosParameter(theta)).Cdf(y, mos);
      },
      py::arg("y"), py::arg("mos"), py::arg("theta"),
      py::arg("scale") = RatingScale::FivePoint());
  m.def(
      "beta_rating_pmf",
      [](double mos, double theta, const RatingScale& scale) {
        return BetaRatingModel(scale, SosParameter(theta)).LevelPmf(mos);
      },
      py::arg("mos"), py::arg("theta"), py::arg("scale") = RatingScale::FivePoint());
  m.def(
      "binomial_rating_pmf",
      [](double waiting_seconds, double beta, const RatingScale& scale) {
        return BinomialRatingModel(scale, beta).Pmf(waiting_seconds);
      },
      py::arg("waiting_seconds"), py::arg("beta"),
      py::arg("scale") = RatingScale::FivePoint());
  m.def(
      "theta_for_binomial",
      [](const RatingScale& scale) { return ThetaForBinomial(scale).value(); },
      py::arg("scale") = RatingScale::FivePoint());

  m.def(
      "iqx_mos",
      [](double x, double n, double beta, double floor) {
        return IqxMapping(n, beta, floor)(x);
      },
      py::arg("x"), py::arg("n") = 4.0, py::arg("beta") = 0.25, py::arg("floor") = 1.0);
  m.def(
      "video_mos",
      [](int stalls, double stall_seconds, double d) {
        return VideoStallMapping(d)(stalls, stall_seconds);
      },
      py::arg("stalls"), py::arg("stall_seconds"), py::arg("d") = 60.0);

  m.def(
      "lognormal_from_moments",
      [](double mean, double std) {
        const LognormalParams p = LognormalFromMoments(mean, std);
        return py::make_tuple(p.mu, p.sigma);
      },
      py::arg("mean"), py::arg("std"));

  m.def(
      "metrics",
      [](std::vector<double> pmf, const RatingScale& scale) {
        return MetricsDict(MetricsFromDistribution(QoeDistribution(scale, std::move(pmf)),
                                                   MetricsMode::kDiscrete));
      },
      py::arg("pmf"), py::arg("scale") = RatingScale::FivePoint());

  m.def(
      "web_qoe",
      [](double mean, double std, const std::string& model, double beta,
         double theta, const RatingScale& scale) {
        const auto rating = WebModel(model, beta, theta, scale);
        const QosDistribution qos = LognormalQosFromMoments(mean, std);
        const MixResult mix = Mix({rating, qos, {}, OutputMode::kBoth});
        py::dict d = ReportDict(mix, true);
        d["expected_mos"] =
            ExpectedQoeViaMos(IqxMapping(scale.span(), beta, scale.low()), qos).value;
        return d;
      },
      py::arg("mean"), py::arg("std"), py::arg("model") = "binomial",
      py::arg("beta") = 0.25, py::arg("theta") = 0.25,
      py::arg("scale") = RatingScale::FivePoint(),
      "Ratings for lognormal waiting times under the IQX web model.");

  m.def(
      "video_qoe",
      [](const std::vector<std::pair<std::pair<double, double>, double>>& atoms,
         double theta, double d, const RatingScale& scale) {
        std::vector<QosAtom> list;
        for (const auto& [c, p] : atoms) list.push_back({QosCondition({c.first, c.second}), p});
        auto mapping = std::make_shared<const VideoStallMapping>(d);
        const QosDistribution qos{EmpiricalJointPmf(std::move(list))};
        const MixResult mix =
            Mix({std::make_shared<const BetaApproxModel>(
                     BetaRatingModel(scale, SosParameter(theta)), mapping),
                 qos, {}, OutputMode::kBoth});
        py::dict out = ReportDict(mix, true);
        out["expected_mos"] = ExpectedQoeViaMos(*mapping, qos).value;
        return out;
      },
      py::arg("atoms"), py::arg("theta"), py::arg("d") = 60.0,
      py::arg("scale") = RatingScale::FivePoint(),
      "Ratings for a joint PMF [((stalls, stall_seconds), probability), ...].");

  m.def(
      "evaluate_scenario",
      [](const std::filesystem::path& config, bool normalize,
         std::optional<std::string> mode, std::optional<double> tolerance) {
        const Scenario s = Scenario::FromFile(config, Options(normalize, mode, tolerance));
        const ScenarioReport r = s.Evaluate();
        py::dict d = ReportDict(r.mix, s.mode() != OutputMode::kDiscrete);
        if (r.expected_mos) {
          d["expected_mos"] = r.expected_mos->value;
          d["fundamental_gap"] = *r.fundamental_gap;
        }
        d["config_hash"] = s.config_hash();
        return d;
      },
      py::arg("config"), py::arg("normalize") = false, py::arg("mode") = py::none(),
      py::arg("tolerance") = py::none());
  m.def(
      "run_scenario",
      [](const std::filesystem::path& config, const std::filesystem::path& output_dir,
         bool normalize, std::optional<std::string> mode,
         std::optional<double> tolerance) {
        return RunScenario(config, output_dir, Options(normalize, mode, tolerance));
      },
      py::arg("config"), py::arg("output_dir"), py::arg("normalize") = false,
      py::arg("mode") = py::none(), py::arg("tolerance") = py::none());
  m.def(
      "run_sweep",
      [](const std::filesystem::path& config, const std::string& param,
         const std::string& values, const std::filesystem::path& output_dir,
         bool normalize, std::optional<std::string> mode,
         std::optional<double> tolerance) {
        return RunSweep(config, param, ParseSweepValues(values), output_dir,
                        Options(normalize, mode, tolerance));
      },
      py::arg("config"), py::arg("param"), py::arg("values"), py::arg("output_dir"),
      py::arg("normalize") = false, py::arg("mode") = py::none(),
      py::arg("tolerance") = py::none(),
      "values is a list '2,4,8' or a range 'start:stop[:step]'.");
}
