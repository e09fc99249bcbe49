// Python bindings: fuzzification, rule inference, pleasure aggregation,
// binning and metrics. Values cross the boundary as plain dicts and lists.

#include <cctype>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cognipleasure/appraisal.hpp"
#include "cognipleasure/binning.hpp"
#include "cognipleasure/error.hpp"
#include "cognipleasure/fusion.hpp"
#include "cognipleasure/inference.hpp"
#include "cognipleasure/metrics.hpp"
#include "cognipleasure/pa_space.hpp"
#include "cognipleasure/pipeline.hpp"
#include "cognipleasure/rules.hpp"

namespace py = pybind11;
namespace cp = cognipleasure;

namespace {

std::string lower(std::string s) {
  for (auto& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

cp::Variable variable(const std::string& name) {
  auto v = cp::parse_variable(name);
  if (!v) throw cp::InvalidArgument("unknown variable '" + name + "'");
  return *v;
}

cp::AppraisalVector vector_from(const py::dict& values) {
  cp::AppraisalVector v;
  v.utterance_id = "utterance";
  for (auto item : values) {
    const auto key = item.first.cast<std::string>();
    if (key == "utterance_id") {
      v.utterance_id = item.second.cast<std::string>();
    } else {
      v.set(variable(key), item.second.cast<double>());
    }
  }
  v.validate();
  return v;
}

py::dict activation_dict(const cp::EmotionActivation& a) {
  py::dict d;
  d["emotion"] = std::string(cp::display_name(a.emotion));
  d["intensity"] = std::string(cp::to_string(a.intensity));
  d["weight"] = a.weight;
  d["strength"] = a.strength;
  d["source"] = a.source;
  return d;
}

cp::EmotionActivation activation_from(const py::dict& d) {
  const auto name = d["emotion"].cast<std::string>();
  const auto e = cp::parse_emotion(lower(name));
  if (!e) throw cp::InvalidArgument("unknown emotion '" + name + "'");
  const auto level = cp::parse_level(lower(d["intensity"].cast<std::string>()));
  if (!level) throw cp::InvalidArgument("unknown intensity");
  cp::EmotionActivation a{*e, *level, 1, 1.0, ""};
  if (d.contains("weight")) a.weight = d["weight"].cast<int>();
  if (d.contains("strength")) a.strength = d["strength"].cast<double>();
  return a;
}

cp::FuzzConfig fuzz_config(double overlap) {
  auto cfg = cp::FuzzConfig::defaults();
  cfg.overlap = overlap;
  cfg.validate();
  return cfg;
}

py::dict score_dict(const cp::PleasureResult& r) {
  py::dict d;
  d["score"] = r.score;
  d["label2"] = std::string(cp::to_string(r.label2));
  d["label3"] = std::string(cp::to_string(r.label3));
  d["no_activation"] = r.no_activation;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Appraisal-driven induced pleasure inference";
  m.attr("__version__") = "0.1.0";

  // Translators run newest first, so the base class is registered first.
  auto base = py::register_exception<cp::Error>(m, "Error", PyExc_ValueError);
  py::register_exception<cp::ParseError>(m, "ParseError", base);
  py::register_exception<cp::DataError>(m, "DataError", base);

  m.def(
      "fuzzify",
      [](double value, const std::string& var, double overlap) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& td : cp::fuzzify(value, variable(var), fuzz_config(overlap))) {
          out.emplace_back(td.term.name(), td.degree);
        }
        return out;
      },
      py::arg("value"), py::arg("variable"), py::arg("overlap") = 0.2,
      "Linguistic terms with positive membership, as (term, degree) pairs.");

  m.def("canonical_rules_text", [] { return std::string(cp::canonical_rules_text()); });
  m.def(
      "format_rules", [](const std::string& text) { return cp::format_rules(cp::parse_rules(text)); },
      py::arg("text"), "Parses .far text and returns its canonical form.");
  m.def(
      "validate_rules",
      [](const std::optional<std::string>& text) {
        const auto rs = text ? cp::parse_rules(*text) : cp::canonical_rules();
        return py::module_::import("json").attr("loads")(cp::to_json(cp::validate(rs)));
      },
      py::arg("text") = py::none());

  m.def(
      "infer",
      [](const py::dict& values, const std::optional<std::string>& rules_text, double overlap) {
        const auto v = vector_from(values);
        const auto cfg = fuzz_config(overlap);
        const auto acts = rules_text ? cp::infer_all(v, cp::parse_rules(*rules_text), cfg)
                                     : cp::infer_all(v, cp::canonical_rules(), cfg);
        py::list out;
        for (const auto& a : acts) out.append(activation_dict(a));
        return out;
      },
      py::arg("values"), py::arg("rules") = py::none(), py::arg("overlap") = 0.2,
      "Emotion activations for one appraisal vector (rule tree plus direct calm/boredom).");

  m.def(
      "pleasure_of",
      [](const std::string& emotion, double magnitude) {
        const auto e = cp::parse_emotion(lower(emotion));
        if (!e) throw cp::InvalidArgument("unknown emotion '" + emotion + "'");
        return cp::PAVector{cp::emotion_angle(*e), magnitude}.pleasure();
      },
      py::arg("emotion"), py::arg("magnitude") = 1.0);

  m.def(
      "aggregate",
      [](const std::vector<py::dict>& activations, bool strength_weighted, double eps) {
        std::vector<cp::EmotionActivation> acts;
        for (const auto& d : activations) acts.push_back(activation_from(d));
        cp::AggregateOptions opt;
        opt.label3_eps = eps;
        opt.mode = strength_weighted ? cp::AggregationMode::StrengthWeighted
                                     : cp::AggregationMode::ConditionCount;
        return score_dict(cp::aggregate_pleasure(acts, opt));
      },
      py::arg("activations"), py::arg("strength_weighted") = false, py::arg("eps") = 0.1);

  m.def(
      "score",
      [](const py::dict& values) {
        const cp::RunConfig cfg = cp::RunConfig::defaults();
        static const cp::DecisionTree tree(cp::canonical_rules());
        return score_dict(cp::infer_utterance(vector_from(values), tree, cfg).pleasure);
      },
      py::arg("values"), "End-to-end pleasure score with the default configuration.");

  m.def(
      "kmeans1d",
      [](const std::vector<double>& data, int k) {
        const auto r = cp::kmeans1d(data, k);
        py::dict d;
        d["centroids"] = r.centroids;
        d["boundaries"] = r.boundaries;
        d["cluster_sizes"] = r.cluster_sizes;
        d["sse"] = r.sse;
        return d;
      },
      py::arg("data"), py::arg("k") = 3);

  m.def(
      "metrics",
      [](const std::vector<std::vector<std::int64_t>>& counts,
         const std::vector<std::string>& labels) {
        cp::ConfusionMatrix cm{labels, counts};
        return py::module_::import("json").attr("loads")(cp::report(cm).to_json());
      },
      py::arg("counts"), py::arg("labels"),
      "Metrics for a confusion matrix (rows gold, columns predicted).");

  m.def("sinusoidal_pe", &cp::fusion::sinusoidal_pe, py::arg("length"), py::arg("width"));
}
