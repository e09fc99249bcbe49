#include "cognipleasure/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace cognipleasure {

double acc3(std::span<const double> preds, std::span<const double> golds, const Binner& binner) {
  return binned_accuracy(preds, golds, binner);
}

double acc2(std::span<const double> preds, std::span<const double> golds) {
  return binned_accuracy(preds, golds, Binner::binary());
}

std::int64_t ConfusionMatrix::total() const {
  std::int64_t t = 0;
  for (const auto& row : counts) {
    for (auto c : row) t += c;
  }
  return t;
}

std::int64_t ConfusionMatrix::support(std::size_t label) const {
  std::int64_t s = 0;
  for (auto c : counts.at(label)) s += c;
  return s;
}

std::int64_t ConfusionMatrix::predicted(std::size_t label) const {
  std::int64_t s = 0;
  for (const auto& row : counts) s += row.at(label);
  return s;
}

void ConfusionMatrix::validate() const {
  if (std::set<std::string>(labels.begin(), labels.end()).size() != labels.size()) {
    throw InvalidArgument("confusion matrix labels must be unique");
  }
  if (counts.size() != labels.size()) throw InvalidArgument("confusion matrix is not square");
  for (const auto& row : counts) {
    if (row.size() != labels.size()) throw InvalidArgument("confusion matrix is not square");
    for (auto c : row) {
      if (c < 0) throw InvalidArgument("confusion matrix counts must be >= 0");
    }
  }
}

std::string ConfusionMatrix::to_csv() const {
  std::string out = "label";
  for (const auto& l : labels) out += "," + l;
  out += '\n';
  for (std::size_t i = 0; i < labels.size(); ++i) {
    out += labels[i];
    for (auto c : counts[i]) out += "," + std::to_string(c);
    out += '\n';
  }
  return out;
}

ConfusionMatrix confusion(std::span<const std::string> pred_labels,
                          std::span<const std::string> gold_labels,
                          std::span<const std::string> label_order) {
  if (pred_labels.size() != gold_labels.size()) {
    throw InvalidArgument("prediction and gold label lists differ in length");
  }
  ConfusionMatrix cm;
  cm.labels.assign(label_order.begin(), label_order.end());
  cm.counts.assign(cm.labels.size(), std::vector<std::int64_t>(cm.labels.size(), 0));
  cm.validate();
  auto index_of = [&](const std::string& l) {
    auto it = std::find(cm.labels.begin(), cm.labels.end(), l);
    if (it == cm.labels.end()) throw InvalidArgument("unknown label '" + l + "'");
    return static_cast<std::size_t>(it - cm.labels.begin());
  };
  for (std::size_t i = 0; i < pred_labels.size(); ++i) {
    ++cm.counts[index_of(gold_labels[i])][index_of(pred_labels[i])];
  }
  return cm;
}

MetricsReport report(const ConfusionMatrix& cm) {
  cm.validate();
  MetricsReport r;
  r.n = cm.total();
  if (r.n == 0) throw InvalidArgument("cannot report metrics on an empty confusion matrix");
  const std::size_t k = cm.labels.size();
  std::int64_t trace = 0;
  for (std::size_t c = 0; c < k; ++c) {
    ClassMetrics m;
    m.label = cm.labels[c];
    const auto tp = cm.counts[c][c];
    trace += tp;
    m.support = cm.support(c);
    const auto pred = cm.predicted(c);
    m.precision_undefined = pred == 0;
    m.recall_undefined = m.support == 0;
    m.precision = pred == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(pred);
    m.recall = m.support == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(m.support);
    const double pr = m.precision + m.recall;
    m.f1 = pr == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / pr;
    r.per_class.push_back(m);
  }
  const double n = static_cast<double>(r.n);
  for (const auto& m : r.per_class) {
    r.macro.precision += m.precision / static_cast<double>(k);
    r.macro.recall += m.recall / static_cast<double>(k);
    r.macro.f1 += m.f1 / static_cast<double>(k);
    const double w = static_cast<double>(m.support) / n;
    r.weighted.precision += w * m.precision;
    r.weighted.recall += w * m.recall;
    r.weighted.f1 += w * m.f1;
  }
  r.accuracy = static_cast<double>(trace) / n;
  return r;
}

double round_to(double x, int digits) {
  const double scale = std::pow(10.0, digits);
  return std::round(x * scale) / scale;
}

std::string MetricsReport::to_json() const {
  auto r4 = [](double x) { return round_to(x, 4); };
  nlohmann::ordered_json j;
  j["n"] = n;
  j["accuracy"] = r4(accuracy);
  nlohmann::ordered_json classes = nlohmann::ordered_json::object();
  for (const auto& m : per_class) {
    nlohmann::ordered_json c;
    c["precision"] = r4(m.precision);
    c["recall"] = r4(m.recall);
    c["f1"] = r4(m.f1);
    c["support"] = m.support;
    if (m.precision_undefined) c["precision_zero_division"] = true;
    if (m.recall_undefined) c["recall_zero_division"] = true;
    classes[m.label] = c;
  }
  j["per_class"] = classes;
  j["macro"] = {{"precision", r4(macro.precision)}, {"recall", r4(macro.recall)},
                {"f1", r4(macro.f1)}};
  j["weighted"] = {{"precision", r4(weighted.precision)}, {"recall", r4(weighted.recall)},
                   {"f1", r4(weighted.f1)}};
  return j.dump(2) + "\n";
}

}  // namespace cognipleasure
