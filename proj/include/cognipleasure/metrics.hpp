#pragma once

// Classification metrics: binned accuracies, confusion matrices and
// per-class / macro / weighted precision, recall and F1.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cognipleasure/binning.hpp"
#include "cognipleasure/error.hpp"

namespace cognipleasure {

/// Fraction of indices where binner(pred) == binner(gold).
/// Throws InvalidArgument on empty input or length mismatch.
template <typename BinFn>
double binned_accuracy(std::span<const double> preds, std::span<const double> golds,
                       BinFn&& bin);

double acc3(std::span<const double> preds, std::span<const double> golds, const Binner& binner);
double acc2(std::span<const double> preds, std::span<const double> golds);

struct ConfusionMatrix {
  std::vector<std::string> labels;
  std::vector<std::vector<std::int64_t>> counts;  // rows = gold, columns = predicted

  std::int64_t total() const;
  std::int64_t support(std::size_t label) const;    // row sum
  std::int64_t predicted(std::size_t label) const;  // column sum

  /// Throws InvalidArgument when the grid is not square over `labels`, has
  /// negative cells or duplicate labels.
  void validate() const;

  /// "label,<labels...>" header then one row per gold label.
  std::string to_csv() const;
};

/// counts[i][j] = #(gold == labels[i] && pred == labels[j]).
ConfusionMatrix confusion(std::span<const std::string> pred_labels,
                          std::span<const std::string> gold_labels,
                          std::span<const std::string> label_order);

struct ClassMetrics {
  std::string label;
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
  std::int64_t support = 0;
  bool precision_undefined = false;  // no predictions of this class
  bool recall_undefined = false;     // no gold samples of this class
};

struct Averages {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct MetricsReport {
  std::vector<ClassMetrics> per_class;
  Averages macro;
  Averages weighted;
  double accuracy = 0.0;
  std::int64_t n = 0;

  /// JSON document, every real rounded to 4 decimals.
  std::string to_json() const;
};

/// Zero denominators score 0 and set the matching *_undefined flag.
/// Throws InvalidArgument for an empty matrix.
MetricsReport report(const ConfusionMatrix& cm);

/// Rounds to `digits` decimals (half away from zero).
double round_to(double x, int digits);

// ---------------------------------------------------------------------------

template <typename BinFn>
double binned_accuracy(std::span<const double> preds, std::span<const double> golds,
                       BinFn&& bin) {
  if (preds.empty()) throw InvalidArgument("accuracy needs at least one sample");
  if (preds.size() != golds.size()) {
    throw InvalidArgument("prediction and gold lists differ in length");
  }
  std::size_t hits = 0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    if (bin(preds[i]) == bin(golds[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(preds.size());
}

}  // namespace cognipleasure
