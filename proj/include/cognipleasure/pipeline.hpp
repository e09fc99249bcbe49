#pragma once

// End-to-end orchestration: CSV ingestion, the run configuration document,
// and the report producers behind the command-line tool.

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cognipleasure/appraisal.hpp"
#include "cognipleasure/binning.hpp"
#include "cognipleasure/inference.hpp"
#include "cognipleasure/metrics.hpp"
#include "cognipleasure/pa_space.hpp"
#include "cognipleasure/rules.hpp"

namespace cognipleasure {

// ---------------------------------------------------------------------------
// CSV

/// Header plus data rows. Fields may be double-quoted ("" escapes a quote).
/// Data row i sits on file row i + 2.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  /// Index of a header column, if present.
  std::optional<std::size_t> column(std::string_view name) const;
};

/// Throws DataError on ragged rows or unterminated quotes. Empty text yields
/// an empty table (no header).
CsvTable parse_csv(std::string_view text);
CsvTable read_csv_file(const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view text);

// ---------------------------------------------------------------------------
// Appraisal records

struct AppraisalRecord {
  AppraisalVector values;
  std::optional<std::string> gold_label2;
  std::optional<std::string> gold_label3;
  std::map<Variable, double> gold;  // from gold_<variable> columns
};

/// Required columns: utterance_id and the seven variables. Optional:
/// gold_label2, gold_label3, gold_<variable>. Every numeric cell must parse
/// as a real in [0,5]; errors carry the row and column.
std::vector<AppraisalRecord> parse_appraisals(std::string_view csv_text);
std::vector<AppraisalRecord> load_appraisals(const std::string& path);

// ---------------------------------------------------------------------------
// Configuration

enum class BinningMode { Binary, Soft, Strict, KMeans, File };
enum class OutputFormat { Json, Csv };

struct RunConfig {
  std::optional<std::string> rules_path;  // empty = built-in rule file
  FuzzConfig fuzz = FuzzConfig::defaults();
  IntensityScale intensity{};
  GeometryTable geometry = GeometryTable::defaults();
  double label3_eps = 0.1;
  AggregationMode aggregation = AggregationMode::ConditionCount;
  BinningMode binning_mode = BinningMode::KMeans;
  std::optional<std::string> binning_file;
  /// Three-level cut points per variable for the kmeans / file modes.
  std::map<Variable, std::pair<double, double>> bin_boundaries;
  OutputFormat output_format = OutputFormat::Json;

  /// Defaults, with the shipped k-means boundaries for binning.
  static RunConfig defaults();
  /// Parses a JSON configuration. Relative paths resolve against `base_dir`.
  static RunConfig from_json(std::string_view text, const std::string& base_dir = "");
  static RunConfig load(const std::string& path);

  /// Throws ConfigError on out-of-range or inconsistent settings.
  void validate() const;
};

/// The k-means boundaries shipped for each evaluated variable.
std::map<Variable, std::pair<double, double>> default_bin_boundaries();

/// Parses a `bins fit` document ({"variable": [b1, b2], ...}).
std::map<Variable, std::pair<double, double>> parse_bin_boundaries(std::string_view json_text);

RuleSet resolve_rules(const RunConfig& config);

// ---------------------------------------------------------------------------
// Inference

struct UtteranceResult {
  std::string utterance_id;
  std::vector<EmotionActivation> activations;
  PleasureResult pleasure;
};

UtteranceResult infer_utterance(const AppraisalVector& v, const DecisionTree& tree,
                                const RunConfig& config);

/// One JSON object per line (or CSV rows), in input order. Output is
/// byte-for-byte deterministic for identical inputs.
std::string infer_report(const std::vector<AppraisalRecord>& records, const DecisionTree& tree,
                         const RunConfig& config, bool explain);

// ---------------------------------------------------------------------------
// Evaluation

/// Canonical label names for a class count (2 or 3).
std::vector<std::string> label_order(int classes);

/// utterance id -> label, in file order.
struct LabelColumn {
  std::vector<std::string> ids;
  std::map<std::string, std::string> by_id;
};

enum class LabelRole { Prediction, Gold };

/// Reads labels from an inference report (JSON lines) or a CSV. Predictions
/// prefer label{2,3} over gold_label{2,3}; gold prefers the reverse.
LabelColumn load_labels(const std::string& path, int classes, LabelRole role);

struct LabelEvaluation {
  ConfusionMatrix confusion;
  MetricsReport metrics;
};

/// Aligns by utterance id; throws DataError when the id sets differ.
LabelEvaluation evaluate_labels(const LabelColumn& predictions, const LabelColumn& gold,
                                int classes);

std::string evaluation_json(const LabelEvaluation& ev);

struct VariableAccuracy {
  Variable variable;
  std::size_t n = 0;
  double acc2 = 0.0;
  double acc3 = 0.0;
};

/// ACC2 and ACC3 per variable with the configured binning. Gold values come
/// from `gold` (aligned by id) or, when empty, from gold_<variable> columns.
std::vector<VariableAccuracy> evaluate_appraisals(const std::vector<AppraisalRecord>& predictions,
                                                  const std::vector<AppraisalRecord>& gold,
                                                  const RunConfig& config);

std::string appraisal_accuracy_json(const std::vector<VariableAccuracy>& acc,
                                    const RunConfig& config);

// ---------------------------------------------------------------------------
// Binning fit

/// k-means boundaries per requested column (all seven variables present in
/// the table when `columns` is empty).
std::vector<std::pair<std::string, KMeansResult>> fit_bins(const CsvTable& table,
                                                           const std::vector<std::string>& columns,
                                                           int k);

/// {"column": [b1, b2, ...]} rounded to 4 decimals.
std::string bins_json(const std::vector<std::pair<std::string, KMeansResult>>& fits);

}  // namespace cognipleasure
