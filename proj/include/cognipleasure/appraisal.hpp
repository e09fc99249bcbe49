#pragma once

// Appraisal domain types and the fuzzification layer that turns 0..5
// predictions into linguistic terms with membership degrees.

#include <array>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace cognipleasure {

inline constexpr double kScaleMin = 0.0;
inline constexpr double kScaleMax = 5.0;

enum class Variable {
  Expectedness,
  Likelihood,
  Desirability,
  Agency,
  Controllability,
  Calm,
  Boredom,
};

inline constexpr std::array<Variable, 7> kAllVariables = {
    Variable::Expectedness, Variable::Likelihood, Variable::Desirability, Variable::Agency,
    Variable::Controllability, Variable::Calm, Variable::Boredom};

/// Variables that use the Low/Medium/High vocabulary.
inline constexpr std::array<Variable, 5> kThreeLevelVariables = {
    Variable::Expectedness, Variable::Likelihood, Variable::Controllability, Variable::Calm,
    Variable::Boredom};

enum class Level { Low = 0, Medium = 1, High = 2 };

enum class DesirabilityLevel {
  HighlyUndesirable = 0,
  Undesirable = 1,
  LowUndesirable = 2,
  LowDesirable = 3,
  Desirable = 4,
  HighlyDesirable = 5,
};

enum class AgencyLevel { None = 0, Other = 1 };

std::string_view to_string(Variable v);
std::string_view to_string(Level l);
std::optional<Variable> parse_variable(std::string_view name);
std::optional<Level> parse_level(std::string_view name);

/// Ordered term names of a variable, lowest first (snake_case, as used by the rule DSL).
std::span<const std::string_view> vocabulary(Variable v);

/// A term of a variable's vocabulary, identified by its ordinal in vocabulary(variable).
/// The constructor rejects ordinals outside the vocabulary.
class LinguisticTerm {
 public:
  LinguisticTerm(Variable variable, int ordinal);
  LinguisticTerm(Variable variable, Level level);
  LinguisticTerm(DesirabilityLevel level);
  LinguisticTerm(AgencyLevel level);

  Variable variable() const noexcept { return variable_; }
  int ordinal() const noexcept { return ordinal_; }
  std::string_view name() const;

  friend bool operator==(const LinguisticTerm&, const LinguisticTerm&) = default;
  friend auto operator<=>(const LinguisticTerm&, const LinguisticTerm&) = default;

 private:
  Variable variable_;
  int ordinal_;
};

/// Looks a term up by name within a variable's vocabulary.
std::optional<LinguisticTerm> parse_term(Variable v, std::string_view name);

struct AppraisalVector {
  std::string utterance_id;
  double expectedness = 0.0;
  double likelihood = 0.0;
  double desirability = 0.0;
  double agency = 0.0;
  double controllability = 0.0;
  double calm = 0.0;
  double boredom = 0.0;

  double get(Variable v) const;
  void set(Variable v, double value);

  /// Throws InvalidArgument if the id is empty or any field lies outside [0,5].
  void validate() const;
};

/// Rejects empty or duplicated ids and out-of-range fields across a batch.
void validate_batch(std::span<const AppraisalVector> batch);

/// Boundaries and overlap used to fuzzify the numeric predictions.
///
/// Three-level variables carry two interior boundaries (Low | Medium | High).
/// Desirability carries five, splitting [0,5] into six levels. Agency is a
/// crisp threshold. Defaults are the k-means boundaries measured on EmoStim
/// and six equal-width desirability bins.
struct FuzzConfig {
  std::map<Variable, std::vector<double>> boundaries;
  double overlap = 0.2;
  double agency_threshold = 2.5;

  static FuzzConfig defaults();
  /// Defaults with the given overlap fraction.
  static FuzzConfig crisp_defaults(double overlap = 0.0);

  const std::vector<double>& boundaries_of(Variable v) const;

  /// Throws ConfigError when a boundary list is missing, unsorted, out of
  /// range or has the wrong size, or when overlap is outside [0, 0.5).
  void validate() const;
};

struct TermDegree {
  LinguisticTerm term;
  double degree;

  friend bool operator==(const TermDegree&, const TermDegree&) = default;
};

/// Trapezoidal membership of `value` in `term`.
///
/// Each interior boundary b between bins of widths wl and wr gets a symmetric
/// ramp of half-width h = overlap * min(wl, wr) / 2; the lower term falls
/// linearly from 1 to 0 across [b-h, b+h] while the upper term rises. With
/// overlap = 0 bins are lower-inclusive and the top bin includes 5.
double membership(double value, const LinguisticTerm& term, const FuzzConfig& config);

/// Degree of bin `bin` (0-based, lowest first) of the partition of [0,5] cut
/// at `boundaries`, using the ramp rule above. Usable with any boundary list,
/// e.g. a three-level desirability split.
double bin_degree(double value, std::span<const double> boundaries, int bin, double overlap);

/// All Low/Medium/High terms with positive degree, highest degree first
/// (ties by term order).
std::vector<TermDegree> fuzzify3(double value, Variable variable, const FuzzConfig& config);

/// Six-level desirability fuzzification, same contract as fuzzify3.
std::vector<TermDegree> fuzzify_desirability(double value, const FuzzConfig& config);

/// Crisp agency: Other at or above the threshold, None below.
LinguisticTerm fuzzify_agency(double value, const FuzzConfig& config);

/// Dispatches to the variable's fuzzifier. Agency yields a single degree-1 term.
std::vector<TermDegree> fuzzify(double value, Variable variable, const FuzzConfig& config);

}  // namespace cognipleasure
