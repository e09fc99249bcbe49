#pragma once

// Fuzzy appraisal rules (.far): types, parser, formatter and validator.
//
//   ruleset := rule+
//   rule    := "rule" IDENT "{" cond+ outcome+ "}"
//   cond    := ("when" | "and") VAR "is" TERM
//   outcome := "then" EMOTION "intensity" LEVEL
//
// '#' starts a comment that runs to the end of the line. A rule's weight is
// the number of its conditions whose term is not "any".

#include <array>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cognipleasure/appraisal.hpp"
#include "cognipleasure/emotion.hpp"

namespace cognipleasure {

/// Variables a rule may test, in decision-tree level order.
inline constexpr std::array<Variable, 5> kRuleVariables = {
    Variable::Desirability, Variable::Agency, Variable::Controllability, Variable::Expectedness,
    Variable::Likelihood};

/// Tree level of a rule variable, or -1 if the variable cannot appear in rules.
int rule_level(Variable v);

struct Condition {
  Variable variable;
  std::optional<LinguisticTerm> term;  // nullopt = any

  bool is_any() const noexcept { return !term.has_value(); }
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Outcome {
  Emotion emotion;
  Intensity intensity;
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Rule {
  std::string name;
  std::vector<Condition> conditions;  // sorted by rule_level
  std::vector<Outcome> outcomes;

  /// Number of non-any conditions.
  int weight() const;

  /// Per-level term, nullopt where the rule has no condition or an any condition.
  std::array<std::optional<LinguisticTerm>, 5> region() const;

  friend bool operator==(const Rule&, const Rule&) = default;
};

/// Checks the single-rule invariants; throws InvalidArgument on violation.
void validate_rule(const Rule& rule);

class RuleSet {
 public:
  RuleSet() = default;
  /// Validates every rule and name uniqueness; throws InvalidArgument.
  explicit RuleSet(std::vector<Rule> rules);

  const std::vector<Rule>& rules() const noexcept { return rules_; }
  std::size_t size() const noexcept { return rules_.size(); }
  bool empty() const noexcept { return rules_.empty(); }

  /// FNV-1a 64 digest of the canonical formatted text, as 16 hex digits.
  std::string source_hash() const;

  /// Structural equality (names, conditions, outcomes, order).
  friend bool operator==(const RuleSet& a, const RuleSet& b) { return a.rules_ == b.rules_; }

 private:
  std::vector<Rule> rules_;
};

/// Parses .far text. Throws ParseError with line/column on any error.
RuleSet parse_rules(std::string_view text);

/// Canonical text; parse_rules(format_rules(rs)) == rs.
std::string format_rules(const RuleSet& rs);

/// Text of the shipped rule file transcribing the 33-leaf appraisal tree.
std::string_view canonical_rules_text();
/// parse_rules(canonical_rules_text()).
const RuleSet& canonical_rules();

/// Reads and parses a .far file; ParseError messages are prefixed with the path.
RuleSet load_rules(const std::string& path);

struct ValidationReport {
  std::size_t leaf_count = 0;
  std::map<Emotion, std::size_t> per_emotion;  // rules with at least one outcome of the emotion
  std::vector<std::pair<std::string, std::string>> overlaps;    // crisp regions intersect
  std::vector<std::pair<std::string, std::string>> duplicates;  // identical regions
  /// Crisp term combinations (desirability, agency, controllability,
  /// expectedness, likelihood) reached by no rule.
  std::vector<std::array<LinguisticTerm, 5>> uncovered;

  bool ok() const noexcept { return duplicates.empty(); }
};

ValidationReport validate(const RuleSet& rs);

/// JSON document for a validation report (uncovered combinations as term-name arrays).
std::string to_json(const ValidationReport& report);

}  // namespace cognipleasure
