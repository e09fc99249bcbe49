#pragma once

// Rule evaluation: walks the compiled appraisal tree with fuzzified inputs and
// emits one activation per outcome of every rule that fires.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cognipleasure/appraisal.hpp"
#include "cognipleasure/emotion.hpp"
#include "cognipleasure/rules.hpp"

namespace cognipleasure {

struct EmotionActivation {
  Emotion emotion;
  Intensity intensity;
  int weight;       // non-any condition count of the source rule (1 for the direct path)
  double strength;  // in (0, 1]
  std::string source;  // rule name, or "direct:calm" / "direct:boredom"

  friend bool operator==(const EmotionActivation&, const EmotionActivation&) = default;
};

/// Orders by strength desc, weight desc, emotion name, then intensity.
bool activation_order(const EmotionActivation& a, const EmotionActivation& b);

/// A RuleSet compiled into a decision tree whose levels follow kRuleVariables.
/// A rule without a condition at some level (or with "any") sits on that
/// level's wildcard edge.
class DecisionTree {
 public:
  struct Edge {
    std::optional<LinguisticTerm> term;  // nullopt = wildcard
    std::size_t child;
  };
  struct Node {
    std::vector<Edge> edges;
    std::vector<std::size_t> leaf_rules;  // only at depth 5
  };

  explicit DecisionTree(RuleSet rules);

  const RuleSet& rules() const noexcept { return rules_; }
  const std::vector<Node>& nodes() const noexcept { return nodes_; }
  std::size_t leaf_count() const;

 private:
  RuleSet rules_;
  std::vector<Node> nodes_;  // nodes_[0] is the root (desirability)
};

/// A rule whose strength is positive, with the strength reached.
struct FiredRule {
  std::size_t rule_index;
  double strength;
};

/// Every rule with positive strength, in rule order. Strength is the minimum
/// membership over the rule's non-any conditions.
std::vector<FiredRule> fire_rules(const AppraisalVector& v, const DecisionTree& tree,
                                  const FuzzConfig& config);

std::vector<EmotionActivation> infer_emotions(const AppraisalVector& v, const DecisionTree& tree,
                                              const FuzzConfig& config);
std::vector<EmotionActivation> infer_emotions(const AppraisalVector& v, const RuleSet& rules,
                                              const FuzzConfig& config);

/// Calm and boredom bypass the tree: each is binned into its highest-degree
/// Low/Medium/High term and emitted with weight 1.
std::vector<EmotionActivation> direct_emotions(double calm, double boredom,
                                               const FuzzConfig& config);

std::vector<EmotionActivation> infer_all(const AppraisalVector& v, const DecisionTree& tree,
                                         const FuzzConfig& config);
std::vector<EmotionActivation> infer_all(const AppraisalVector& v, const RuleSet& rules,
                                         const FuzzConfig& config);

}  // namespace cognipleasure
