#include "cognipleasure/inference.hpp"

#include <algorithm>
#include <array>

namespace cognipleasure {

bool activation_order(const EmotionActivation& a, const EmotionActivation& b) {
  if (a.strength != b.strength) return a.strength > b.strength;
  if (a.weight != b.weight) return a.weight > b.weight;
  if (a.emotion != b.emotion) return to_string(a.emotion) < to_string(b.emotion);
  return a.intensity > b.intensity;
}

DecisionTree::DecisionTree(RuleSet rules) : rules_(std::move(rules)) {
  nodes_.emplace_back();
  const auto& rs = rules_.rules();
  for (std::size_t ri = 0; ri < rs.size(); ++ri) {
    const auto region = rs[ri].region();
    std::size_t node = 0;
    for (const auto& term : region) {
      auto& edges = nodes_[node].edges;
      auto it = std::find_if(edges.begin(), edges.end(),
                             [&](const Edge& e) { return e.term == term; });
      if (it != edges.end()) {
        node = it->child;
      } else {
        const std::size_t child = nodes_.size();
        nodes_[node].edges.push_back({term, child});
        nodes_.emplace_back();
        node = child;
      }
    }
    nodes_[node].leaf_rules.push_back(ri);
  }
}

std::size_t DecisionTree::leaf_count() const {
  std::size_t n = 0;
  for (const auto& node : nodes_) n += node.leaf_rules.size();
  return n;
}

namespace {

using LevelDegrees = std::array<std::vector<TermDegree>, 5>;

LevelDegrees fuzzify_levels(const AppraisalVector& v, const FuzzConfig& config) {
  LevelDegrees out;
  for (std::size_t i = 0; i < kRuleVariables.size(); ++i) {
    out[i] = fuzzify(v.get(kRuleVariables[i]), kRuleVariables[i], config);
  }
  return out;
}

double degree_of(const std::vector<TermDegree>& degrees, const LinguisticTerm& term) {
  for (const auto& td : degrees) {
    if (td.term == term) return td.degree;
  }
  return 0.0;
}

void descend(const DecisionTree& tree, std::size_t node, std::size_t level, double strength,
             const LevelDegrees& degrees, std::vector<FiredRule>& fired) {
  const auto& n = tree.nodes()[node];
  if (level == kRuleVariables.size()) {
    for (std::size_t r : n.leaf_rules) fired.push_back({r, strength});
    return;
  }
  for (const auto& edge : n.edges) {
    const double d = edge.term ? degree_of(degrees[level], *edge.term) : 1.0;
    if (d > 0.0) descend(tree, edge.child, level + 1, std::min(strength, d), degrees, fired);
  }
}

EmotionActivation direct_activation(Emotion emotion, Variable variable, double value,
                                    const FuzzConfig& config) {
  const auto terms = fuzzify3(value, variable, config);
  const auto& top = terms.front();
  return {emotion, static_cast<Intensity>(top.term.ordinal()), 1, top.degree,
          "direct:" + std::string(to_string(variable))};
}

}  // namespace

std::vector<FiredRule> fire_rules(const AppraisalVector& v, const DecisionTree& tree,
                                  const FuzzConfig& config) {
  std::vector<FiredRule> fired;
  descend(tree, 0, 0, 1.0, fuzzify_levels(v, config), fired);
  std::sort(fired.begin(), fired.end(),
            [](const FiredRule& a, const FiredRule& b) { return a.rule_index < b.rule_index; });
  return fired;
}

std::vector<EmotionActivation> infer_emotions(const AppraisalVector& v, const DecisionTree& tree,
                                              const FuzzConfig& config) {
  std::vector<EmotionActivation> out;
  for (const auto& f : fire_rules(v, tree, config)) {
    const Rule& rule = tree.rules().rules()[f.rule_index];
    for (const auto& o : rule.outcomes) {
      out.push_back({o.emotion, o.intensity, rule.weight(), f.strength, rule.name});
    }
  }
  std::stable_sort(out.begin(), out.end(), activation_order);
  return out;
}

std::vector<EmotionActivation> infer_emotions(const AppraisalVector& v, const RuleSet& rules,
                                              const FuzzConfig& config) {
  return infer_emotions(v, DecisionTree(rules), config);
}

std::vector<EmotionActivation> direct_emotions(double calm, double boredom,
                                               const FuzzConfig& config) {
  return {direct_activation(Emotion::Calm, Variable::Calm, calm, config),
          direct_activation(Emotion::Boredom, Variable::Boredom, boredom, config)};
}

std::vector<EmotionActivation> infer_all(const AppraisalVector& v, const DecisionTree& tree,
                                         const FuzzConfig& config) {
  auto out = infer_emotions(v, tree, config);
  for (auto& a : direct_emotions(v.calm, v.boredom, config)) out.push_back(std::move(a));
  std::stable_sort(out.begin(), out.end(), activation_order);
  return out;
}

std::vector<EmotionActivation> infer_all(const AppraisalVector& v, const RuleSet& rules,
                                         const FuzzConfig& config) {
  return infer_all(v, DecisionTree(rules), config);
}

}  // namespace cognipleasure
