#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>

#include "cognipleasure/error.hpp"
#include "cognipleasure/inference.hpp"

using namespace cognipleasure;

namespace {

AppraisalVector vec(double des, double agency, double ctrl, double exp, double lik,
                    double calm = 0.0, double boredom = 0.0) {
  AppraisalVector v;
  v.utterance_id = "u";
  v.desirability = des;
  v.agency = agency;
  v.controllability = ctrl;
  v.expectedness = exp;
  v.likelihood = lik;
  v.calm = calm;
  v.boredom = boredom;
  return v;
}

FuzzConfig crisp() { return FuzzConfig::crisp_defaults(); }

// Oracle: scan every rule, take the min membership over its non-any
// conditions, emit each outcome. No tree involved.
std::vector<EmotionActivation> brute_force(const AppraisalVector& v, const RuleSet& rs,
                                           const FuzzConfig& cfg) {
  std::vector<EmotionActivation> out;
  for (const auto& r : rs.rules()) {
    double s = 1.0;
    for (const auto& c : r.conditions) {
      if (c.is_any()) continue;
      s = std::min(s, membership(v.get(c.variable), *c.term, cfg));
    }
    if (s <= 0.0) continue;
    for (const auto& o : r.outcomes) out.push_back({o.emotion, o.intensity, r.weight(), s, r.name});
  }
  std::sort(out.begin(), out.end(), activation_order);
  return out;
}

bool same_activations(std::vector<EmotionActivation> a, std::vector<EmotionActivation> b) {
  if (a.size() != b.size()) return false;
  auto key = [](const EmotionActivation& x) { return x.source + std::to_string(int(x.emotion)) +
                                                     std::to_string(int(x.intensity)); };
  auto by_key = [&](const auto& x, const auto& y) { return key(x) < key(y); };
  std::sort(a.begin(), a.end(), by_key);
  std::sort(b.begin(), b.end(), by_key);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].emotion != b[i].emotion || a[i].intensity != b[i].intensity ||
        a[i].weight != b[i].weight || a[i].source != b[i].source ||
        std::abs(a[i].strength - b[i].strength) > 1e-12) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("tree shape") {
  const DecisionTree tree(canonical_rules());
  CHECK(tree.leaf_count() == 33);
  CHECK(tree.rules().size() == 33);
  CHECK_FALSE(tree.nodes().empty());
}

TEST_CASE("worked paths") {
  const auto& rs = canonical_rules();
  // High desirability, medium expectedness, high likelihood.
  const auto happy = infer_emotions(vec(4.8, 4.0, 2.0, 2.6, 4.0), rs, crisp());
  REQUIRE(happy.size() == 1);
  CHECK(happy[0].emotion == Emotion::Happiness);
  CHECK(happy[0].intensity == Intensity::High);
  CHECK(happy[0].weight == 3);
  CHECK(happy[0].strength == 1.0);

  // Highly undesirable, other agency, low control, low expectedness, low likelihood.
  const auto surprise = infer_emotions(vec(0.3, 4.0, 1.0, 1.0, 1.0), rs, crisp());
  REQUIRE(surprise.size() == 1);
  CHECK(surprise[0].emotion == Emotion::Surprise);
  CHECK(surprise[0].intensity == Intensity::High);
  CHECK(surprise[0].weight == 5);
  CHECK(surprise[0].strength == 1.0);

  CHECK(infer_emotions(vec(2.5, 2.5, 2.5, 2.5, 2.5), rs, crisp()).empty());
}

TEST_CASE("direct path") {
  const auto a = direct_emotions(4.0, 1.0, crisp());
  REQUIRE(a.size() == 2);
  CHECK(a[0] == EmotionActivation{Emotion::Calm, Intensity::High, 1, 1.0, "direct:calm"});
  CHECK(a[1] == EmotionActivation{Emotion::Boredom, Intensity::Low, 1, 1.0, "direct:boredom"});

  const auto b = direct_emotions(1.72, 3.50, crisp());
  REQUIRE(b.size() == 2);
  CHECK(b[0].intensity == Intensity::Medium);
  CHECK(b[1].intensity == Intensity::High);

  const auto c = direct_emotions(1.72, 1.69, FuzzConfig::defaults());
  REQUIRE(c.size() == 2);
  CHECK(c[0].strength == doctest::Approx(0.5));
  CHECK(c[1].strength == doctest::Approx(0.5));
}

TEST_CASE("infer_all composition") {
  const auto all = infer_all(vec(4.8, 4.0, 2.0, 2.6, 4.0, 4.0, 1.0), canonical_rules(), crisp());
  REQUIRE(all.size() == 3);
  std::vector<Emotion> emotions;
  for (const auto& a : all) emotions.push_back(a.emotion);
  std::sort(emotions.begin(), emotions.end());
  CHECK(emotions == std::vector<Emotion>{Emotion::Happiness, Emotion::Calm, Emotion::Boredom});

  const auto direct_only = infer_all(vec(4.8, 4.0, 2.0, 2.6, 4.0, 4.0, 1.0), RuleSet{}, crisp());
  CHECK(direct_only.size() == 2);

  const auto origin = infer_all(vec(0, 0, 0, 0, 0), canonical_rules(), crisp());
  const auto rules_at_origin = infer_emotions(vec(0, 0, 0, 0, 0), canonical_rules(), crisp());
  CHECK(origin.size() == rules_at_origin.size() + 2);
  CHECK(std::count_if(origin.begin(), origin.end(), [](const auto& a) {
          return (a.emotion == Emotion::Calm || a.emotion == Emotion::Boredom) &&
                 a.intensity == Intensity::Low && a.source.rfind("direct:", 0) == 0;
        }) == 2);
}

TEST_CASE("invalid vectors are rejected") {
  CHECK_THROWS_AS(infer_emotions(vec(5.5, 0, 0, 0, 0), canonical_rules(), crisp()), InvalidArgument);
}

TEST_CASE("tree traversal matches the rule-scan oracle") {
  const auto& rs = canonical_rules();
  const DecisionTree tree(rs);
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(0.0, 5.0), omega(0.0, 0.49);
  for (int i = 0; i < 4000; ++i) {
    auto cfg = FuzzConfig::defaults();
    cfg.overlap = i % 4 == 0 ? 0.0 : omega(rng);
    const auto v = vec(u(rng), u(rng), u(rng), u(rng), u(rng));
    const auto got = infer_emotions(v, tree, cfg);
    CHECK(same_activations(got, brute_force(v, rs, cfg)));
    CHECK(std::is_sorted(got.begin(), got.end(), activation_order));
    for (const auto& a : got) {
      CHECK(a.strength > 0.0);
      CHECK(a.strength <= 1.0);
      CHECK(a.weight >= 1);
      CHECK(a.weight <= 5);
    }
  }
}

TEST_CASE("crisp inputs fire disjoint rule regions with full strength") {
  const DecisionTree tree(canonical_rules());
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  for (int i = 0; i < 2000; ++i) {
    const auto v = vec(u(rng), u(rng), u(rng), u(rng), u(rng));
    const auto fired = fire_rules(v, tree, crisp());
    CHECK(fired.size() <= 1);  // no overlapping regions in the canonical set
    for (const auto& f : fired) CHECK(f.strength == 1.0);
  }
}

TEST_CASE("output is deterministic") {
  const DecisionTree tree(canonical_rules());
  const auto v = vec(0.9, 3.0, 1.7, 1.75, 3.43, 2.0, 2.0);
  CHECK(infer_all(v, tree, FuzzConfig::defaults()) == infer_all(v, tree, FuzzConfig::defaults()));
}
