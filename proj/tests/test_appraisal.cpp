#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <random>

#include "cognipleasure/appraisal.hpp"
#include "cognipleasure/error.hpp"

using namespace cognipleasure;

namespace {

FuzzConfig with_overlap(double w) {
  auto c = FuzzConfig::defaults();
  c.overlap = w;
  return c;
}

double degree_of(const std::vector<TermDegree>& terms, const LinguisticTerm& t) {
  for (const auto& td : terms) {
    if (td.term == t) return td.degree;
  }
  return 0.0;
}

// Independent formulation: a bin's degree is the product of the rising ramp at
// its lower boundary and the falling ramp at its upper boundary.
double oracle_degree(double v, const std::vector<double>& b, int bin, double w) {
  std::vector<double> edges = {0.0};
  edges.insert(edges.end(), b.begin(), b.end());
  edges.push_back(5.0);
  auto half = [&](std::size_t i) {  // half-ramp at interior boundary edges[i]
    return w * std::min(edges[i] - edges[i - 1], edges[i + 1] - edges[i]) / 2.0;
  };
  auto above = [&](std::size_t i) {  // degree of being above boundary i
    const double h = half(i);
    if (h == 0.0) return v >= edges[i] ? 1.0 : 0.0;
    return std::clamp((v - (edges[i] - h)) / (2 * h), 0.0, 1.0);
  };
  double d = 1.0;
  const auto j = static_cast<std::size_t>(bin);
  if (j > 0) d *= above(j);
  if (j + 1 < edges.size() - 1) d *= 1.0 - above(j + 1);
  return d;
}

}  // namespace

TEST_CASE("vocabulary and parsing") {
  CHECK(vocabulary(Variable::Desirability).size() == 6);
  CHECK(vocabulary(Variable::Agency).size() == 2);
  CHECK(vocabulary(Variable::Calm).size() == 3);
  CHECK(parse_variable("controllability") == Variable::Controllability);
  CHECK_FALSE(parse_variable("valence"));
  CHECK(parse_term(Variable::Desirability, "low_desirable") ==
        LinguisticTerm(DesirabilityLevel::LowDesirable));
  CHECK_FALSE(parse_term(Variable::Agency, "high"));
  CHECK_THROWS_AS(LinguisticTerm(Variable::Likelihood, 3), InvalidArgument);
  CHECK(LinguisticTerm(Variable::Expectedness, Level::Medium).name() == "medium");
}

TEST_CASE("appraisal vector validation") {
  AppraisalVector v;
  v.utterance_id = "u1";
  CHECK_NOTHROW(v.validate());
  v.likelihood = 5.01;
  CHECK_THROWS_AS(v.validate(), InvalidArgument);
  v.likelihood = 2.0;
  v.utterance_id.clear();
  CHECK_THROWS_AS(v.validate(), InvalidArgument);

  AppraisalVector a, b;
  a.utterance_id = b.utterance_id = "dup";
  std::vector<AppraisalVector> batch = {a, b};
  CHECK_THROWS_AS(validate_batch(batch), InvalidArgument);
}

TEST_CASE("config validation") {
  CHECK_NOTHROW(FuzzConfig::defaults().validate());
  auto c = FuzzConfig::defaults();
  c.overlap = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c = FuzzConfig::defaults();
  c.boundaries[Variable::Likelihood] = {3.43, 1.75};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.boundaries[Variable::Likelihood] = {1.75};
  CHECK_THROWS_AS(c.validate(), ConfigError);
  c.boundaries[Variable::Likelihood] = {1.75, 5.5};
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("membership examples") {
  const auto crisp = with_overlap(0.0);
  const auto fuzzy = with_overlap(0.2);
  CHECK(membership(2.5, LinguisticTerm(Variable::Likelihood, Level::Medium), crisp) == 1.0);

  // desirability split in three at the k-means cuts
  const std::vector<double> des3 = {1.72, 3.44};
  CHECK(bin_degree(1.72, des3, 0, 0.2) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(bin_degree(1.72, des3, 1, 0.2) == doctest::Approx(0.5).epsilon(1e-12));

  for (double w : {0.0, 0.1, 0.2, 0.49}) {
    CHECK(membership(0.0, LinguisticTerm(Variable::Expectedness, Level::Low), with_overlap(w)) ==
          1.0);
  }
  CHECK(membership(1.71, LinguisticTerm(Variable::Controllability, Level::Low), fuzzy) ==
        doctest::Approx(0.5));
}

TEST_CASE("fuzzify3 examples") {
  const auto crisp = with_overlap(0.0);
  const auto high = LinguisticTerm(Variable::Controllability, Level::High);
  CHECK(fuzzify3(4.0, Variable::Controllability, crisp) == std::vector<TermDegree>{{high, 1.0}});
  CHECK(fuzzify3(3.34, Variable::Controllability, crisp) == std::vector<TermDegree>{{high, 1.0}});
  CHECK(fuzzify3(5.0, Variable::Controllability, crisp) == std::vector<TermDegree>{{high, 1.0}});

  const auto r = fuzzify3(1.71, Variable::Controllability, with_overlap(0.2));
  REQUIRE(r.size() == 2);
  CHECK(r[0].term == LinguisticTerm(Variable::Controllability, Level::Low));
  CHECK(r[0].degree == doctest::Approx(0.5));
  CHECK(r[1].term == LinguisticTerm(Variable::Controllability, Level::Medium));
  CHECK(r[1].degree == doctest::Approx(0.5));

  CHECK_THROWS_AS(fuzzify3(2.0, Variable::Desirability, crisp), InvalidArgument);
  CHECK_THROWS_AS(fuzzify3(-0.1, Variable::Likelihood, crisp), InvalidArgument);
}

TEST_CASE("desirability examples") {
  const auto crisp = with_overlap(0.0);
  CHECK(fuzzify_desirability(4.8, crisp) ==
        std::vector<TermDegree>{{DesirabilityLevel::HighlyDesirable, 1.0}});
  CHECK(fuzzify_desirability(2.5, crisp) ==
        std::vector<TermDegree>{{DesirabilityLevel::LowDesirable, 1.0}});

  const auto r = fuzzify_desirability(0.9, with_overlap(0.2));
  REQUIRE(r.size() == 2);
  CHECK(r[0].term == LinguisticTerm(DesirabilityLevel::Undesirable));
  CHECK(r[0].degree == doctest::Approx(0.9));
  CHECK(r[1].term == LinguisticTerm(DesirabilityLevel::HighlyUndesirable));
  CHECK(r[1].degree == doctest::Approx(0.1));
  CHECK(r[0].degree + r[1].degree == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("agency is crisp") {
  const auto c = FuzzConfig::defaults();
  CHECK(fuzzify_agency(5.0, c) == LinguisticTerm(AgencyLevel::Other));
  CHECK(fuzzify_agency(0.0, c) == LinguisticTerm(AgencyLevel::None));
  CHECK(fuzzify_agency(2.5, c) == LinguisticTerm(AgencyLevel::Other));
  CHECK(fuzzify(2.49, Variable::Agency, c) ==
        std::vector<TermDegree>{{AgencyLevel::None, 1.0}});
}

TEST_CASE("membership agrees with the ramp-product oracle") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> value(0.0, 5.0), omega(0.0, 0.499);
  for (int i = 0; i < 3000; ++i) {
    const double w = omega(rng);
    const auto cfg = with_overlap(w);
    for (Variable var : kAllVariables) {
      if (var == Variable::Agency) continue;
      const double v = value(rng);
      const auto& b = cfg.boundaries_of(var);
      const auto terms = fuzzify(v, var, cfg);
      for (int bin = 0; bin <= static_cast<int>(b.size()); ++bin) {
        const LinguisticTerm t(var, bin);
        CHECK(membership(v, t, cfg) == doctest::Approx(oracle_degree(v, b, bin, w)).epsilon(1e-12));
        CHECK(degree_of(terms, t) == doctest::Approx(oracle_degree(v, b, bin, w)).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("partition of unity and ordering") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> value(0.0, 5.0), omega(0.0, 0.499);
  for (int i = 0; i < 5000; ++i) {
    const auto cfg = with_overlap(omega(rng));
    for (Variable var : kAllVariables) {
      const auto terms = fuzzify(value(rng), var, cfg);
      double sum = 0.0;
      for (const auto& td : terms) {
        CHECK(td.degree > 0.0);
        CHECK(td.degree <= 1.0);
        sum += td.degree;
      }
      CHECK(std::abs(sum - 1.0) <= 1e-9);
      CHECK(terms.size() <= 2);
      CHECK(std::is_sorted(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
        return a.degree > b.degree;
      }));
    }
  }
}

TEST_CASE("zero overlap reduces to crisp bins") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> value(0.0, 5.0);
  const auto cfg = with_overlap(0.0);
  for (int i = 0; i < 2000; ++i) {
    const double v = value(rng);
    for (Variable var : kThreeLevelVariables) {
      const auto& b = cfg.boundaries_of(var);
      const int expected = v < b[0] ? 0 : v < b[1] ? 1 : 2;
      const auto terms = fuzzify(v, var, cfg);
      REQUIRE(terms.size() == 1);
      CHECK(terms[0].term.ordinal() == expected);
      CHECK(terms[0].degree == 1.0);
    }
  }
}
