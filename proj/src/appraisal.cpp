#include "cognipleasure/appraisal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>

#include "cognipleasure/error.hpp"

namespace cognipleasure {

namespace {

constexpr std::array<std::string_view, 3> kThreeLevelNames = {"low", "medium", "high"};
constexpr std::array<std::string_view, 6> kDesirabilityNames = {
    "highly_undesirable", "undesirable", "low_undesirable",
    "low_desirable",      "desirable",   "highly_desirable"};
constexpr std::array<std::string_view, 2> kAgencyNames = {"none", "other"};

std::string format_value(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

void check_in_scale(double value, std::string_view what) {
  if (!(value >= kScaleMin && value <= kScaleMax)) {
    throw InvalidArgument(std::string(what) + " value " + format_value(value) +
                          " is outside [0, 5]");
  }
}

std::size_t expected_boundary_count(Variable v) {
  switch (v) {
    case Variable::Desirability:
      return 5;
    case Variable::Agency:
      return 0;
    default:
      return 2;
  }
}

// Degree of bin `index` among boundaries.size()+1 bins covering [0,5].
double bin_membership(double value, std::span<const double> boundaries, int index,
                      double overlap) {
  const int bins = static_cast<int>(boundaries.size()) + 1;
  auto lower_edge = [&](int i) { return i == 0 ? kScaleMin : boundaries[i - 1]; };
  auto upper_edge = [&](int i) { return i == bins - 1 ? kScaleMax : boundaries[i]; };

  // Degree of the lower term at boundary j; the upper term gets the complement.
  auto lower_side = [&](int j) -> double {
    const double b = boundaries[j];
    const double h = overlap * std::min(b - lower_edge(j), upper_edge(j + 1) - b) / 2.0;
    if (h <= 0.0) return value < b ? 1.0 : 0.0;
    if (value <= b - h) return 1.0;
    if (value >= b + h) return 0.0;
    return 0.5 - (value - b) / (2.0 * h);
  };

  double degree = 1.0;
  if (index > 0) degree = std::min(degree, 1.0 - lower_side(index - 1));
  if (index < bins - 1) degree = std::min(degree, lower_side(index));
  return degree;
}

std::vector<TermDegree> fuzzify_bins(double value, Variable variable, const FuzzConfig& config) {
  check_in_scale(value, to_string(variable));
  const auto& bounds = config.boundaries_of(variable);
  std::vector<TermDegree> out;
  for (int i = 0; i <= static_cast<int>(bounds.size()); ++i) {
    const double d = bin_membership(value, bounds, i, config.overlap);
    if (d > 0.0) out.push_back({LinguisticTerm(variable, i), d});
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const TermDegree& a, const TermDegree& b) { return a.degree > b.degree; });
  return out;
}

}  // namespace

std::string_view to_string(Variable v) {
  switch (v) {
    case Variable::Expectedness: return "expectedness";
    case Variable::Likelihood: return "likelihood";
    case Variable::Desirability: return "desirability";
    case Variable::Agency: return "agency";
    case Variable::Controllability: return "controllability";
    case Variable::Calm: return "calm";
    case Variable::Boredom: return "boredom";
  }
  return "?";
}

std::string_view to_string(Level l) { return kThreeLevelNames.at(static_cast<std::size_t>(l)); }

std::optional<Variable> parse_variable(std::string_view name) {
  for (Variable v : kAllVariables) {
    if (to_string(v) == name) return v;
  }
  return std::nullopt;
}

std::optional<Level> parse_level(std::string_view name) {
  for (std::size_t i = 0; i < kThreeLevelNames.size(); ++i) {
    if (kThreeLevelNames[i] == name) return static_cast<Level>(i);
  }
  return std::nullopt;
}

std::span<const std::string_view> vocabulary(Variable v) {
  switch (v) {
    case Variable::Desirability: return kDesirabilityNames;
    case Variable::Agency: return kAgencyNames;
    default: return kThreeLevelNames;
  }
}

LinguisticTerm::LinguisticTerm(Variable variable, int ordinal)
    : variable_(variable), ordinal_(ordinal) {
  if (ordinal < 0 || ordinal >= static_cast<int>(vocabulary(variable).size())) {
    throw InvalidArgument("term ordinal " + std::to_string(ordinal) + " is not valid for " +
                          std::string(to_string(variable)));
  }
}

LinguisticTerm::LinguisticTerm(Variable variable, Level level)
    : LinguisticTerm(variable, static_cast<int>(level)) {
  if (variable == Variable::Desirability || variable == Variable::Agency) {
    throw InvalidArgument(std::string(to_string(variable)) +
                          " does not use the low/medium/high vocabulary");
  }
}

LinguisticTerm::LinguisticTerm(DesirabilityLevel level)
    : LinguisticTerm(Variable::Desirability, static_cast<int>(level)) {}

LinguisticTerm::LinguisticTerm(AgencyLevel level)
    : LinguisticTerm(Variable::Agency, static_cast<int>(level)) {}

std::string_view LinguisticTerm::name() const {
  return vocabulary(variable_)[static_cast<std::size_t>(ordinal_)];
}

std::optional<LinguisticTerm> parse_term(Variable v, std::string_view name) {
  const auto vocab = vocabulary(v);
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (vocab[i] == name) return LinguisticTerm(v, static_cast<int>(i));
  }
  return std::nullopt;
}

double AppraisalVector::get(Variable v) const {
  switch (v) {
    case Variable::Expectedness: return expectedness;
    case Variable::Likelihood: return likelihood;
    case Variable::Desirability: return desirability;
    case Variable::Agency: return agency;
    case Variable::Controllability: return controllability;
    case Variable::Calm: return calm;
    case Variable::Boredom: return boredom;
  }
  return 0.0;
}

void AppraisalVector::set(Variable v, double value) {
  switch (v) {
    case Variable::Expectedness: expectedness = value; break;
    case Variable::Likelihood: likelihood = value; break;
    case Variable::Desirability: desirability = value; break;
    case Variable::Agency: agency = value; break;
    case Variable::Controllability: controllability = value; break;
    case Variable::Calm: calm = value; break;
    case Variable::Boredom: boredom = value; break;
  }
}

void AppraisalVector::validate() const {
  if (utterance_id.empty()) throw InvalidArgument("utterance_id must not be empty");
  for (Variable v : kAllVariables) {
    check_in_scale(get(v), std::string(to_string(v)) + " of '" + utterance_id + "':");
  }
}

void validate_batch(std::span<const AppraisalVector> batch) {
  std::set<std::string_view> seen;
  for (const auto& v : batch) {
    v.validate();
    if (!seen.insert(v.utterance_id).second) {
      throw InvalidArgument("duplicate utterance_id '" + v.utterance_id + "'");
    }
  }
}

FuzzConfig FuzzConfig::defaults() {
  FuzzConfig c;
  c.boundaries = {
      {Variable::Desirability, {5.0 / 6.0, 10.0 / 6.0, 2.5, 20.0 / 6.0, 25.0 / 6.0}},
      {Variable::Calm, {1.72, 3.47}},
      {Variable::Boredom, {1.69, 3.50}},
      {Variable::Controllability, {1.71, 3.34}},
      {Variable::Likelihood, {1.75, 3.43}},
      {Variable::Expectedness, {1.75, 3.37}},
  };
  return c;
}

FuzzConfig FuzzConfig::crisp_defaults(double overlap) {
  FuzzConfig c = defaults();
  c.overlap = overlap;
  return c;
}

const std::vector<double>& FuzzConfig::boundaries_of(Variable v) const {
  auto it = boundaries.find(v);
  if (it == boundaries.end()) {
    throw ConfigError("no boundaries configured for " + std::string(to_string(v)));
  }
  return it->second;
}

void FuzzConfig::validate() const {
  if (!(overlap >= 0.0 && overlap < 0.5)) {
    throw ConfigError("overlap must lie in [0, 0.5), got " + format_value(overlap));
  }
  if (!(agency_threshold >= kScaleMin && agency_threshold <= kScaleMax)) {
    throw ConfigError("agency_threshold must lie in [0, 5]");
  }
  for (Variable v : kAllVariables) {
    if (v == Variable::Agency) continue;
    const auto& b = boundaries_of(v);
    const std::string name(to_string(v));
    if (b.size() != expected_boundary_count(v)) {
      throw ConfigError(name + " needs " + std::to_string(expected_boundary_count(v)) +
                        " boundaries, got " + std::to_string(b.size()));
    }
    double prev = kScaleMin;
    for (double x : b) {
      if (!(x > prev && x < kScaleMax)) {
        throw ConfigError(name + " boundaries must be strictly increasing inside (0, 5)");
      }
      prev = x;
    }
  }
}

double membership(double value, const LinguisticTerm& term, const FuzzConfig& config) {
  check_in_scale(value, to_string(term.variable()));
  if (term.variable() == Variable::Agency) {
    return fuzzify_agency(value, config) == term ? 1.0 : 0.0;
  }
  return bin_membership(value, config.boundaries_of(term.variable()), term.ordinal(),
                        config.overlap);
}

double bin_degree(double value, std::span<const double> boundaries, int bin, double overlap) {
  check_in_scale(value, "value");
  if (bin < 0 || bin > static_cast<int>(boundaries.size())) {
    throw InvalidArgument("bin index " + std::to_string(bin) + " out of range");
  }
  return bin_membership(value, boundaries, bin, overlap);
}

std::vector<TermDegree> fuzzify3(double value, Variable variable, const FuzzConfig& config) {
  if (variable == Variable::Desirability || variable == Variable::Agency) {
    throw InvalidArgument(std::string(to_string(variable)) + " is not a three-level variable");
  }
  return fuzzify_bins(value, variable, config);
}

std::vector<TermDegree> fuzzify_desirability(double value, const FuzzConfig& config) {
  return fuzzify_bins(value, Variable::Desirability, config);
}

LinguisticTerm fuzzify_agency(double value, const FuzzConfig& config) {
  check_in_scale(value, "agency");
  return value >= config.agency_threshold ? LinguisticTerm(AgencyLevel::Other)
                                          : LinguisticTerm(AgencyLevel::None);
}

std::vector<TermDegree> fuzzify(double value, Variable variable, const FuzzConfig& config) {
  if (variable == Variable::Agency) return {{fuzzify_agency(value, config), 1.0}};
  return fuzzify_bins(value, variable, config);
}

}  // namespace cognipleasure
