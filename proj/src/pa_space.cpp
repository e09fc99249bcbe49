#include "cognipleasure/pa_space.hpp"

#include <cmath>
#include <numbers>

#include "cognipleasure/error.hpp"

namespace cognipleasure {

namespace {

double deg_to_rad(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

const GeometryTable& GeometryTable::defaults() {
  static const GeometryTable table = [] {
    GeometryTable t;
    //     emotion              angle    sd     pleasure arousal
    t.set({Emotion::Happiness,  25.09,  19.02,  0.90,  0.42});
    t.set({Emotion::Excitement, 39.97,  10.32,  0.76,  0.64});
    t.set({Emotion::Surprise,   71.63,  26.38,  0.31,  0.95});
    t.set({Emotion::Fear,       125.51, 15.61, -0.58,  0.81});
    t.set({Emotion::Anger,      138.55, 16.90, -0.74,  0.66});
    t.set({Emotion::Disgust,    182.58, 43.65, -0.99, -0.04});
    t.set({Emotion::Sadness,    196.02, 22.48, -0.96, -0.27});
    t.set({Emotion::Boredom,    245.34, 21.41, -0.41, -0.91});
    t.set({Emotion::Sleepiness, 263.59, 15.56, -0.11, -0.99});
    t.set({Emotion::Calm,       318.12, 35.89,  0.74, -0.67});
    return t;
  }();
  return table;
}

const EmotionGeometry& GeometryTable::at(Emotion e) const {
  auto it = rows_.find(e);
  if (it == rows_.end()) {
    throw InvalidArgument("no geometry for emotion '" + std::string(to_string(e)) + "'");
  }
  return it->second;
}

void GeometryTable::set(const EmotionGeometry& row) {
  if (!(row.mean_angle_deg >= 0.0 && row.mean_angle_deg < 360.0)) {
    throw InvalidArgument("mean angle of '" + std::string(to_string(row.emotion)) +
                          "' must lie in [0, 360)");
  }
  rows_.insert_or_assign(row.emotion, row);
}

std::vector<EmotionGeometry> GeometryTable::rows() const {
  std::vector<EmotionGeometry> out;
  out.reserve(rows_.size());
  for (const auto& [e, row] : rows_) out.push_back(row);
  return out;
}

std::vector<EmotionGeometry> geometry_inconsistencies(const GeometryTable& table,
                                                      double tolerance) {
  std::vector<EmotionGeometry> bad;
  for (const auto& row : table.rows()) {
    const double a = deg_to_rad(row.mean_angle_deg);
    if (std::abs(std::cos(a) - row.table_pleasure) > tolerance ||
        std::abs(std::sin(a) - row.table_arousal) > tolerance) {
      bad.push_back(row);
    }
  }
  return bad;
}

double emotion_angle(Emotion e) { return GeometryTable::defaults().at(e).mean_angle_deg; }

double IntensityScale::magnitude(Intensity i) const {
  switch (i) {
    case Intensity::High: return high;
    case Intensity::Medium: return medium;
    case Intensity::Low: return low;
  }
  return 0.0;
}

void IntensityScale::validate() const {
  if (!(high <= 1.0 && high > medium && medium > low && low > neutral_ceiling &&
        neutral_ceiling >= 0.0)) {
    throw ConfigError("intensity magnitudes must satisfy 1 >= high > medium > low > " +
                      std::to_string(neutral_ceiling));
  }
}

double PAVector::pleasure() const { return magnitude * std::cos(deg_to_rad(angle_deg)); }
double PAVector::arousal() const { return magnitude * std::sin(deg_to_rad(angle_deg)); }

PAVector to_pa_vector(const EmotionActivation& activation, const IntensityScale& scale,
                      const GeometryTable& geometry) {
  return {geometry.at(activation.emotion).mean_angle_deg, scale.magnitude(activation.intensity)};
}

double pleasure_of(const EmotionActivation& activation, const IntensityScale& scale,
                   const GeometryTable& geometry) {
  return to_pa_vector(activation, scale, geometry).pleasure();
}

std::string_view to_string(Label2 l) { return l == Label2::Pleasant ? "Pleasant" : "Unpleasant"; }

std::string_view to_string(Label3 l) {
  switch (l) {
    case Label3::Pleasant: return "Pleasant";
    case Label3::Unpleasant: return "Unpleasant";
    case Label3::Neutral: return "Neutral";
  }
  return "?";
}

Label2 to_label2(double score) { return score > 0.0 ? Label2::Pleasant : Label2::Unpleasant; }

Label3 to_label3(double score, double eps) {
  if (eps < 0.0) throw InvalidArgument("label3 eps must be >= 0");
  if (std::abs(score) < eps) return Label3::Neutral;
  // eps == 0 and score == 0 is the only remaining tie.
  if (score == 0.0) return Label3::Neutral;
  return score > 0.0 ? Label3::Pleasant : Label3::Unpleasant;
}

PleasureResult aggregate_pleasure(std::span<const EmotionActivation> activations,
                                  const AggregateOptions& options,
                                  const GeometryTable& geometry) {
  PleasureResult result;
  double num = 0.0;
  double den = 0.0;
  for (const auto& a : activations) {
    const double p = pleasure_of(a, options.scale, geometry);
    double w = static_cast<double>(a.weight);
    if (options.mode == AggregationMode::StrengthWeighted) w *= a.strength;
    result.contributions.push_back({a.emotion, a.intensity, p, w});
    num += w * p;
    den += w;
  }
  result.no_activation = activations.empty();
  result.score = den > 0.0 ? num / den : 0.0;
  result.label2 = to_label2(result.score);
  result.label3 = to_label3(result.score, options.label3_eps);
  return result;
}

}  // namespace cognipleasure
