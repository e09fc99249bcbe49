#pragma once

// Pleasure-arousal geometry: emotion angles, intensity magnitudes,
// defuzzification to a pleasure value and weighted aggregation.

#include <map>
#include <span>
#include <string_view>
#include <vector>

#include "cognipleasure/emotion.hpp"
#include "cognipleasure/inference.hpp"

namespace cognipleasure {

struct EmotionGeometry {
  Emotion emotion;
  double mean_angle_deg;  // [0, 360)
  double sd_deg;          // shipped, unused by defuzzification
  double table_pleasure;  // measured pleasure coordinate
  double table_arousal;   // measured arousal coordinate
};

/// Circumplex placement of every emotion. Defaults hold the ten rated
/// emotions (mean angle, SD, pleasure, arousal).
class GeometryTable {
 public:
  static const GeometryTable& defaults();

  const EmotionGeometry& at(Emotion e) const;
  bool contains(Emotion e) const { return rows_.count(e) != 0; }
  /// Inserts or replaces a row; throws InvalidArgument for angles outside [0,360).
  void set(const EmotionGeometry& row);
  std::vector<EmotionGeometry> rows() const;

 private:
  std::map<Emotion, EmotionGeometry> rows_;
};

/// Rows whose cos/sin of the mean angle deviate from the tabulated pleasure
/// or arousal by more than `tolerance`.
std::vector<EmotionGeometry> geometry_inconsistencies(const GeometryTable& table,
                                                      double tolerance = 0.015);

/// Angle of an emotion in degrees, from the default table.
double emotion_angle(Emotion e);

/// Vector length assigned to each intensity label. Defaults are the mid-radii
/// of the Strong/Medium/Light rings of a unit disk quartered by radius; the
/// innermost (neutral) ring, below neutral_ceiling, is never produced.
struct IntensityScale {
  double high = 0.875;
  double medium = 0.625;
  double low = 0.375;
  double neutral_ceiling = 0.25;

  double magnitude(Intensity i) const;
  /// Throws ConfigError unless 1 >= high > medium > low > neutral_ceiling.
  void validate() const;
};

struct PAVector {
  double angle_deg = 0.0;
  double magnitude = 0.0;

  double pleasure() const;
  double arousal() const;
};

PAVector to_pa_vector(const EmotionActivation& activation, const IntensityScale& scale,
                      const GeometryTable& geometry = GeometryTable::defaults());

/// |e| * cos(angle).
double pleasure_of(const EmotionActivation& activation, const IntensityScale& scale,
                   const GeometryTable& geometry = GeometryTable::defaults());

enum class Label2 { Pleasant, Unpleasant };
enum class Label3 { Pleasant, Unpleasant, Neutral };

std::string_view to_string(Label2 l);
std::string_view to_string(Label3 l);

/// Pleasant for score > 0, Unpleasant otherwise (0 counts as Unpleasant).
Label2 to_label2(double score);
/// Neutral for |score| < eps, otherwise by sign.
Label3 to_label3(double score, double eps = 0.1);

enum class AggregationMode {
  ConditionCount,    // w_i = rule condition count
  StrengthWeighted,  // w_i = condition count * activation strength
};

struct Contribution {
  Emotion emotion;
  Intensity intensity;
  double pleasure;
  double weight;
};

struct PleasureResult {
  double score = 0.0;
  Label2 label2 = Label2::Unpleasant;
  Label3 label3 = Label3::Neutral;
  std::vector<Contribution> contributions;
  bool no_activation = true;
};

struct AggregateOptions {
  IntensityScale scale{};
  double label3_eps = 0.1;
  AggregationMode mode = AggregationMode::ConditionCount;
};

/// Weighted mean of per-activation pleasure values. An empty list yields
/// score 0, Neutral, Unpleasant, and no_activation = true.
PleasureResult aggregate_pleasure(std::span<const EmotionActivation> activations,
                                  const AggregateOptions& options = {},
                                  const GeometryTable& geometry = GeometryTable::defaults());

}  // namespace cognipleasure
