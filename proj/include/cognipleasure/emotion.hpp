#pragma once

#include <array>
#include <optional>
#include <string_view>

#include "cognipleasure/appraisal.hpp"

namespace cognipleasure {

/// The eight recognized emotion classes, followed by the two extra rows of
/// the circumplex geometry table that never appear as outcomes.
enum class Emotion {
  Happiness,
  Sadness,
  Anger,
  Fear,
  Disgust,
  Surprise,
  Calm,
  Boredom,
  Excitement,
  Sleepiness,
};

inline constexpr std::array<Emotion, 8> kRecognizedEmotions = {
    Emotion::Happiness, Emotion::Sadness,  Emotion::Anger, Emotion::Fear,
    Emotion::Disgust,   Emotion::Surprise, Emotion::Calm,  Emotion::Boredom};

inline constexpr std::array<Emotion, 10> kGeometryEmotions = {
    Emotion::Happiness, Emotion::Excitement, Emotion::Surprise, Emotion::Fear,
    Emotion::Anger,     Emotion::Disgust,    Emotion::Sadness,  Emotion::Boredom,
    Emotion::Sleepiness, Emotion::Calm};

/// Emotion intensity shares the Low/Medium/High scale.
using Intensity = Level;

/// Lower-case name, e.g. "happiness".
std::string_view to_string(Emotion e);
/// Capitalized display name, e.g. "Happiness".
std::string_view display_name(Emotion e);
std::optional<Emotion> parse_emotion(std::string_view name);
bool is_recognized(Emotion e);

}  // namespace cognipleasure
