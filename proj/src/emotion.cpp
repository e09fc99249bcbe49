#include "cognipleasure/emotion.hpp"

#include <algorithm>

namespace cognipleasure {

std::string_view to_string(Emotion e) {
  switch (e) {
    case Emotion::Happiness: return "happiness";
    case Emotion::Sadness: return "sadness";
    case Emotion::Anger: return "anger";
    case Emotion::Fear: return "fear";
    case Emotion::Disgust: return "disgust";
    case Emotion::Surprise: return "surprise";
    case Emotion::Calm: return "calm";
    case Emotion::Boredom: return "boredom";
    case Emotion::Excitement: return "excitement";
    case Emotion::Sleepiness: return "sleepiness";
  }
  return "?";
}

std::string_view display_name(Emotion e) {
  switch (e) {
    case Emotion::Happiness: return "Happiness";
    case Emotion::Sadness: return "Sadness";
    case Emotion::Anger: return "Anger";
    case Emotion::Fear: return "Fear";
    case Emotion::Disgust: return "Disgust";
    case Emotion::Surprise: return "Surprise";
    case Emotion::Calm: return "Calm";
    case Emotion::Boredom: return "Boredom";
    case Emotion::Excitement: return "Excitement";
    case Emotion::Sleepiness: return "Sleepiness";
  }
  return "?";
}

std::optional<Emotion> parse_emotion(std::string_view name) {
  for (Emotion e : kGeometryEmotions) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

bool is_recognized(Emotion e) {
  return std::find(kRecognizedEmotions.begin(), kRecognizedEmotions.end(), e) !=
         kRecognizedEmotions.end();
}

}  // namespace cognipleasure
