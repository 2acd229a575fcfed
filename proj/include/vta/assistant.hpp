#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vta/corpus.hpp"
#include "vta/ffnet.hpp"
#include "vta/textpipe.hpp"

namespace vta {

inline constexpr std::string_view kFallbackMessage =
    "I do not understand. Could you rephrase your Python question?";

struct ChatReply {
  /// Absent exactly when the reply is the fallback.
  std::optional<std::string> intent;
  double confidence = 0.0;
  std::string response;
  bool is_fallback = false;

  bool operator==(const ChatReply&) const = default;
};

struct IntentPrediction {
  std::string tag;
  std::size_t label = 0;
  double confidence = 0.0;
};

/// Immutable chat front end over a trained model; safe for concurrent use.
class Assistant {
 public:
  /// Throws PreconditionError when a model label has no responses or the
  /// threshold is outside (0, 1).
  Assistant(nn::ModelFile model, std::map<std::string, std::vector<std::string>, std::less<>> responses_by_tag,
            text::PipelineConfig pipeline = text::PipelineConfig::defaults(),
            std::string fallback_message = std::string(kFallbackMessage));

  /// Responses are taken from the corpus entries with the model's labels.
  static Assistant from_corpus(nn::ModelFile model, const Corpus& corpus,
                               text::PipelineConfig pipeline = text::PipelineConfig::defaults());

  /// argmax over the softmax output; ties go to the lowest label index.
  IntentPrediction predict_intent(std::string_view text) const;

  /// Picks a uniform random response when confidence >= threshold, otherwise
  /// the fallback. With a seed the choice is reproducible; without one a
  /// thread-local generator is used.
  ChatReply respond(std::string_view text, std::optional<std::uint64_t> seed = std::nullopt) const;

  double threshold() const noexcept { return model_.threshold; }
  const nn::ModelFile& model() const noexcept { return model_; }
  const std::vector<std::string>& labels() const noexcept { return model_.labels; }
  const std::string& fallback_message() const noexcept { return fallback_; }
  const text::PipelineConfig& pipeline() const noexcept { return pipeline_; }

  /// This copy with a different confidence threshold.
  Assistant with_threshold(double threshold) const;

 private:
  nn::ModelFile model_;
  std::map<std::string, std::vector<std::string>, std::less<>> responses_;
  text::PipelineConfig pipeline_;
  std::string fallback_;
};

}  // namespace vta
