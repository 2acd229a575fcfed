#include "vta/assistant.hpp"

#include <random>

#include "vta/error.hpp"
#include "vta/rng.hpp"

namespace vta {

Assistant::Assistant(nn::ModelFile model,
                     std::map<std::string, std::vector<std::string>, std::less<>> responses_by_tag,
                     text::PipelineConfig pipeline, std::string fallback_message)
    : model_(std::move(model)),
      responses_(std::move(responses_by_tag)),
      pipeline_(std::move(pipeline)),
      fallback_(std::move(fallback_message)) {
  if (!(model_.threshold > 0.0 && model_.threshold < 1.0)) {
    throw PreconditionError("confidence threshold must lie in (0, 1)");
  }
  for (const auto& label : model_.labels) {
    const auto it = responses_.find(label);
    if (it == responses_.end() || it->second.empty()) {
      throw PreconditionError("no responses for model label '" + label + "'");
    }
  }
}

Assistant Assistant::from_corpus(nn::ModelFile model, const Corpus& corpus, text::PipelineConfig pipeline) {
  std::map<std::string, std::vector<std::string>, std::less<>> responses;
  for (const auto& intent : corpus.intents) responses.emplace(intent.tag, intent.responses);
  return Assistant(std::move(model), std::move(responses), std::move(pipeline));
}

IntentPrediction Assistant::predict_intent(std::string_view text) const {
  const auto tokens = text::preprocess(text, pipeline_);
  const auto bow = bag_of_words(tokens, model_.vocabulary);
  const auto out = nn::forward(model_.params, bow);
  std::size_t best = 0;
  for (std::size_t i = 1; i < out.probs.size(); ++i) {
    if (out.probs[i] > out.probs[best]) best = i;
  }
  return {model_.labels[best], best, out.probs[best]};
}

ChatReply Assistant::respond(std::string_view text, std::optional<std::uint64_t> seed) const {
  const auto prediction = predict_intent(text);
  ChatReply reply;
  reply.confidence = prediction.confidence;
  if (prediction.confidence < model_.threshold) {
    reply.is_fallback = true;
    reply.response = fallback_;
    return reply;
  }
  const auto& choices = responses_.find(prediction.tag)->second;
  std::size_t pick = 0;
  if (seed) {
    pick = Rng(*seed).uniform_index(choices.size());
  } else {
    thread_local Rng process_rng(std::random_device{}());
    pick = process_rng.uniform_index(choices.size());
  }
  reply.intent = prediction.tag;
  reply.response = choices[pick];
  return reply;
}

Assistant Assistant::with_threshold(double threshold) const {
  nn::ModelFile model = model_;
  model.threshold = threshold;
  return Assistant(std::move(model), responses_, pipeline_, fallback_);
}

}  // namespace vta
