#pragma once

#include <array>
#include <random>
#include <string>

#include "dmrc/knowledge.hpp"
#include "dmrc/lexical.hpp"

namespace dmrc {

enum class Method { random, wm, sw, dsw, dswpp, gbdtpp };

std::optional<Method> method_from_name(const std::string& name);
const char* method_name(Method m);

struct Prediction {
  int chosen = 0;
  std::array<double, 3> scores{};
  bool operator==(const Prediction&) const = default;
};

// Lowest index wins ties.
int argmax_option(const std::array<double, 3>& scores);

// Per-question view shared by the rule solvers and the feature extractor:
// negation-filtered dialogue, normalized tokens, resolved target speaker.
struct QuestionContext {
  SpeakerQuery target;
  TokenSequence context_all;      // W^{D^*}
  TokenSequence context_speaker;  // W^{D^s_Q}; == context_all when target is "*"
  InverseCountWeights ic_all;
  InverseCountWeights ic_speaker;
  TokenSequence question_tokens;
  WordSet question_words;
  std::array<TokenSequence, 3> option_tokens;
  std::array<WordSet, 3> option_words;

  static QuestionContext prepare(const QuestionInstance& q, const Dialogue& dialogue);
};

Prediction solve_random(std::mt19937_64& rng);
Prediction solve_wm(const QuestionContext& ctx);
Prediction solve_sw(const QuestionContext& ctx);
Prediction solve_dsw(const QuestionContext& ctx, const StopWordList& stops);

// (sw_focused + sw_general)/2 - (d_focused + d_general)/2
double speaker_blend(double sw_focused, double sw_general, double d_focused, double d_general);

struct DswppOptions {
  bool use_dialogue_structure = true;  // false: treat every target as "*"
  bool use_ce = true;                  // false: skip the embedding term
};

// Requires an embedding table unless opts.use_ce is false.
Prediction solve_dsw_pp(const QuestionContext& ctx, const StopWordList& stops,
                        const EmbeddingTable* embeddings, const DswppOptions& opts = {});

}  // namespace dmrc
