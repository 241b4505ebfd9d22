#include "dmrc/solvers.hpp"

#include <stdexcept>

namespace dmrc {

std::optional<Method> method_from_name(const std::string& name) {
  if (name == "random") return Method::random;
  if (name == "wm") return Method::wm;
  if (name == "sw") return Method::sw;
  if (name == "dsw") return Method::dsw;
  if (name == "dswpp") return Method::dswpp;
  if (name == "gbdtpp") return Method::gbdtpp;
  return std::nullopt;
}

const char* method_name(Method m) {
  switch (m) {
    case Method::random: return "random";
    case Method::wm: return "wm";
    case Method::sw: return "sw";
    case Method::dsw: return "dsw";
    case Method::dswpp: return "dswpp";
    case Method::gbdtpp: return "gbdtpp";
  }
  return "?";
}

int argmax_option(const std::array<double, 3>& scores) {
  int best = 0;
  for (int i = 1; i < 3; ++i)
    if (scores[i] > scores[best]) best = i;
  return best;
}

QuestionContext QuestionContext::prepare(const QuestionInstance& q, const Dialogue& dialogue) {
  QuestionContext ctx;
  // the speaker must be resolvable against the unfiltered dialogue
  ctx.target = resolve_target_speaker(q.question, dialogue);
  Dialogue filtered = negation_filter(dialogue);
  ctx.context_all = speaker_view(filtered, {});
  ctx.context_speaker =
      ctx.target.wildcard() ? ctx.context_all : speaker_view(filtered, ctx.target);
  ctx.ic_all = inverse_count_weights(ctx.context_all);
  ctx.ic_speaker =
      ctx.target.wildcard() ? ctx.ic_all : inverse_count_weights(ctx.context_speaker);
  ctx.question_tokens = normalize_text(tokenize(q.question));
  ctx.question_words = word_set(ctx.question_tokens);
  for (int i = 0; i < 3; ++i) {
    ctx.option_tokens[i] = normalize_text(tokenize(q.options[i]));
    ctx.option_words[i] = word_set(ctx.option_tokens[i]);
  }
  return ctx;
}

Prediction solve_random(std::mt19937_64& rng) {
  Prediction p;
  p.chosen = static_cast<int>(rng() % 3);
  p.scores[p.chosen] = 1.0;
  return p;
}

namespace {

WordSet window_bag(const QuestionContext& ctx, int option) {
  WordSet bag = ctx.option_words[option];
  bag.insert(ctx.question_words.begin(), ctx.question_words.end());
  return bag;
}

}  // namespace

Prediction solve_wm(const QuestionContext& ctx) {
  Prediction p;
  for (int i = 0; i < 3; ++i)
    p.scores[i] = word_match_score(ctx.context_all, ctx.option_words[i]);
  p.chosen = argmax_option(p.scores);
  return p;
}

Prediction solve_sw(const QuestionContext& ctx) {
  Prediction p;
  for (int i = 0; i < 3; ++i)
    p.scores[i] = sliding_window_score(ctx.context_all, window_bag(ctx, i), ctx.ic_all);
  p.chosen = argmax_option(p.scores);
  return p;
}

Prediction solve_dsw(const QuestionContext& ctx, const StopWordList& stops) {
  Prediction p;
  for (int i = 0; i < 3; ++i) {
    const double sw = sliding_window_score(ctx.context_all, window_bag(ctx, i), ctx.ic_all);
    const double d =
        distance_score(ctx.context_all, ctx.question_words, ctx.option_words[i], stops);
    p.scores[i] = sw - d;
  }
  p.chosen = argmax_option(p.scores);
  return p;
}

double speaker_blend(double sw_focused, double sw_general, double d_focused, double d_general) {
  return (sw_focused + sw_general) / 2.0 - (d_focused + d_general) / 2.0;
}

Prediction solve_dsw_pp(const QuestionContext& ctx, const StopWordList& stops,
                        const EmbeddingTable* embeddings, const DswppOptions& opts) {
  if (opts.use_ce && embeddings == nullptr)
    throw std::invalid_argument(
        "dswpp needs an embedding table; provide one or drop the ce term "
        "(--drop ce) to run the lexical-only variant");
  const bool focus = opts.use_dialogue_structure && !ctx.target.wildcard();
  const TokenSequence& spk = focus ? ctx.context_speaker : ctx.context_all;
  const InverseCountWeights& spk_ic = focus ? ctx.ic_speaker : ctx.ic_all;

  Prediction p;
  for (int i = 0; i < 3; ++i) {
    const WordSet bag = window_bag(ctx, i);
    const double sw_g = sliding_window_score(ctx.context_all, bag, ctx.ic_all);
    const double sw_s = focus ? sliding_window_score(spk, bag, spk_ic) : sw_g;
    const double d_g =
        distance_score(ctx.context_all, ctx.question_words, ctx.option_words[i], stops);
    const double d_s =
        focus ? distance_score(spk, ctx.question_words, ctx.option_words[i], stops) : d_g;
    double score = speaker_blend(sw_s, sw_g, d_s, d_g);
    if (opts.use_ce) {
      const double cs_g = window_similarity(ctx.option_tokens[i], ctx.context_all, *embeddings);
      const double cs_s =
          focus ? window_similarity(ctx.option_tokens[i], spk, *embeddings) : cs_g;
      score += (cs_s + cs_g) / 2.0;
    }
    p.scores[i] = score;
  }
  p.chosen = argmax_option(p.scores);
  return p;
}

}  // namespace dmrc
