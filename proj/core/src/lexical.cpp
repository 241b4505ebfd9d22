#include "dmrc/lexical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace dmrc {

InverseCountWeights inverse_count_weights(const TokenSequence& context) {
  std::unordered_map<Token, std::size_t> counts;
  for (const auto& t : context) ++counts[t];
  InverseCountWeights w;
  w.reserve(counts.size());
  for (const auto& [tok, c] : counts) w.emplace(tok, std::log1p(1.0 / static_cast<double>(c)));
  return w;
}

double sliding_window_score(const TokenSequence& context, const WordSet& target_bag) {
  return sliding_window_score(context, target_bag, inverse_count_weights(context));
}

double sliding_window_score(const TokenSequence& context, const WordSet& target_bag,
                            const InverseCountWeights& weights) {
  const std::size_t w = target_bag.size();
  const std::size_t n = context.size();
  if (w == 0 || n < w) return 0.0;
  double best = 0.0;
  for (std::size_t j = 0; j + w <= n; ++j) {
    double sum = 0.0;
    for (std::size_t k = j; k < j + w; ++k) {
      if (target_bag.count(context[k])) sum += weights.at(context[k]);
    }
    best = std::max(best, sum);
  }
  return best;
}

double distance_score(const TokenSequence& context, const WordSet& question_words,
                      const WordSet& option_words, const StopWordList& stops) {
  WordSet present(context.begin(), context.end());
  auto in_question = [&](const Token& t) {
    return question_words.count(t) && present.count(t) && !stops.contains(t);
  };
  auto in_option = [&](const Token& t) {
    return option_words.count(t) && !question_words.count(t) && present.count(t) &&
           !stops.contains(t);
  };
  bool any_q = std::any_of(question_words.begin(), question_words.end(), in_question);
  bool any_o = std::any_of(option_words.begin(), option_words.end(), in_option);
  if (!any_q || !any_o) return 1.0;
  if (context.size() <= 1) return 1.0;

  long long last_q = -1, last_o = -1;
  long long delta = std::numeric_limits<long long>::max();
  for (std::size_t i = 0; i < context.size(); ++i) {
    const Token& t = context[i];
    long long pos = static_cast<long long>(i);
    if (in_question(t)) {
      last_q = pos;
      if (last_o >= 0) delta = std::min(delta, pos - last_o);
    }
    if (in_option(t)) {
      last_o = pos;
      if (last_q >= 0) delta = std::min(delta, pos - last_q);
    }
  }
  // The ratio can reach n/(n-1) when the only pair spans the whole context;
  // cap it so the score stays in (0, 1].
  return std::min(1.0, static_cast<double>(delta + 1) / static_cast<double>(context.size() - 1));
}

int word_match_score(const TokenSequence& context, const WordSet& option_words) {
  WordSet present(context.begin(), context.end());
  int hits = 0;
  for (const auto& w : option_words)
    if (present.count(w)) ++hits;
  return hits;
}

double matching_position(const TokenSequence& context, const WordSet& option_words) {
  if (context.empty()) return 0.0;
  std::size_t last = 0;
  bool found = false;
  for (std::size_t i = 0; i < context.size(); ++i) {
    if (option_words.count(context[i])) {
      last = i;
      found = true;
    }
  }
  if (!found) return 0.0;
  return static_cast<double>(last + 1) / static_cast<double>(context.size());
}

}  // namespace dmrc
