#pragma once

#include <unordered_map>

#include "dmrc/textprep.hpp"

namespace dmrc {

using InverseCountWeights = std::unordered_map<Token, double>;

// w(token) = ln(1 + 1/count(token)), counts taken over `context`.
InverseCountWeights inverse_count_weights(const TokenSequence& context);

// Best full window of length |target_bag| by summed weights of tokens that are
// in the bag. 0 when the context is shorter than the window or nothing hits.
double sliding_window_score(const TokenSequence& context, const WordSet& target_bag);
double sliding_window_score(const TokenSequence& context, const WordSet& target_bag,
                            const InverseCountWeights& weights);

// Normalized minimal token distance between question hits and option-only hits
// (stop words excluded). 1 when either side has no hit or the context is trivial.
double distance_score(const TokenSequence& context, const WordSet& question_words,
                      const WordSet& option_words, const StopWordList& stops);

// Number of distinct option words present in the context.
int word_match_score(const TokenSequence& context, const WordSet& option_words);

// Last hit position / context length; 0 when nothing matches or context empty.
double matching_position(const TokenSequence& context, const WordSet& option_words);

}  // namespace dmrc
