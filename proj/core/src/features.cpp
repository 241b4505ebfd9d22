#include "dmrc/features.hpp"

#include <algorithm>
#include <map>

namespace dmrc {

std::vector<std::string> build_option_vocabulary(const DatasetSplit& train,
                                                 std::size_t min_count) {
  std::map<std::string, std::size_t> counts;
  for (const auto& q : train.questions)
    for (const auto& opt : q.options)
      for (const auto& tok : normalize_text(tokenize(opt))) ++counts[tok];
  std::vector<std::string> vocab;
  for (const auto& [tok, c] : counts)
    if (c >= min_count) vocab.push_back(tok);
  return vocab;  // map iteration is already sorted
}

FeatureLayout make_layout(std::vector<std::string> vocabulary, const FeatureResources& res,
                          FeatureBlocks requested) {
  FeatureLayout layout;
  layout.vocabulary = std::move(vocabulary);
  std::sort(layout.vocabulary.begin(), layout.vocabulary.end());
  if (res.triples) layout.relations = res.triples->relations();
  layout.enabled = requested;
  if (!res.cooccurrence) layout.enabled.pmi = false;
  if (!res.triples) layout.enabled.cr = false;
  if (!res.embeddings) layout.enabled.ce = false;
  return layout;
}

std::vector<double> extract_features(const QuestionContext& ctx, const FeatureLayout& layout,
                                     const FeatureResources& res) {
  const StopWordList& stops = res.stops ? *res.stops : StopWordList::bundled();
  std::vector<double> x(layout.dim(), 0.0);
  const bool speaker = layout.enabled.speaker;
  const bool focus = speaker && !ctx.target.wildcard();

  if (layout.enabled.bag && !layout.vocabulary.empty()) {
    for (int i = 0; i < 3; ++i) {
      const std::size_t base = layout.bag_offset() + i * layout.vocabulary.size();
      for (const auto& tok : ctx.option_tokens[i]) {
        auto it = std::lower_bound(layout.vocabulary.begin(), layout.vocabulary.end(), tok);
        if (it != layout.vocabulary.end() && *it == tok)
          x[base + static_cast<std::size_t>(it - layout.vocabulary.begin())] += 1.0;
      }
    }
  }

  if (layout.enabled.rule) {
    const std::size_t base = layout.rule_offset();
    for (int i = 0; i < 3; ++i) {
      WordSet bag = ctx.option_words[i];
      bag.insert(ctx.question_words.begin(), ctx.question_words.end());
      const double sw_g = sliding_window_score(ctx.context_all, bag, ctx.ic_all);
      const double sw_s =
          focus ? sliding_window_score(ctx.context_speaker, bag, ctx.ic_speaker)
                : (speaker ? sw_g : 0.0);
      const double d_g =
          distance_score(ctx.context_all, ctx.question_words, ctx.option_words[i], stops);
      const double d_s =
          focus ? distance_score(ctx.context_speaker, ctx.question_words, ctx.option_words[i],
                                 stops)
                : (speaker ? d_g : 0.0);
      x[base + i] = sw_g;
      x[base + 3 + i] = sw_s;
      x[base + 6 + i] = d_g;
      x[base + 9 + i] = d_s;
    }
  }

  if (layout.enabled.position) {
    const std::size_t base = layout.position_offset();
    for (int i = 0; i < 3; ++i) {
      const double p_g = matching_position(ctx.context_all, ctx.option_words[i]);
      const double p_s = focus ? matching_position(ctx.context_speaker, ctx.option_words[i])
                               : (speaker ? p_g : 0.0);
      x[base + i] = p_g;
      x[base + 3 + i] = p_s;
    }
  }

  if (layout.enabled.pmi && res.cooccurrence) {
    const std::size_t base = layout.pmi_offset();
    const WordSet all_words = word_set(ctx.context_all);
    const WordSet spk_words = focus ? word_set(ctx.context_speaker) : WordSet{};
    for (int i = 0; i < 3; ++i) {
      const PmiTriple general = pmi_features(ctx.option_tokens[i], all_words, *res.cooccurrence);
      const PmiTriple focused =
          focus ? pmi_features(ctx.option_tokens[i], spk_words, *res.cooccurrence)
                : (speaker ? general : PmiTriple{});
      // {max,min,avg} x {speaker, general}, options within
      x[base + 0 + i] = focused.max;
      x[base + 3 + i] = general.max;
      x[base + 6 + i] = focused.min;
      x[base + 9 + i] = general.min;
      x[base + 12 + i] = focused.avg;
      x[base + 15 + i] = general.avg;
    }
  }

  if (layout.enabled.cr && res.triples && !layout.relations.empty()) {
    const std::size_t base = layout.cr_offset();
    const WordSet dialogue_words = word_set(ctx.context_all);
    const auto& labels = res.triples->relations();
    for (int i = 0; i < 3; ++i) {
      auto counts = res.triples->relation_counts(ctx.option_words[i], dialogue_words);
      // align by label: the layout may come from a model file
      for (std::size_t j = 0; j < labels.size(); ++j) {
        auto it = std::lower_bound(layout.relations.begin(), layout.relations.end(), labels[j]);
        if (it != layout.relations.end() && *it == labels[j])
          x[base + i * layout.relations.size() +
            static_cast<std::size_t>(it - layout.relations.begin())] =
              static_cast<double>(counts[j]);
      }
    }
  }

  if (layout.enabled.ce && res.embeddings) {
    const std::size_t base = layout.ce_offset();
    for (int i = 0; i < 3; ++i) {
      const double cs_g = window_similarity(ctx.option_tokens[i], ctx.context_all, *res.embeddings);
      const double cs_s =
          focus ? window_similarity(ctx.option_tokens[i], ctx.context_speaker, *res.embeddings)
                : (speaker ? cs_g : 0.0);
      x[base + i] = cs_g;
      x[base + 3 + i] = cs_s;
    }
  }

  return x;
}

}  // namespace dmrc
