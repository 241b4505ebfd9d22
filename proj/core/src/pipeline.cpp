#include "dmrc/pipeline.hpp"

#include <functional>
#include <mutex>
#include <thread>
#include <unordered_map>

namespace dmrc {

namespace {

// Deterministic parallel map: worker t handles indices t, t+jobs, ...
void parallel_for(std::size_t n, unsigned jobs, const std::function<void(std::size_t)>& fn) {
  if (jobs <= 1 || n < 2) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, n));
  std::vector<std::thread> threads;
  std::exception_ptr error;
  std::mutex error_mutex;
  for (unsigned t = 0; t < jobs; ++t) {
    threads.emplace_back([&, t] {
      try {
        for (std::size_t i = t; i < n; i += jobs) fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) error = std::current_exception();
      }
    });
  }
  for (auto& th : threads) th.join();
  if (error) std::rethrow_exception(error);
}

std::unordered_map<std::string, const Dialogue*> dialogue_index(const DatasetSplit& split) {
  std::unordered_map<std::string, const Dialogue*> map;
  for (const auto& d : split.dialogues) map.emplace(d.id, &d);
  return map;
}

const Dialogue& dialogue_for(const std::unordered_map<std::string, const Dialogue*>& index,
                             const QuestionInstance& q) {
  auto it = index.find(q.dialogue_id);
  if (it == index.end())
    throw ValidationError("question references missing dialogue " + q.dialogue_id);
  return *it->second;
}

}  // namespace

std::vector<PredictionRecord> solve_split(const DatasetSplit& split, Method method,
                                          const FeatureResources& res, std::uint64_t seed,
                                          unsigned jobs, const DswppOptions& opts) {
  if (method == Method::gbdtpp)
    throw std::invalid_argument("gbdtpp needs a trained model; use train + predict");
  if (method == Method::dswpp && opts.use_ce && !res.embeddings)
    throw std::invalid_argument(
        "dswpp needs an embedding table; provide one or drop the ce term "
        "(--drop ce) to run the lexical-only variant");
  const StopWordList& stops = res.stops ? *res.stops : StopWordList::bundled();
  auto dialogues = dialogue_index(split);

  std::vector<PredictionRecord> out(split.questions.size());
  parallel_for(split.questions.size(), jobs, [&](std::size_t i) {
    const QuestionInstance& q = split.questions[i];
    Prediction p;
    if (method == Method::random) {
      // one generator per question keeps the draw independent of jobs
      std::mt19937_64 rng(seed + 0x9E3779B97F4A7C15ULL * (i + 1));
      p = solve_random(rng);
    } else {
      auto ctx = QuestionContext::prepare(q, dialogue_for(dialogues, q));
      switch (method) {
        case Method::wm: p = solve_wm(ctx); break;
        case Method::sw: p = solve_sw(ctx); break;
        case Method::dsw: p = solve_dsw(ctx, stops); break;
        case Method::dswpp: p = solve_dsw_pp(ctx, stops, res.embeddings, opts); break;
        default: break;
      }
    }
    out[i] = {q.dialogue_id, q.ordinal, p.chosen, p.scores, method_name(method)};
  });
  return out;
}

BoostedModel train_on_split(const DatasetSplit& train, const FeatureResources& res,
                            const GbdtParams& params, FeatureBlocks blocks,
                            std::size_t vocab_min_count, unsigned jobs) {
  FeatureLayout layout = make_layout(build_option_vocabulary(train, vocab_min_count), res, blocks);
  auto dialogues = dialogue_index(train);
  std::vector<std::vector<double>> features(train.questions.size());
  std::vector<int> labels(train.questions.size());
  parallel_for(train.questions.size(), jobs, [&](std::size_t i) {
    const QuestionInstance& q = train.questions[i];
    auto ctx = QuestionContext::prepare(q, dialogue_for(dialogues, q));
    features[i] = extract_features(ctx, layout, res);
    labels[i] = q.answer_index;
  });
  return train_gbdt(features, labels, layout, params);
}

std::vector<PredictionRecord> predict_split(const BoostedModel& model, const DatasetSplit& split,
                                            const FeatureResources& res, unsigned jobs) {
  auto dialogues = dialogue_index(split);
  std::vector<PredictionRecord> out(split.questions.size());
  parallel_for(split.questions.size(), jobs, [&](std::size_t i) {
    const QuestionInstance& q = split.questions[i];
    auto ctx = QuestionContext::prepare(q, dialogue_for(dialogues, q));
    auto x = extract_features(ctx, model.layout, res);
    auto p = predict_gbdt(model, x);
    out[i] = {q.dialogue_id, q.ordinal, p.chosen, p.probabilities, "gbdtpp"};
  });
  return out;
}

}  // namespace dmrc
