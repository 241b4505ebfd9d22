// Command line front end for the dialogue multiple-choice solvers.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "dmrc/pipeline.hpp"
#include "dmrc/run_config.hpp"

namespace {

using namespace dmrc;

struct CliState {
  RunConfig cfg;
  std::string config_file;
  // flags that must win over the config file are staged here
  std::optional<std::string> train_path, dev_path, test_path, annotations_path, stopwords_path,
      embeddings_path, triples_path, corpus_path, index_path, model_path;
  std::optional<unsigned> k, rounds, depth, jobs, vocab_min_count;
  std::optional<double> learning_rate;
  std::optional<std::uint64_t> seed;
  std::optional<int> max_turns;

  void finalize() {
    if (!config_file.empty()) cfg.merge_file(RunConfig::resolve_data_path(config_file));
    if (train_path) cfg.train_path = *train_path;
    if (dev_path) cfg.dev_path = *dev_path;
    if (test_path) cfg.test_path = *test_path;
    if (annotations_path) cfg.annotations_path = *annotations_path;
    if (stopwords_path) cfg.stopwords_path = *stopwords_path;
    if (embeddings_path) cfg.embeddings_path = *embeddings_path;
    if (triples_path) cfg.triples_path = *triples_path;
    if (corpus_path) cfg.corpus_path = *corpus_path;
    if (index_path) cfg.index_path = *index_path;
    if (model_path) cfg.model_path = *model_path;
    if (k) cfg.k = *k;
    if (rounds) cfg.rounds = *rounds;
    if (depth) cfg.depth = *depth;
    if (jobs) cfg.jobs = *jobs;
    if (vocab_min_count) cfg.vocab_min_count = *vocab_min_count;
    if (learning_rate) cfg.learning_rate = *learning_rate;
    if (seed) cfg.seed = *seed;
    if (max_turns) cfg.max_turns = *max_turns;
  }
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string split_path(const RunConfig& cfg, const std::string& split) {
  std::string path;
  if (split == "train") path = cfg.train_path;
  else if (split == "dev") path = cfg.dev_path;
  else if (split == "test") path = cfg.test_path;
  else throw UsageError("unknown split '" + split + "' (expected train, dev, test or all)");
  return RunConfig::resolve_data_path(path);
}

DatasetSplit load_split(const RunConfig& cfg, const std::string& split) {
  if (split == "all") {
    auto train = parse_dataset(split_path(cfg, "train"), "train");
    auto dev = parse_dataset(split_path(cfg, "dev"), "dev");
    auto test = parse_dataset(split_path(cfg, "test"), "test");
    return merge_splits({&train, &dev, &test}, "all");
  }
  return parse_dataset(split_path(cfg, split), split);
}

StopWordList load_stops(const RunConfig& cfg) {
  if (cfg.stopwords_path.empty()) return StopWordList::bundled();
  return StopWordList::load(RunConfig::resolve_data_path(cfg.stopwords_path));
}

// A configured path that does not exist is a usage problem, caught up front.
std::string existing_path(const std::string& configured, const char* what) {
  auto path = RunConfig::resolve_data_path(configured);
  if (!std::filesystem::exists(path)) throw UsageError(std::string(what) + " not found: " + path);
  return path;
}

Resources load_resources(const RunConfig& cfg, bool need_embeddings, bool need_triples,
                         bool need_index) {
  Resources res;
  res.stops = load_stops(cfg);
  if (!cfg.embeddings_path.empty())
    res.embeddings = EmbeddingTable::load(existing_path(cfg.embeddings_path, "embedding file"));
  else if (need_embeddings)
    throw UsageError("this command needs embeddings_path (--embeddings)");
  if (!cfg.triples_path.empty())
    res.triples = RelationTriples::load(existing_path(cfg.triples_path, "triple file"));
  else if (need_triples)
    throw UsageError("this command needs triples_path (--triples)");
  if (!cfg.index_path.empty())
    res.cooccurrence = CooccurrenceIndex::load(existing_path(cfg.index_path, "index file"));
  else if (need_index)
    throw UsageError("this command needs a co-occurrence index (--index; run build-index first)");
  return res;
}

std::vector<std::string> parse_drop(const std::string& drop) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : drop) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

FeatureBlocks blocks_from_drop(const std::vector<std::string>& drop) {
  FeatureBlocks b;
  for (const auto& name : drop) {
    if (name == "bag-of-words") b.bag = false;
    else if (name == "rule-features") b.rule = false;
    else if (name == "matching-position") b.position = false;
    else if (name == "dialogue-structure") b.speaker = false;
    else if (name == "pmi") b.pmi = false;
    else if (name == "cr") b.cr = false;
    else if (name == "ce") b.ce = false;
    else if (name == "pmi-cr-ce") b.pmi = b.cr = b.ce = false;
    else
      throw UsageError("unknown feature block '" + name +
                       "' (valid: bag-of-words, rule-features, matching-position, "
                       "dialogue-structure, pmi, cr, ce, pmi-cr-ce)");
  }
  return b;
}

int cmd_validate(const CliState& st, const std::string& split) {
  auto data = load_split(st.cfg, split);
  auto violations = validate_dataset(data, {st.cfg.max_turns});
  if (violations.empty()) {
    std::cout << "ok: " << data.dialogues.size() << " dialogues, " << data.questions.size()
              << " questions, no violations\n";
    return 0;
  }
  for (const auto& v : violations)
    std::cout << to_string(v.kind) << " in dialogue " << v.dialogue_id << ": " << v.detail
              << "\n";
  std::cout << violations.size() << " violation(s)\n";
  return 2;
}

int cmd_stats(const CliState& st, const std::string& split) {
  if (split == "all") {
    for (const char* name : {"train", "dev", "test"}) {
      auto data = load_split(st.cfg, name);
      std::cout << format_stats(dataset_stats(data), name);
    }
    auto all = load_split(st.cfg, "all");
    std::cout << format_stats(dataset_stats(all), "all");
  } else {
    auto data = load_split(st.cfg, split);
    std::cout << format_stats(dataset_stats(data), split);
  }
  return 0;
}

int cmd_build_index(const CliState& st, const std::string& out) {
  if (st.cfg.corpus_path.empty()) throw UsageError("build-index needs corpus_path (--corpus)");
  auto index = index_corpus_file(existing_path(st.cfg.corpus_path, "corpus file"), st.cfg.k,
                                 st.cfg.jobs);
  index.save(out);
  std::cout << "indexed " << index.total_tokens() << " tokens, vocabulary "
            << index.vocabulary_size() << ", pairs " << index.pair_count() << ", window "
            << index.window() << " -> " << out << "\n";
  return 0;
}

int cmd_solve(const CliState& st, const std::string& method_name, const std::string& split,
              const std::string& out, const std::string& drop) {
  auto method = method_from_name(method_name);
  if (!method || *method == Method::gbdtpp)
    throw UsageError("solve supports random, wm, sw, dsw, dswpp (for gbdtpp use train + predict)");
  DswppOptions opts;
  for (const auto& name : parse_drop(drop)) {
    if (name == "dialogue-structure") opts.use_dialogue_structure = false;
    else if (name == "ce") opts.use_ce = false;
    else throw UsageError("unknown drop '" + name + "' for solve (valid: dialogue-structure, ce)");
  }
  const bool needs_embeddings = *method == Method::dswpp && opts.use_ce;
  if (needs_embeddings && st.cfg.embeddings_path.empty())
    throw UsageError(
        "dswpp needs an embedding table (--embeddings); pass --drop ce to run without it");
  auto res = load_resources(st.cfg, needs_embeddings, false, false);
  auto data = load_split(st.cfg, split);
  auto records = solve_split(data, *method, res.view(), st.cfg.seed, st.cfg.jobs, opts);
  if (!out.empty()) write_predictions_csv(out, records);
  auto gold = gold_answers(data, records);
  std::vector<int> chosen;
  chosen.reserve(records.size());
  for (const auto& r : records) chosen.push_back(r.chosen);
  std::printf("%s on %s: accuracy %.4f (%zu questions)\n", method_name.c_str(), split.c_str(),
              accuracy(chosen, gold), records.size());
  return 0;
}

int cmd_train(const CliState& st, const std::string& drop) {
  auto blocks = blocks_from_drop(parse_drop(drop));
  auto res = load_resources(st.cfg, false, false, false);
  auto train = load_split(st.cfg, "train");
  GbdtParams params{st.cfg.rounds, st.cfg.learning_rate, st.cfg.depth, st.cfg.seed};
  auto model = train_on_split(train, res.view(), params, blocks, st.cfg.vocab_min_count,
                              st.cfg.jobs);
  save_model(model, st.cfg.model_path);
  std::printf("trained %u rounds on %zu questions (dim %zu), final train loss %.6f -> %s\n",
              params.rounds, train.questions.size(), model.layout.dim(),
              model.train_loss.empty() ? 0.0 : model.train_loss.back(),
              st.cfg.model_path.c_str());
  return 0;
}

int cmd_predict(const CliState& st, const std::string& split, const std::string& out) {
  auto model = load_model(existing_path(st.cfg.model_path, "model file"));
  auto res = load_resources(st.cfg, false, false, false);
  auto data = load_split(st.cfg, split);
  auto records = predict_split(model, data, res.view(), st.cfg.jobs);
  if (!out.empty()) write_predictions_csv(out, records);
  auto gold = gold_answers(data, records);
  std::vector<int> chosen;
  chosen.reserve(records.size());
  for (const auto& r : records) chosen.push_back(r.chosen);
  std::printf("gbdtpp on %s: accuracy %.4f (%zu questions)\n", split.c_str(),
              accuracy(chosen, gold), records.size());
  return 0;
}

int cmd_evaluate(const CliState& st, const std::string& pred, const std::string& split,
                 const std::string& out, const std::vector<int>& edges) {
  auto records = read_predictions_csv(RunConfig::resolve_data_path(pred));
  auto data = load_split(st.cfg, split);
  std::optional<std::vector<QuestionTypeAnnotation>> ann;
  if (!st.cfg.annotations_path.empty())
    ann = load_annotations(RunConfig::resolve_data_path(st.cfg.annotations_path));
  auto report = evaluate_predictions(records, data, ann ? &*ann : nullptr,
                                     edges.empty() ? std::vector<int>{0, 10, 49} : edges,
                                     st.cfg.fingerprint());
  std::cout << format_report(report);
  if (!out.empty()) {
    std::ofstream os(out, std::ios::trunc);
    if (!os) throw std::runtime_error("cannot write report: " + out);
    os << report_json(report) << "\n";
  }
  return 0;
}

int cmd_ablate(const CliState& st, const std::string& method_name, const std::string& drop) {
  auto method = method_from_name(method_name);
  if (!method || (*method != Method::dswpp && *method != Method::gbdtpp))
    throw UsageError("ablate supports dswpp and gbdtpp");
  const bool gbdt = *method == Method::gbdtpp;
  auto res = load_resources(st.cfg, *method == Method::dswpp, false, false);
  auto dev = load_split(st.cfg, "dev");
  std::optional<DatasetSplit> train;
  if (gbdt) train = load_split(st.cfg, "train");

  AblationSetup setup;
  setup.method = *method;
  setup.dev = &dev;
  if (train) setup.train = &*train;
  setup.resources = res.view();
  setup.params = GbdtParams{st.cfg.rounds, st.cfg.learning_rate, st.cfg.depth, st.cfg.seed};
  setup.seed = st.cfg.seed;
  setup.jobs = st.cfg.jobs;
  setup.vocab_min_count = st.cfg.vocab_min_count;

  auto rows = run_ablation(setup, parse_drop(drop));
  std::cout << format_ablation(rows);
  return 0;
}

int cmd_ensemble(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.size() < 2) throw UsageError("ensemble needs at least two prediction files");
  std::vector<std::vector<PredictionRecord>> methods;
  methods.reserve(inputs.size());
  for (const auto& path : inputs)
    methods.push_back(read_predictions_csv(RunConfig::resolve_data_path(path)));
  auto voted = majority_vote(methods);
  write_predictions_csv(out, voted);
  std::cout << "ensembled " << methods.size() << " methods over " << voted.size()
            << " questions -> " << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dialogue multiple-choice reading comprehension solvers"};
  app.require_subcommand(1);

  CliState st;
  app.add_option("--config", st.config_file, "INI config file");
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--train", st.train_path, "train split JSON");
    sub->add_option("--dev", st.dev_path, "dev split JSON");
    sub->add_option("--test", st.test_path, "test split JSON");
    sub->add_option("--annotations", st.annotations_path, "question type CSV");
    sub->add_option("--stopwords", st.stopwords_path, "stop word list");
    sub->add_option("--embeddings", st.embeddings_path, "embedding text file");
    sub->add_option("--triples", st.triples_path, "relation triple TSV");
    sub->add_option("--corpus", st.corpus_path, "co-occurrence corpus, one document per line");
    sub->add_option("--index", st.index_path, "co-occurrence index file");
    sub->add_option("--model", st.model_path, "model file");
    sub->add_option("--seed", st.seed, "random seed");
    sub->add_option("--jobs", st.jobs, "worker threads");
    sub->add_option("--max-turns", st.max_turns, "validation turn limit");
  };

  std::string split = "dev", method, out, drop, pred;
  std::vector<int> edges;
  std::vector<std::string> ensemble_inputs;

  auto* validate = app.add_subcommand("validate", "check structural invariants of a split");
  add_common(validate);
  validate->add_option("--split", split, "train|dev|test|all");

  auto* stats = app.add_subcommand("stats", "corpus statistics");
  add_common(stats);
  stats->add_option("--split", split, "train|dev|test|all");

  auto* build_index = app.add_subcommand("build-index", "build the co-occurrence index");
  add_common(build_index);
  build_index->add_option("--k", st.k, "window width (positions)");
  build_index->add_option("--out", out, "output index file")->required();

  auto* solve = app.add_subcommand("solve", "run a rule-based method over a split");
  add_common(solve);
  solve->add_option("--method", method, "random|wm|sw|dsw|dswpp")->required();
  solve->add_option("--split", split, "train|dev|test|all");
  solve->add_option("--out", out, "predictions CSV");
  solve->add_option("--drop", drop, "dswpp terms to drop (dialogue-structure, ce)");

  auto* train = app.add_subcommand("train", "train the boosted-tree classifier");
  add_common(train);
  train->add_option("--rounds", st.rounds, "boosting rounds");
  train->add_option("--learning-rate", st.learning_rate, "shrinkage");
  train->add_option("--depth", st.depth, "tree depth");
  train->add_option("--vocab-min-count", st.vocab_min_count, "bag-of-words minimum count");
  train->add_option("--drop", drop, "feature blocks to drop");

  auto* predict = app.add_subcommand("predict", "predict a split with a trained model");
  add_common(predict);
  predict->add_option("--split", split, "train|dev|test|all");
  predict->add_option("--out", out, "predictions CSV");

  auto* evaluate = app.add_subcommand("evaluate", "score a predictions file against a split");
  add_common(evaluate);
  evaluate->add_option("--pred", pred, "predictions CSV")->required();
  evaluate->add_option("--split", split, "train|dev|test|all");
  evaluate->add_option("--out", out, "JSON report path");
  evaluate->add_option("--buckets", edges, "turn bucket edges, e.g. 0 10 49");

  auto* ablate = app.add_subcommand("ablate", "knockout table for dswpp or gbdtpp");
  add_common(ablate);
  ablate->add_option("--method", method, "dswpp|gbdtpp")->required();
  ablate->add_option("--rounds", st.rounds, "boosting rounds");
  ablate->add_option("--learning-rate", st.learning_rate, "shrinkage");
  ablate->add_option("--depth", st.depth, "tree depth");
  ablate->add_option("--vocab-min-count", st.vocab_min_count, "bag-of-words minimum count");
  ablate->add_option("--drop", drop, "subset of components to knock out");

  auto* ensemble = app.add_subcommand("ensemble", "majority vote over prediction files");
  ensemble->add_option("inputs", ensemble_inputs, "prediction CSV files")->expected(-2);
  ensemble->add_option("--out", out, "output CSV")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0 through CLI11; real parse errors land on 2
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    st.finalize();
    if (validate->parsed()) return cmd_validate(st, split);
    if (stats->parsed()) return cmd_stats(st, split);
    if (build_index->parsed()) return cmd_build_index(st, out);
    if (solve->parsed()) return cmd_solve(st, method, split, out, drop);
    if (train->parsed()) return cmd_train(st, drop);
    if (predict->parsed()) return cmd_predict(st, split, out);
    if (evaluate->parsed()) return cmd_evaluate(st, pred, split, out, edges);
    if (ablate->parsed()) return cmd_ablate(st, method, drop);
    if (ensemble->parsed()) return cmd_ensemble(ensemble_inputs, out);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const GbdtError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const EvalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
