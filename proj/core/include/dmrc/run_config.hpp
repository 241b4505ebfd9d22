#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace dmrc {

// Everything a run needs, merged from defaults < config file < command line.
// Relative data paths fall back to $SOLVER_DATA_DIR when the file is not found
// where given.
struct RunConfig {
  std::string train_path = "train.json";
  std::string dev_path = "dev.json";
  std::string test_path = "test.json";
  std::string annotations_path;  // optional
  std::string stopwords_path;    // empty -> bundled list
  std::string embeddings_path;   // optional
  std::string triples_path;      // optional
  std::string corpus_path;       // optional, build-index input
  std::string index_path;        // optional, prebuilt co-occurrence index
  std::string model_path = "gbdt.model";

  unsigned k = 10;
  unsigned rounds = 600;
  double learning_rate = 0.1;
  unsigned depth = 3;
  std::uint64_t seed = 1;
  unsigned jobs = 1;
  unsigned vocab_min_count = 2;
  int max_turns = 48;

  static RunConfig from_file(const std::string& path);
  void merge_file(const std::string& path);

  // Resolves `path` against the working directory, then $SOLVER_DATA_DIR.
  // Returns the path unchanged when neither exists (callers report the error).
  static std::string resolve_data_path(const std::string& path);

  std::string fingerprint() const;  // stable hash of the effective settings
};

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace dmrc
