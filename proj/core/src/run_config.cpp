#include "dmrc/run_config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace dmrc {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return {};
  auto b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream ss(value);
  T out{};
  ss >> out;
  if (ss.fail() || !ss.eof())
    throw ConfigError("bad value for '" + key + "': " + value);
  return out;
}

}  // namespace

RunConfig RunConfig::from_file(const std::string& path) {
  RunConfig cfg;
  cfg.merge_file(path);
  return cfg;
}

void RunConfig::merge_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#' || stripped[0] == ';') continue;
    auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw ConfigError(path + ":" + std::to_string(lineno) + ": expected key = value");
    auto key = trim(stripped.substr(0, eq));
    auto value = trim(stripped.substr(eq + 1));
    if (key == "train_path") train_path = value;
    else if (key == "dev_path") dev_path = value;
    else if (key == "test_path") test_path = value;
    else if (key == "annotations_path") annotations_path = value;
    else if (key == "stopwords_path") stopwords_path = value;
    else if (key == "embeddings_path") embeddings_path = value;
    else if (key == "triples_path") triples_path = value;
    else if (key == "corpus_path") corpus_path = value;
    else if (key == "index_path") index_path = value;
    else if (key == "model_path") model_path = value;
    else if (key == "k") k = parse_number<unsigned>(key, value);
    else if (key == "rounds") rounds = parse_number<unsigned>(key, value);
    else if (key == "learning_rate") learning_rate = parse_number<double>(key, value);
    else if (key == "depth") depth = parse_number<unsigned>(key, value);
    else if (key == "seed") seed = parse_number<std::uint64_t>(key, value);
    else if (key == "jobs") jobs = parse_number<unsigned>(key, value);
    else if (key == "vocab_min_count") vocab_min_count = parse_number<unsigned>(key, value);
    else if (key == "max_turns") max_turns = parse_number<int>(key, value);
    else
      throw ConfigError(path + ":" + std::to_string(lineno) + ": unknown key '" + key + "'");
  }
}

std::string RunConfig::resolve_data_path(const std::string& path) {
  namespace fs = std::filesystem;
  if (path.empty() || fs::exists(path)) return path;
  if (fs::path(path).is_absolute()) return path;
  if (const char* root = std::getenv("SOLVER_DATA_DIR")) {
    fs::path candidate = fs::path(root) / path;
    if (fs::exists(candidate)) return candidate.string();
  }
  return path;
}

std::string RunConfig::fingerprint() const {
  std::ostringstream ss;
  ss << train_path << '|' << dev_path << '|' << test_path << '|' << annotations_path << '|'
     << stopwords_path << '|' << embeddings_path << '|' << triples_path << '|' << corpus_path
     << '|' << index_path << '|' << model_path << '|' << k << '|' << rounds << '|'
     << learning_rate << '|' << depth << '|' << seed << '|' << jobs << '|' << vocab_min_count
     << '|' << max_turns;
  const std::string s = ss.str();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace dmrc
