#include "dmrc/knowledge.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace dmrc {

namespace {

std::string lowercase(std::string s) {
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

}  // namespace

EmbeddingTable EmbeddingTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embedding file: " + path);
  EmbeddingTable table;
  std::string line;
  std::size_t lineno = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string token;
    ss >> token;
    std::vector<float> vec;
    float v;
    while (ss >> v) vec.push_back(v);
    if (first) {
      first = false;
      // optional "count dim" header row
      if (vec.size() == 1) {
        char* end = nullptr;
        std::strtoull(token.c_str(), &end, 10);
        if (end && *end == '\0') continue;
      }
    }
    if (vec.empty())
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": no vector values");
    if (table.dim_ == 0) table.dim_ = vec.size();
    if (vec.size() != table.dim_)
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": dimension " +
                               std::to_string(vec.size()) + " != " + std::to_string(table.dim_));
    token = lowercase(token);
    if (table.rows_.count(token))
      std::cerr << "warning: duplicate embedding for '" << token << "', keeping the later row\n";
    table.rows_[token] = std::move(vec);
  }
  if (table.rows_.empty()) throw std::runtime_error("embedding file has no rows: " + path);
  return table;
}

void EmbeddingTable::insert(const Token& token, std::vector<float> vec) {
  if (dim_ == 0) dim_ = vec.size();
  if (vec.size() != dim_)
    throw std::runtime_error("embedding dimension mismatch on insert for '" + token + "'");
  rows_[lowercase(token)] = std::move(vec);
}

const std::vector<float>* EmbeddingTable::find(const Token& token) const {
  auto it = rows_.find(token);
  return it == rows_.end() ? nullptr : &it->second;
}

namespace {

// Sum of embeddings over `tokens[begin, end)`; unknown tokens add nothing.
void accumulate(const TokenSequence& tokens, std::size_t begin, std::size_t end,
                const EmbeddingTable& table, std::vector<double>& sum) {
  std::fill(sum.begin(), sum.end(), 0.0);
  for (std::size_t i = begin; i < end; ++i) {
    if (const auto* v = table.find(tokens[i])) {
      for (std::size_t d = 0; d < sum.size(); ++d) sum[d] += (*v)[d];
    }
  }
}

double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

double window_similarity(const TokenSequence& option, const TokenSequence& context,
                         const EmbeddingTable& table) {
  const std::size_t m = option.size();
  if (m == 0 || context.size() < m) return 0.0;
  std::vector<double> opt(table.dimension(), 0.0), win(table.dimension(), 0.0);
  accumulate(option, 0, m, table, opt);
  const double opt_norm = norm(opt);
  if (opt_norm == 0.0) return 0.0;

  double best = 0.0;  // an all-unknown window counts as similarity 0
  bool any = false;
  for (std::size_t j = 0; j + m <= context.size(); ++j) {
    accumulate(context, j, j + m, table, win);
    const double win_norm = norm(win);
    double cos = 0.0;
    if (win_norm > 0.0) {
      double dot = 0;
      for (std::size_t d = 0; d < opt.size(); ++d) dot += opt[d] * win[d];
      cos = dot / (opt_norm * win_norm);
    }
    best = any ? std::max(best, cos) : cos;
    any = true;
  }
  return std::clamp(best, -1.0, 1.0);
}

double similarity_blend(const TokenSequence& option, const Dialogue& dialogue,
                        const SpeakerQuery& q, const EmbeddingTable& table) {
  const double general = window_similarity(option, speaker_view(dialogue, {}), table);
  const double focused =
      q.wildcard() ? general : window_similarity(option, speaker_view(dialogue, q), table);
  return (focused + general) / 2.0;
}

RelationTriples RelationTriples::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open relation triple file: " + path);
  RelationTriples triples;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto t1 = line.find('\t');
    auto t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
    if (t2 == std::string::npos)
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected head\\trelation\\ttail");
    triples.add(line.substr(0, t1), line.substr(t1 + 1, t2 - t1 - 1), line.substr(t2 + 1));
  }
  return triples;
}

void RelationTriples::add(const std::string& head, const std::string& relation,
                          const std::string& tail) {
  auto h = lowercase(head), r = lowercase(relation), t = lowercase(tail);
  auto& entries = by_head_[h];
  // triples form a set
  std::uint32_t rel_id;
  auto it = relation_ids_.find(r);
  if (it == relation_ids_.end()) {
    rel_id = static_cast<std::uint32_t>(relations_.size());
    relation_ids_.emplace(r, rel_id);
    relations_.push_back(r);
    dirty_ = true;  // label list no longer sorted, reindex before use
  } else {
    rel_id = it->second;
  }
  for (const auto& [rid, tail_w] : entries)
    if (rid == rel_id && tail_w == t) return;
  entries.emplace_back(rel_id, t);
  ++count_;
}

void RelationTriples::reindex() const {
  if (!dirty_) return;
  std::vector<std::string> sorted = relations_;
  std::sort(sorted.begin(), sorted.end());
  std::unordered_map<std::uint32_t, std::uint32_t> remap;
  std::unordered_map<std::string, std::uint32_t> new_ids;
  for (std::uint32_t i = 0; i < sorted.size(); ++i) new_ids.emplace(sorted[i], i);
  for (std::uint32_t old = 0; old < relations_.size(); ++old)
    remap.emplace(old, new_ids.at(relations_[old]));
  auto& self = const_cast<RelationTriples&>(*this);
  for (auto& [head, entries] : self.by_head_)
    for (auto& e : entries) e.first = remap.at(e.first);
  self.relations_ = std::move(sorted);
  self.relation_ids_ = std::move(new_ids);
  self.dirty_ = false;
}

const std::vector<std::string>& RelationTriples::relations() const {
  reindex();
  return relations_;
}

std::vector<long long> RelationTriples::relation_counts(const WordSet& option_words,
                                                        const WordSet& dialogue_words) const {
  reindex();
  std::vector<long long> counts(relations_.size(), 0);
  for (const auto& w : option_words) {
    auto it = by_head_.find(w);
    if (it == by_head_.end()) continue;
    for (const auto& [rel_id, tail] : it->second)
      if (dialogue_words.count(tail)) ++counts[rel_id];
  }
  return counts;
}

CooccurrenceIndex::CooccurrenceIndex(unsigned k) : k_(k) {
  if (k_ < 2) throw std::invalid_argument("co-occurrence window must be at least 2");
}

std::uint32_t CooccurrenceIndex::id_of(const Token& w) {
  auto it = ids_.find(w);
  if (it != ids_.end()) return it->second;
  auto id = static_cast<std::uint32_t>(vocab_.size());
  ids_.emplace(w, id);
  vocab_.push_back(w);
  c1_.push_back(0);
  return id;
}

std::uint64_t CooccurrenceIndex::unigram(const Token& w) const {
  auto it = ids_.find(w);
  return it == ids_.end() ? 0 : c1_[it->second];
}

namespace {
std::uint64_t pair_key(std::uint32_t a, std::uint32_t b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}
}  // namespace

std::uint64_t CooccurrenceIndex::pair(const Token& a, const Token& b) const {
  auto ia = ids_.find(a);
  auto ib = ids_.find(b);
  if (ia == ids_.end() || ib == ids_.end()) return 0;
  auto it = c2_.find(pair_key(ia->second, ib->second));
  return it == c2_.end() ? 0 : it->second;
}

void CooccurrenceIndex::add_stream(const TokenSequence& tokens, const TokenSequence& carry_prefix) {
  if (tokens.empty()) return;
  std::vector<std::uint32_t> ids;
  ids.reserve(carry_prefix.size() + tokens.size());
  for (const auto& t : carry_prefix) ids.push_back(id_of(t));
  for (const auto& t : tokens) ids.push_back(id_of(t));
  const std::size_t offset = carry_prefix.size();
  for (std::size_t j = offset; j < ids.size(); ++j) {
    ++c1_[ids[j]];
    ++total_;
    const std::size_t lo = j >= k_ - 1 ? j - (k_ - 1) : 0;
    for (std::size_t i = lo; i < j; ++i) ++c2_[pair_key(ids[i], ids[j])];
  }
}

void CooccurrenceIndex::merge(const CooccurrenceIndex& other) {
  if (other.k_ != k_)
    throw std::invalid_argument("cannot merge co-occurrence indexes with different windows (" +
                                std::to_string(k_) + " vs " + std::to_string(other.k_) + ")");
  std::vector<std::uint32_t> remap(other.vocab_.size());
  for (std::uint32_t id = 0; id < other.vocab_.size(); ++id) {
    remap[id] = id_of(other.vocab_[id]);
    c1_[remap[id]] += other.c1_[id];
  }
  for (const auto& [key, count] : other.c2_) {
    auto a = static_cast<std::uint32_t>(key >> 32);
    auto b = static_cast<std::uint32_t>(key & 0xffffffffu);
    c2_[pair_key(remap[a], remap[b])] += count;
  }
  total_ += other.total_;
}

namespace {

constexpr char kCoocMagic[5] = {'C', 'O', 'O', 'C', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

struct ByteReader {
  const std::string& data;
  std::size_t pos = 0;
  const std::string origin;

  void need(std::size_t n) const {
    if (pos + n > data.size()) throw std::runtime_error(origin + ": truncated file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  std::string bytes(std::size_t n) {
    need(n);
    std::string s = data.substr(pos, n);
    pos += n;
    return s;
  }
};

std::string read_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_binary(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace

void CooccurrenceIndex::save(const std::string& path) const {
  // ids are remapped onto the sorted vocabulary so identical counts always
  // produce identical bytes, independent of insertion order
  std::vector<std::uint32_t> order(vocab_.size());
  for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::uint32_t a, std::uint32_t b) { return vocab_[a] < vocab_[b]; });
  std::vector<std::uint32_t> remap(vocab_.size());
  for (std::uint32_t rank = 0; rank < order.size(); ++rank) remap[order[rank]] = rank;

  std::string out;
  out.append(kCoocMagic, sizeof kCoocMagic);
  put_u32(out, 1);  // version
  put_u32(out, k_);
  put_u64(out, total_);
  put_u32(out, static_cast<std::uint32_t>(vocab_.size()));
  for (std::uint32_t old : order) {
    put_u32(out, static_cast<std::uint32_t>(vocab_[old].size()));
    out += vocab_[old];
    put_u64(out, c1_[old]);
  }
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  pairs.reserve(c2_.size());
  for (const auto& [key, count] : c2_) {
    auto a = remap[static_cast<std::uint32_t>(key >> 32)];
    auto b = remap[static_cast<std::uint32_t>(key & 0xffffffffu)];
    pairs.emplace_back(pair_key(a, b), count);
  }
  std::sort(pairs.begin(), pairs.end());
  put_u64(out, pairs.size());
  for (const auto& [key, count] : pairs) {
    put_u32(out, static_cast<std::uint32_t>(key >> 32));
    put_u32(out, static_cast<std::uint32_t>(key & 0xffffffffu));
    put_u64(out, count);
  }
  write_binary(path, out);
}

CooccurrenceIndex CooccurrenceIndex::load(const std::string& path) {
  const std::string data = read_binary(path);
  ByteReader r{data, 0, path};
  if (r.bytes(sizeof kCoocMagic) != std::string(kCoocMagic, sizeof kCoocMagic))
    throw std::runtime_error(path + ": not a co-occurrence index (bad magic)");
  auto version = r.u32();
  if (version != 1)
    throw std::runtime_error(path + ": unsupported index version " + std::to_string(version));
  auto k = r.u32();
  if (k < 2) throw std::runtime_error(path + ": invalid window " + std::to_string(k));
  CooccurrenceIndex index(k);
  index.total_ = r.u64();
  auto vocab_n = r.u32();
  index.vocab_.reserve(vocab_n);
  index.c1_.reserve(vocab_n);
  for (std::uint32_t i = 0; i < vocab_n; ++i) {
    auto len = r.u32();
    auto word = r.bytes(len);
    index.ids_.emplace(word, i);
    index.vocab_.push_back(std::move(word));
    index.c1_.push_back(r.u64());
  }
  auto pair_n = r.u64();
  index.c2_.reserve(pair_n);
  for (std::uint64_t i = 0; i < pair_n; ++i) {
    auto a = r.u32();
    auto b = r.u32();
    if (a >= vocab_n || b >= vocab_n)
      throw std::runtime_error(path + ": pair entry references unknown token id");
    index.c2_.emplace(pair_key(a, b), r.u64());
  }
  if (r.pos != data.size()) throw std::runtime_error(path + ": trailing bytes after pair table");
  return index;
}

CooccurrenceIndex build_cooccurrence_index(const TokenSequence& corpus, unsigned k) {
  if (corpus.empty()) throw std::invalid_argument("cannot index an empty corpus");
  CooccurrenceIndex index(k);
  index.add_stream(corpus);
  return index;
}

CooccurrenceIndex index_corpus_file(const std::string& path, unsigned k, unsigned jobs) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open corpus file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(std::move(line));

  if (jobs < 1) jobs = 1;
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, lines.size()));
  std::vector<CooccurrenceIndex> shards(jobs, CooccurrenceIndex(k));
  auto worker = [&](unsigned shard) {
    // each line is its own document; pairs never cross lines
    for (std::size_t i = shard; i < lines.size(); i += jobs)
      shards[shard].add_stream(normalize_text(tokenize(lines[i])));
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> threads;
    for (unsigned s = 0; s < jobs; ++s) threads.emplace_back(worker, s);
    for (auto& t : threads) t.join();
  }
  CooccurrenceIndex index = std::move(shards[0]);
  for (unsigned s = 1; s < jobs; ++s) index.merge(shards[s]);
  if (index.total_tokens() == 0) throw std::invalid_argument("corpus file has no tokens: " + path);
  return index;
}

PmiTriple pmi_features(const TokenSequence& option, const WordSet& context_words,
                       const CooccurrenceIndex& index) {
  if (option.empty()) return {};
  double sum_max = 0, sum_min = 0, sum_avg = 0;
  std::vector<double> values;
  for (const auto& w : option) {
    const double c1w = static_cast<double>(index.unigram(w));
    values.clear();
    for (const auto& ctx : context_words) {
      const auto c2 = index.pair(w, ctx);
      if (c2 == 0) continue;
      const double c1c = static_cast<double>(index.unigram(ctx));
      values.push_back(std::log(static_cast<double>(c2) / (c1w * c1c)));
    }
    if (values.empty()) continue;  // no co-occurring context word: contributes 0
    // sort so the mean does not depend on set iteration order
    std::sort(values.begin(), values.end());
    sum_max += values.back();
    sum_min += values.front();
    double s = 0;
    for (double v : values) s += v;
    sum_avg += s / static_cast<double>(values.size());
  }
  const double denom = static_cast<double>(option.size());
  return {sum_max / denom, sum_min / denom, sum_avg / denom};
}

}  // namespace dmrc
