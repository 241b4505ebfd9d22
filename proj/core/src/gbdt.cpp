#include "dmrc/gbdt.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

namespace dmrc {

double RegressionTree::predict(std::span<const double> x) const {
  std::size_t node = 0;
  while (!nodes[node].is_leaf())
    node = x[nodes[node].feature] <= nodes[node].threshold ? nodes[node].left
                                                           : nodes[node].right;
  return nodes[node].value;
}

namespace {

constexpr int kClasses = 3;
constexpr double kLeafFactor = (kClasses - 1.0) / kClasses;

struct SplitChoice {
  double proxy = -std::numeric_limits<double>::infinity();
  std::size_t feature = 0;
  double threshold = 0;
  bool found = false;
};

class TreeFitter {
 public:
  TreeFitter(const std::vector<std::vector<double>>& cols,
             const std::vector<std::vector<std::uint32_t>>& presorted, unsigned max_depth,
             double shrinkage)
      : cols_(cols), presorted_(presorted), max_depth_(max_depth), shrinkage_(shrinkage) {}

  RegressionTree fit(const std::vector<double>& residuals) {
    residuals_ = &residuals;
    RegressionTree tree;
    build(tree, presorted_, 0);
    return tree;
  }

 private:
  using Order = std::vector<std::vector<std::uint32_t>>;

  std::uint32_t make_leaf(RegressionTree& tree, const std::vector<std::uint32_t>& samples) {
    const auto& r = *residuals_;
    double num = 0, den = 0;
    for (auto i : samples) {
      num += r[i];
      den += std::abs(r[i]) * (1.0 - std::abs(r[i]));
    }
    TreeNode leaf;
    leaf.value = den == 0.0 ? 0.0 : shrinkage_ * kLeafFactor * num / den;
    tree.nodes.push_back(leaf);
    return static_cast<std::uint32_t>(tree.nodes.size() - 1);
  }

  std::uint32_t build(RegressionTree& tree, const Order& order, unsigned depth) {
    const auto& samples = order[0];
    const auto& r = *residuals_;
    bool constant = true;
    for (std::size_t i = 1; i < samples.size() && constant; ++i)
      constant = r[samples[i]] == r[samples[0]];
    if (depth >= max_depth_ || samples.size() < 2 || constant)
      return make_leaf(tree, samples);

    double total = 0;
    for (auto i : samples) total += r[i];

    // exact greedy: thresholds are midpoints between adjacent distinct values;
    // ties resolve to the lowest feature index, then the lowest threshold
    SplitChoice best;
    for (std::size_t f = 0; f < order.size(); ++f) {
      const auto& ord = order[f];
      const auto& col = cols_[f];
      if (col[ord.front()] == col[ord.back()]) continue;  // constant feature here
      double left = 0;
      for (std::size_t p = 0; p + 1 < ord.size(); ++p) {
        left += r[ord[p]];
        const double a = col[ord[p]], b = col[ord[p + 1]];
        if (a == b) continue;
        const double nl = static_cast<double>(p + 1);
        const double nr = static_cast<double>(ord.size() - p - 1);
        const double right = total - left;
        const double proxy = left * left / nl + right * right / nr;
        if (proxy > best.proxy) {
          best = {proxy, f, (a + b) / 2.0, true};
        }
      }
    }
    if (!best.found) return make_leaf(tree, samples);

    Order left_order(order.size()), right_order(order.size());
    const auto& split_col = cols_[best.feature];
    for (std::size_t f = 0; f < order.size(); ++f) {
      left_order[f].reserve(order[f].size());
      for (auto i : order[f]) {
        if (split_col[i] <= best.threshold)
          left_order[f].push_back(i);
        else
          right_order[f].push_back(i);
      }
    }

    const auto node_index = static_cast<std::uint32_t>(tree.nodes.size());
    tree.nodes.push_back({static_cast<std::uint32_t>(best.feature), best.threshold, 0, 0, 0.0});
    const auto left_child = build(tree, left_order, depth + 1);
    left_order = Order{};  // release before the right branch
    const auto right_child = build(tree, right_order, depth + 1);
    tree.nodes[node_index].left = left_child;
    tree.nodes[node_index].right = right_child;
    return node_index;
  }

  const std::vector<std::vector<double>>& cols_;
  const Order& presorted_;
  const unsigned max_depth_;
  const double shrinkage_;
  const std::vector<double>* residuals_ = nullptr;
};

std::array<double, kClasses> softmax(const std::array<double, kClasses>& f) {
  const double m = std::max({f[0], f[1], f[2]});
  std::array<double, kClasses> e{};
  double sum = 0;
  for (int c = 0; c < kClasses; ++c) {
    e[c] = std::exp(f[c] - m);
    sum += e[c];
  }
  for (int c = 0; c < kClasses; ++c) e[c] /= sum;
  return e;
}

}  // namespace

BoostedModel train_gbdt(const std::vector<std::vector<double>>& features,
                        const std::vector<int>& labels, const FeatureLayout& layout,
                        const GbdtParams& params) {
  const std::size_t n = features.size();
  const std::size_t d = layout.dim();
  if (n == 0) throw GbdtError("no training samples");
  if (labels.size() != n)
    throw GbdtError("label count " + std::to_string(labels.size()) + " != sample count " +
                    std::to_string(n));
  std::array<std::size_t, kClasses> class_counts{};
  for (std::size_t i = 0; i < n; ++i) {
    if (features[i].size() != d)
      throw GbdtError("sample " + std::to_string(i) + " has dimension " +
                      std::to_string(features[i].size()) + ", layout expects " +
                      std::to_string(d));
    if (labels[i] < 0 || labels[i] >= kClasses)
      throw GbdtError("label out of range at sample " + std::to_string(i) + ": " +
                      std::to_string(labels[i]));
    ++class_counts[labels[i]];
    for (std::size_t j = 0; j < d; ++j)
      if (!std::isfinite(features[i][j]))
        throw GbdtError("non-finite feature value at sample " + std::to_string(i) + ", column " +
                        std::to_string(j));
  }
  for (int c = 0; c < kClasses; ++c)
    if (class_counts[c] == 0)
      throw GbdtError("class " + std::to_string(c) + " is absent from the training labels");

  // canonical sample order (features lexicographically, then label) makes the
  // whole fit independent of the order the caller presents the data in
  std::vector<std::uint32_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), [&](std::uint32_t a, std::uint32_t b) {
    const auto& xa = features[a];
    const auto& xb = features[b];
    for (std::size_t j = 0; j < d; ++j)
      if (xa[j] != xb[j]) return xa[j] < xb[j];
    return labels[a] < labels[b];
  });

  std::vector<std::vector<double>> cols(d, std::vector<double>(n));
  std::vector<int> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = labels[perm[i]];
    const auto& row = features[perm[i]];
    for (std::size_t j = 0; j < d; ++j) cols[j][i] = row[j];
  }

  std::vector<std::vector<std::uint32_t>> presorted(d, std::vector<std::uint32_t>(n));
  for (std::size_t j = 0; j < d; ++j) {
    auto& ord = presorted[j];
    std::iota(ord.begin(), ord.end(), 0u);
    std::sort(ord.begin(), ord.end(), [&](std::uint32_t a, std::uint32_t b) {
      if (cols[j][a] != cols[j][b]) return cols[j][a] < cols[j][b];
      return a < b;
    });
  }

  BoostedModel model;
  model.params = params;
  model.layout = layout;
  for (int c = 0; c < kClasses; ++c)
    model.priors[c] = static_cast<double>(class_counts[c]) / static_cast<double>(n);

  std::vector<std::array<double, kClasses>> f(n);
  for (std::size_t i = 0; i < n; ++i)
    for (int c = 0; c < kClasses; ++c) f[i][c] = std::log(model.priors[c]);

  auto mean_log_loss = [&] {
    double loss = 0;
    for (std::size_t i = 0; i < n; ++i) loss -= std::log(softmax(f[i])[y[i]]);
    return loss / static_cast<double>(n);
  };

  // routes sample i through a tree using the column store
  auto predict_from_cols = [&](const RegressionTree& tree, std::size_t i) {
    std::size_t node = 0;
    while (!tree.nodes[node].is_leaf())
      node = cols[tree.nodes[node].feature][i] <= tree.nodes[node].threshold
                 ? tree.nodes[node].left
                 : tree.nodes[node].right;
    return tree.nodes[node].value;
  };

  TreeFitter fitter(cols, presorted, params.max_depth, params.learning_rate);
  std::vector<double> residuals(n);
  std::vector<std::array<double, kClasses>> probs(n);
  for (unsigned round = 0; round < params.rounds; ++round) {
    model.train_loss.push_back(mean_log_loss());
    // all three trees of a round fit against the same probability snapshot
    for (std::size_t i = 0; i < n; ++i) probs[i] = softmax(f[i]);
    for (int c = 0; c < kClasses; ++c) {
      for (std::size_t i = 0; i < n; ++i)
        residuals[i] = (y[i] == c ? 1.0 : 0.0) - probs[i][c];
      RegressionTree tree = fitter.fit(residuals);
      for (std::size_t i = 0; i < n; ++i) f[i][c] += predict_from_cols(tree, i);
      model.trees.push_back(std::move(tree));
    }
  }
  model.train_loss.push_back(mean_log_loss());
  return model;
}

GbdtPrediction predict_gbdt(const BoostedModel& model, std::span<const double> x) {
  if (x.size() != model.layout.dim())
    throw GbdtError("feature vector has dimension " + std::to_string(x.size()) +
                    ", the model expects " + std::to_string(model.layout.dim()));
  std::array<double, kClasses> scores{};
  for (int c = 0; c < kClasses; ++c) scores[c] = std::log(model.priors[c]);
  for (std::size_t t = 0; t < model.trees.size(); ++t)
    scores[t % kClasses] += model.trees[t].predict(x);
  GbdtPrediction out;
  out.probabilities = softmax(scores);
  out.chosen = 0;
  for (int c = 1; c < kClasses; ++c)
    if (out.probabilities[c] > out.probabilities[out.chosen]) out.chosen = c;
  return out;
}

namespace {

constexpr char kModelMagic[5] = {'G', 'B', 'D', 'T', '1'};

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }
void put_str(std::string& out, const std::string& s) {
  put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

struct ModelReader {
  const std::string& data;
  std::size_t pos = 0;
  const std::string origin;

  void need(std::size_t k) const {
    if (pos + k > data.size()) throw GbdtError(origin + ": truncated model file");
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i)
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i)
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + i])) << (8 * i);
    pos += 8;
    return v;
  }
  double f64() { return std::bit_cast<double>(u64()); }
  std::string str() {
    auto len = u32();
    need(len);
    std::string s = data.substr(pos, len);
    pos += len;
    return s;
  }
};

std::uint8_t pack_blocks(const FeatureBlocks& b) {
  return static_cast<std::uint8_t>(b.bag | b.rule << 1 | b.position << 2 | b.pmi << 3 |
                                   b.cr << 4 | b.ce << 5 | b.speaker << 6);
}

FeatureBlocks unpack_blocks(std::uint8_t v) {
  FeatureBlocks b;
  b.bag = v & 1;
  b.rule = v >> 1 & 1;
  b.position = v >> 2 & 1;
  b.pmi = v >> 3 & 1;
  b.cr = v >> 4 & 1;
  b.ce = v >> 5 & 1;
  b.speaker = v >> 6 & 1;
  return b;
}

}  // namespace

void save_model(const BoostedModel& model, const std::string& path) {
  std::string out;
  out.append(kModelMagic, sizeof kModelMagic);
  put_u32(out, 1);  // version
  put_u32(out, model.params.rounds);
  put_f64(out, model.params.learning_rate);
  put_u32(out, model.params.max_depth);
  put_u64(out, model.params.seed);
  for (double p : model.priors) put_f64(out, p);
  put_u32(out, static_cast<std::uint32_t>(model.layout.vocabulary.size()));
  for (const auto& w : model.layout.vocabulary) put_str(out, w);
  put_u32(out, static_cast<std::uint32_t>(model.layout.relations.size()));
  for (const auto& r : model.layout.relations) put_str(out, r);
  out.push_back(static_cast<char>(pack_blocks(model.layout.enabled)));
  put_u32(out, kClasses);
  put_u64(out, model.trees.size());
  for (const auto& tree : model.trees) {
    put_u32(out, static_cast<std::uint32_t>(tree.nodes.size()));
    for (const auto& node : tree.nodes) {
      put_u32(out, node.feature);
      put_f64(out, node.threshold);
      put_u32(out, node.left);
      put_u32(out, node.right);
      put_f64(out, node.value);
    }
  }
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw GbdtError("cannot write model file: " + path);
  os.write(out.data(), static_cast<std::streamsize>(out.size()));
  if (!os) throw GbdtError("short write to " + path);
}

BoostedModel load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw GbdtError("cannot open model file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();
  ModelReader r{data, 0, path};
  {
    r.need(sizeof kModelMagic);
    if (data.compare(0, sizeof kModelMagic, kModelMagic, sizeof kModelMagic) != 0)
      throw GbdtError(path + ": not a model file (bad magic)");
    r.pos += sizeof kModelMagic;
  }
  if (auto version = r.u32(); version != 1)
    throw GbdtError(path + ": unsupported model version " + std::to_string(version));
  BoostedModel model;
  model.params.rounds = r.u32();
  model.params.learning_rate = r.f64();
  model.params.max_depth = r.u32();
  model.params.seed = r.u64();
  for (auto& p : model.priors) p = r.f64();
  auto vocab_n = r.u32();
  model.layout.vocabulary.reserve(vocab_n);
  for (std::uint32_t i = 0; i < vocab_n; ++i) model.layout.vocabulary.push_back(r.str());
  auto rel_n = r.u32();
  model.layout.relations.reserve(rel_n);
  for (std::uint32_t i = 0; i < rel_n; ++i) model.layout.relations.push_back(r.str());
  r.need(1);
  model.layout.enabled = unpack_blocks(static_cast<std::uint8_t>(data[r.pos++]));
  if (auto classes = r.u32(); classes != kClasses)
    throw GbdtError(path + ": model has " + std::to_string(classes) + " classes, expected 3");
  auto tree_count = r.u64();
  if (tree_count != static_cast<std::uint64_t>(model.params.rounds) * kClasses)
    throw GbdtError(path + ": tree count does not match rounds");
  const std::size_t dim = model.layout.dim();
  model.trees.reserve(tree_count);
  for (std::uint64_t t = 0; t < tree_count; ++t) {
    RegressionTree tree;
    auto count = r.u32();
    if (count == 0) throw GbdtError(path + ": empty tree");
    tree.nodes.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i) {
      TreeNode node;
      node.feature = r.u32();
      node.threshold = r.f64();
      node.left = r.u32();
      node.right = r.u32();
      node.value = r.f64();
      if (node.left >= count || node.right >= count)
        throw GbdtError(path + ": node child out of range");
      if (!node.is_leaf() && node.feature >= dim)
        throw GbdtError(path + ": split feature out of range");
      tree.nodes.push_back(node);
    }
    model.trees.push_back(std::move(tree));
  }
  if (r.pos != data.size()) throw GbdtError(path + ": trailing bytes after tree table");
  return model;
}

}  // namespace dmrc
