#include "affect/stance.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <unordered_set>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "affect/errors.hpp"
#include "affect/io.hpp"
#include "affect/sentiment.hpp"

namespace affect {

std::string to_string(Stance s) {
  switch (s) {
    case Stance::Believer: return "believer";
    case Stance::Disbeliever: return "disbeliever";
    case Stance::Unlabeled: return "unlabeled";
  }
  return "unlabeled";
}

std::string to_string(LabelOrigin o) {
  return o == LabelOrigin::Seed ? "seed" : "cotrained";
}

std::optional<Stance> stance_from_string(std::string_view s) {
  if (s == "believer") return Stance::Believer;
  if (s == "disbeliever") return Stance::Disbeliever;
  if (s == "unlabeled") return Stance::Unlabeled;
  return std::nullopt;
}

namespace {

std::vector<std::string> parse_hashtag_list(const std::string& raw) {
  std::vector<std::string> out;
  for (auto& part : io::split(raw, ',')) {
    std::string tag{io::trim(part)};
    while (!tag.empty() && tag.front() == '#') tag.erase(tag.begin());
    for (char& c : tag)
      if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
    if (!tag.empty()) out.push_back(std::move(tag));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

SeedConfig SeedConfig::load(const std::string& path) { return parse(io::read_file(path)); }

SeedConfig SeedConfig::parse(std::string_view text) {
  auto kv = io::KeyValueFile::parse(text);
  SeedConfig cfg;
  cfg.believer_hashtags = parse_hashtag_list(kv.get("believer_hashtags"));
  cfg.disbeliever_hashtags = parse_hashtag_list(kv.get("disbeliever_hashtags"));
  cfg.k = io::parse_int(kv.get_or("k", "5000"));
  cfg.p = io::parse_int(kv.get_or("p", "5000"));
  cfg.theta_i = io::parse_double(kv.get_or("theta_i", "0.1"));
  cfg.theta_u = io::parse_double(kv.get_or("theta_u", "0.0"));
  cfg.theta_t = io::parse_double(kv.get_or("theta_t", "0.7"));
  cfg.validate();
  return cfg;
}

void SeedConfig::validate() const {
  if (believer_hashtags.empty() || disbeliever_hashtags.empty())
    throw ConfigError("seed config: both hashtag sets must be non-empty");
  for (const auto& t : believer_hashtags)
    if (std::binary_search(disbeliever_hashtags.begin(), disbeliever_hashtags.end(), t))
      throw ConfigError("seed config: hashtag sets must be disjoint ('" + t + "')");
  if (k <= 0 || p <= 0) throw ConfigError("seed config: k and p must be positive");
  for (double theta : {theta_i, theta_u, theta_t})
    if (theta < 0.0 || theta > 1.0)
      throw ConfigError("seed config: thresholds must lie in [0, 1]");
}

namespace {

// Seed hashtag of the message's terminal token, if any.
std::optional<Stance> terminal_seed(const Message& m, const SeedConfig& cfg) {
  auto tokens = tokenize(m.text);
  if (tokens.empty()) return std::nullopt;
  const std::string& last = tokens.back();
  if (last.size() < 2 || last.front() != '#') return std::nullopt;
  std::string tag = last.substr(1);
  if (std::binary_search(cfg.believer_hashtags.begin(), cfg.believer_hashtags.end(), tag))
    return Stance::Believer;
  if (std::binary_search(cfg.disbeliever_hashtags.begin(), cfg.disbeliever_hashtags.end(), tag))
    return Stance::Disbeliever;
  return std::nullopt;
}

std::vector<std::string> sorted_authors(std::span<const Message> messages) {
  std::set<std::string> users;
  for (const Message& m : messages) users.insert(m.author_id);
  return {users.begin(), users.end()};
}

}  // namespace

std::vector<StanceAssignment> seed_users(std::span<const Message> messages,
                                         const SeedConfig& config) {
  config.validate();
  std::unordered_map<std::string, std::pair<bool, bool>> hits;  // believer, disbeliever
  for (const Message& m : messages) {
    auto& h = hits[m.author_id];
    if (auto s = terminal_seed(m, config)) {
      if (*s == Stance::Believer)
        h.first = true;
      else
        h.second = true;
    }
  }

  std::vector<StanceAssignment> out;
  for (const auto& user : sorted_authors(messages)) {
    const auto& h = hits[user];
    StanceAssignment a;
    a.user_id = user;
    a.origin = LabelOrigin::Seed;
    if (h.first && !h.second) {
      a.label = Stance::Believer;
      a.confidence = 1.0;
    } else if (h.second && !h.first) {
      a.label = Stance::Disbeliever;
      a.confidence = 1.0;
    } else {
      a.label = Stance::Unlabeled;
      a.confidence = 0.0;
    }
    out.push_back(std::move(a));
  }
  return out;
}

double PropagationGraph::weight(const std::string& u, const std::string& v) const {
  auto iu = index.find(u);
  auto iv = index.find(v);
  if (iu == index.end() || iv == index.end()) return 0.0;
  for (const auto& [n, w] : neighbors[iu->second])
    if (n == iv->second) return w;
  return 0.0;
}

PropagationGraph build_propagation_graph(std::span<const Message> messages) {
  PropagationGraph g;
  g.users = sorted_authors(messages);
  // Retweet targets may not appear as authors; they still join the graph.
  {
    std::set<std::string> all(g.users.begin(), g.users.end());
    for (const Message& m : messages)
      if (m.retweet_of_user) all.insert(*m.retweet_of_user);
    g.users.assign(all.begin(), all.end());
  }
  for (std::size_t i = 0; i < g.users.size(); ++i) g.index[g.users[i]] = static_cast<int>(i);
  const int n = static_cast<int>(g.users.size());

  // Mutual retweet counts on unordered pairs.
  std::map<std::pair<int, int>, double> pair_weight;
  auto ordered = [](int a, int b) { return a < b ? std::pair{a, b} : std::pair{b, a}; };
  for (const Message& m : messages) {
    if (!m.retweet_of_user) continue;
    int a = g.index.at(m.author_id);
    int b = g.index.at(*m.retweet_of_user);
    if (a == b) continue;
    pair_weight[ordered(a, b)] += 1.0;
  }

  // Hashtag frequency vectors, then cosine via an inverted index.
  std::vector<std::unordered_map<std::string, double>> tag_counts(n);
  for (const Message& m : messages) {
    int a = g.index.at(m.author_id);
    for (const auto& tag : m.hashtags) tag_counts[a][tag] += 1.0;
  }
  std::vector<double> norm(n, 0.0);
  std::map<std::string, std::vector<int>> tag_users;
  for (int u = 0; u < n; ++u) {
    for (const auto& [tag, c] : tag_counts[u]) {
      norm[u] += c * c;
      tag_users[tag].push_back(u);
    }
    norm[u] = std::sqrt(norm[u]);
  }
  std::map<std::pair<int, int>, double> dots;
  for (auto& [tag, users] : tag_users) {
    std::sort(users.begin(), users.end());
    for (std::size_t a = 0; a < users.size(); ++a)
      for (std::size_t b = a + 1; b < users.size(); ++b)
        dots[{users[a], users[b]}] += tag_counts[users[a]].at(tag) * tag_counts[users[b]].at(tag);
  }
  for (const auto& [pair, dot] : dots) {
    auto [u, v] = pair;
    pair_weight[{u, v}] += dot / (norm[u] * norm[v]);
  }

  g.neighbors.resize(n);
  for (const auto& [pair, w] : pair_weight) {
    if (w == 0.0) continue;
    auto [u, v] = pair;
    g.neighbors[u].emplace_back(v, w);
    g.neighbors[v].emplace_back(u, w);
  }
  for (auto& adj : g.neighbors) std::sort(adj.begin(), adj.end());
  return g;
}

std::unordered_map<std::string, double> propagate(const PropagationGraph& graph,
                                                  std::span<const StanceAssignment> seeds) {
  const int n = static_cast<int>(graph.users.size());
  Eigen::VectorXd score = Eigen::VectorXd::Zero(n);
  std::vector<char> clamped(n, 0);
  for (const auto& s : seeds) {
    if (s.label == Stance::Unlabeled) continue;
    auto it = graph.index.find(s.user_id);
    if (it == graph.index.end()) continue;
    score[it->second] = s.label == Stance::Believer ? 1.0 : -1.0;
    clamped[it->second] = 1;
  }

  Eigen::SparseMatrix<double> w(n, n);
  {
    std::vector<Eigen::Triplet<double>> triplets;
    for (int u = 0; u < n; ++u)
      for (const auto& [v, wt] : graph.neighbors[u]) triplets.emplace_back(u, v, wt);
    w.setFromTriplets(triplets.begin(), triplets.end());
  }
  Eigen::VectorXd degree = w * Eigen::VectorXd::Ones(n);

  constexpr double kTolerance = 1e-6;
  constexpr int kMaxIterations = 100;
  for (int iter = 0; iter < kMaxIterations; ++iter) {
    Eigen::VectorXd next = w * score;
    double max_delta = 0.0;
    for (int u = 0; u < n; ++u) {
      double value;
      if (clamped[u])
        value = score[u];
      else if (degree[u] > 0.0)
        value = next[u] / degree[u];
      else
        value = 0.0;
      max_delta = std::max(max_delta, std::abs(value - score[u]));
      next[u] = value;
    }
    score = std::move(next);
    if (max_delta < kTolerance) break;
  }

  std::unordered_map<std::string, double> out;
  out.reserve(n);
  for (int u = 0; u < n; ++u) out[graph.users[u]] = score[u];
  return out;
}

namespace {

// Logistic regression on L2-normalized per-user token counts.
// Full-batch gradient descent: deterministic for a fixed input order.
class TokenClassifier {
 public:
  TokenClassifier(const std::vector<std::string>& users,
                  const std::unordered_map<std::string, std::unordered_map<std::string, double>>& counts) {
    std::set<std::string> vocab;
    for (const auto& u : users)
      if (auto it = counts.find(u); it != counts.end())
        for (const auto& [tok, c] : it->second) vocab.insert(tok);
    int col = 0;
    for (const auto& tok : vocab) vocab_[tok] = col++;

    features_.resize(static_cast<int>(users.size()), col);
    std::vector<Eigen::Triplet<double>> triplets;
    for (std::size_t row = 0; row < users.size(); ++row) {
      auto it = counts.find(users[row]);
      if (it == counts.end()) continue;
      double norm = 0.0;
      for (const auto& [tok, c] : it->second) norm += c * c;
      norm = std::sqrt(norm);
      if (norm == 0.0) continue;
      for (const auto& [tok, c] : it->second)
        triplets.emplace_back(static_cast<int>(row), vocab_.at(tok), c / norm);
    }
    features_.setFromTriplets(triplets.begin(), triplets.end());
    row_of_.reserve(users.size());
    for (std::size_t row = 0; row < users.size(); ++row)
      row_of_[users[row]] = static_cast<int>(row);
  }

  void train(const std::vector<std::pair<std::string, Stance>>& labeled) {
    Eigen::VectorXd weights = Eigen::VectorXd::Zero(features_.cols());
    double bias = 0.0;

    std::vector<int> rows;
    Eigen::VectorXd y(labeled.size());
    for (std::size_t i = 0; i < labeled.size(); ++i) {
      rows.push_back(row_of_.at(labeled[i].first));
      y[static_cast<int>(i)] = labeled[i].second == Stance::Believer ? 1.0 : 0.0;
    }

    Eigen::SparseMatrix<double> x(static_cast<int>(rows.size()), features_.cols());
    {
      std::vector<Eigen::Triplet<double>> triplets;
      for (std::size_t i = 0; i < rows.size(); ++i)
        for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(features_, rows[i]); it;
             ++it)
          triplets.emplace_back(static_cast<int>(i), static_cast<int>(it.col()), it.value());
      x.setFromTriplets(triplets.begin(), triplets.end());
    }

    // Logistic loss with unit-norm rows has curvature <= 1/4, so a unit
    // step is stable; the budget is sized to push separable training sets
    // well past the confidence gate.
    constexpr double kLearningRate = 1.0;
    constexpr int kEpochs = 600;
    // Inverse-frequency class weights keep self-training stable when one
    // label temporarily outnumbers the other.
    const double n = static_cast<double>(rows.size());
    const double positives = y.sum();
    Eigen::VectorXd example_weight(y.size());
    for (Eigen::Index i = 0; i < y.size(); ++i)
      example_weight[i] = y[i] > 0.5 ? n / (2.0 * positives) : n / (2.0 * (n - positives));
    const double inv_n = 1.0 / n;
    for (int epoch = 0; epoch < kEpochs; ++epoch) {
      Eigen::VectorXd z = x * weights;
      z.array() += bias;
      Eigen::VectorXd p = 1.0 / (1.0 + (-z.array()).exp());
      Eigen::VectorXd residual = (p - y).cwiseProduct(example_weight);
      weights -= kLearningRate * inv_n * (x.transpose() * residual);
      bias -= kLearningRate * inv_n * residual.sum();
    }
    weights_ = std::move(weights);
    bias_ = bias;
  }

  // (predicted label, confidence = max(p, 1-p))
  std::pair<Stance, double> predict(const std::string& user) const {
    int row = row_of_.at(user);
    double z = bias_;
    for (Eigen::SparseMatrix<double, Eigen::RowMajor>::InnerIterator it(features_, row); it; ++it)
      z += it.value() * weights_[it.col()];
    double p = 1.0 / (1.0 + std::exp(-z));
    return p >= 0.5 ? std::pair{Stance::Believer, p} : std::pair{Stance::Disbeliever, 1.0 - p};
  }

 private:
  std::unordered_map<std::string, int> vocab_;
  std::unordered_map<std::string, int> row_of_;
  Eigen::SparseMatrix<double, Eigen::RowMajor> features_;
  Eigen::VectorXd weights_;
  double bias_ = 0.0;
};

}  // namespace

std::vector<StanceAssignment> cotrain(std::span<const Message> messages,
                                      const SeedConfig& config) {
  config.validate();
  auto seeds = seed_users(messages, config);

  std::size_t believer_seeds = 0;
  std::size_t disbeliever_seeds = 0;
  for (const auto& s : seeds) {
    believer_seeds += s.label == Stance::Believer;
    disbeliever_seeds += s.label == Stance::Disbeliever;
  }
  if (believer_seeds == 0 || disbeliever_seeds == 0)
    throw ConfigError("cotrain: seed labeling produced a single class; need seeds for both");

  const std::vector<std::string> users = sorted_authors(messages);
  std::unordered_map<std::string, std::unordered_map<std::string, double>> token_counts;
  for (const Message& m : messages) {
    auto& counts = token_counts[m.author_id];
    for (const auto& tok : tokenize(m.text)) counts[tok] += 1.0;
  }

  PropagationGraph graph = build_propagation_graph(messages);
  TokenClassifier classifier(users, token_counts);

  std::unordered_map<std::string, StanceAssignment> labeled;
  for (const auto& s : seeds)
    if (s.label != Stance::Unlabeled) labeled[s.user_id] = s;

  for (std::int64_t iteration = 0; iteration < config.p; ++iteration) {
    std::vector<std::pair<std::string, Stance>> train_set;
    for (const auto& u : users)
      if (auto it = labeled.find(u); it != labeled.end())
        train_set.emplace_back(u, it->second.label);
    classifier.train(train_set);

    std::vector<StanceAssignment> clamp(train_set.size());
    for (std::size_t i = 0; i < train_set.size(); ++i) {
      clamp[i].user_id = train_set[i].first;
      clamp[i].label = train_set[i].second;
    }
    auto scores = propagate(graph, clamp);

    // Candidates where both methods clear their gates and agree.
    struct Candidate {
      double confidence;
      std::string user;
      Stance label;
    };
    std::vector<Candidate> believers, disbelievers;
    for (const auto& u : users) {
      if (labeled.count(u)) continue;
      auto [predicted, confidence] = classifier.predict(u);
      if (confidence < config.theta_t) continue;
      double s = scores.count(u) ? scores.at(u) : 0.0;
      if (std::abs(s) < config.theta_i) continue;
      Stance propagated = s > 0 ? Stance::Believer : Stance::Disbeliever;
      if (propagated != predicted) continue;
      (predicted == Stance::Believer ? believers : disbelievers)
          .push_back({confidence, u, predicted});
    }
    auto take = [&](std::vector<Candidate>& cands) {
      std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.confidence != b.confidence) return a.confidence > b.confidence;
        return a.user < b.user;
      });
      if (static_cast<std::int64_t>(cands.size()) > config.k) cands.resize(config.k);
      for (const auto& c : cands) {
        StanceAssignment a;
        a.user_id = c.user;
        a.label = c.label;
        a.confidence = c.confidence;
        a.origin = LabelOrigin::CoTrained;
        labeled[c.user] = std::move(a);
      }
    };
    take(believers);
    take(disbelievers);
    if (believers.empty() && disbelievers.empty()) break;
  }

  std::vector<StanceAssignment> out;
  out.reserve(users.size());
  for (const auto& u : users) {
    if (auto it = labeled.find(u); it != labeled.end()) {
      out.push_back(it->second);
    } else {
      StanceAssignment a;
      a.user_id = u;
      a.label = Stance::Unlabeled;
      a.confidence = 0.0;
      a.origin = LabelOrigin::CoTrained;
      out.push_back(std::move(a));
    }
  }
  return out;
}

std::unordered_map<std::string, Stance> stance_map(std::span<const StanceAssignment> assignments) {
  std::unordered_map<std::string, Stance> out;
  out.reserve(assignments.size());
  for (const auto& a : assignments) out[a.user_id] = a.label;
  return out;
}

}  // namespace affect
