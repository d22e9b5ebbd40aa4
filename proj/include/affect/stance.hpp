#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/corpus.hpp"

namespace affect {

enum class Stance { Believer, Disbeliever, Unlabeled };
enum class LabelOrigin { Seed, CoTrained };

std::string to_string(Stance s);
std::string to_string(LabelOrigin o);
std::optional<Stance> stance_from_string(std::string_view s);

// Seed hashtag sets plus the co-training parameter bundle:
//   k       cap on newly labeled users per label per iteration
//   p       max co-training iterations
//   theta_t classifier confidence gate
//   theta_i propagation magnitude gate
//   theta_u accepted for config compatibility; not consulted
struct SeedConfig {
  std::vector<std::string> believer_hashtags;
  std::vector<std::string> disbeliever_hashtags;
  std::int64_t k = 5000;
  std::int64_t p = 5000;
  double theta_i = 0.1;
  double theta_u = 0.0;
  double theta_t = 0.7;

  static SeedConfig load(const std::string& path);
  static SeedConfig parse(std::string_view text);
  void validate() const;  // throws ConfigError
};

struct StanceAssignment {
  std::string user_id;
  Stance label = Stance::Unlabeled;
  double confidence = 0.0;  // seeds 1, unlabeled 0
  LabelOrigin origin = LabelOrigin::Seed;
};

// A user is seed-labeled when at least one of their messages ends in a
// seed hashtag of one side and none end in a seed hashtag of the other.
// "Ends in" means the last text token after tokenization (URLs removed).
// Output covers every author, sorted by user id.
std::vector<StanceAssignment> seed_users(std::span<const Message> messages,
                                         const SeedConfig& config);

// Undirected user graph combining mutual retweet counts with the cosine
// similarity of hashtag frequency vectors. Zero-weight pairs carry no edge.
struct PropagationGraph {
  std::vector<std::string> users;  // sorted
  std::unordered_map<std::string, int> index;
  std::vector<std::vector<std::pair<int, double>>> neighbors;

  double weight(const std::string& u, const std::string& v) const;
};

PropagationGraph build_propagation_graph(std::span<const Message> messages);

// Clamped Jacobi label propagation: seeds fixed at +1 (Believer) or -1
// (Disbeliever), everyone else repeatedly set to the weighted neighbor
// mean until max |delta| < 1e-6 or 100 iterations. Unreachable users
// stay at 0.
std::unordered_map<std::string, double> propagate(const PropagationGraph& graph,
                                                  std::span<const StanceAssignment> seeds);

// Seed labeling followed by iterative co-training of a logistic text
// classifier with label propagation; users are added only when both
// methods agree above their gates. Returns one assignment per author.
std::vector<StanceAssignment> cotrain(std::span<const Message> messages,
                                      const SeedConfig& config);

std::unordered_map<std::string, Stance> stance_map(std::span<const StanceAssignment> assignments);

}  // namespace affect
