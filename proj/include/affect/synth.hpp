#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/sentiment.hpp"
#include "affect/stance.hpp"

namespace affect {

// Parameters for a planted two-group corpus. Per-interaction sentiment is
// drawn from a normal with the (group, in/out) mean below; a group's
// "hostile" weeks shift its out-group mean by hostile_out_shift and use
// the hostile disaster-word rate.
struct SynthSpec {
  int n_users_per_group = 1000;
  int n_weeks = 20;
  int msgs_per_user_week = 2;
  double p_intergroup = 0.5;  // probability a message targets the other group

  double mean_in_believer = 0.30;
  double mean_out_believer = -0.25;
  double mean_in_disbeliever = 0.25;
  double mean_out_disbeliever = -0.40;
  double sentiment_sd = 0.25;
  double hostile_out_shift = -0.35;

  int n_hostile_weeks = 3;  // per group

  double seed_hashtag_rate = 0.05;  // fraction of users that use seed tags
  std::string believer_seed_tag = "climatechangeisreal";
  std::string disbeliever_seed_tag = "climatehoax";
  double disaster_rate_believer_hostile = 0.04;
  double disaster_rate_believer_other = 0.12;
  double disaster_rate_disbeliever_hostile = 0.30;
  double disaster_rate_disbeliever_other = 0.04;

  double retweet_rate = 0.30;  // same-group retweets (builds the user graph)
  double reply_rate = 0.25;    // deliver the target via reply metadata

  std::uint64_t rng_seed = 1;

  // Throws ConfigError when sizes, probabilities or means are unusable.
  void validate() const;
};

// What the generator planted, for checking pipeline output against.
struct GroundTruth {
  std::unordered_map<std::string, Stance> stance;       // every generated user
  std::map<Stance, std::set<int>> planted_hostile_weeks;
  // Expected sign of the polarization series implied by the means:
  // +1 out-group-hostile, -1 in-group-hostile, 0 no planted asymmetry.
  std::map<Stance, int> expected_sign;
};

struct SynthResult {
  std::vector<std::string> corpus_lines;  // one JSON message per line
  std::string collection_config;          // matching collection window
  GroundTruth truth;
};

// Deterministic for a fixed spec (single-threaded, own RNG). Messages
// carry their planted sentiment as lexicon words beside the mention so
// the real tokenizer/window path recovers it.
SynthResult generate(const SynthSpec& spec, const ValenceLexicon& lexicon);

}  // namespace affect
