#include "affect/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>

#include "affect/errors.hpp"
#include "affect/io.hpp"

namespace affect {

namespace {

constexpr const char* kAnchorDate = "2018-01-06";
constexpr int kTopicPoolSize = 150;
constexpr double kTopicRate = 0.9;       // P(message carries a topic hashtag)
constexpr double kCrossTagRate = 0.01;   // P(quoting the other side's seed tag)
constexpr double kSeedTagProb = 0.5;     // P(seed user ends a message with the tag)
constexpr double kDisasterTagProb = 0.6; // P(disaster mention also adds a hashtag)

// Injected plain words / hashtags; tokenizer-safe subset of the bundled
// disaster lexicon (no hyphens).
const std::vector<std::string>& disaster_pool() {
  static const std::vector<std::string> pool = {
      "avalanche", "blizzard",  "bushfire",     "cataclysm",        "cloud",
      "cumulonimbus", "cyclone", "disaster",    "drought",          "duststorm",
      "earthquake", "erosion",  "fire",         "flood",            "forestfire",
      "gale",       "gust",     "hail",         "hailstorm",        "heatwave",
      "hurricane",  "lava",     "lightning",    "magma",            "naturaldisasters",
      "nimbus",     "permafrost", "rainstorm",  "sandstorm",        "seismic",
      "snowstorm",  "storm",    "thunderstorm", "tornado",          "tremor",
      "tsunami",    "twister",  "violentstorm", "volcano",          "whirlpool",
      "whirlwind",  "windstorm"};
  return pool;
}

// Neutral glue words; none carry lexicon valence.
const std::vector<std::string>& filler_pool() {
  static const std::vector<std::string> pool = {
      "the",  "a",    "to",   "of",    "it",   "on",    "we",   "so",
      "and",  "but",  "for",  "with",  "this", "that",  "from", "about",
      "just", "still", "very", "quite"};
  return pool;
}

// Explicit draw algorithms on top of the engine so output depends only on
// the engine's bit stream, not on a standard library's distribution choices.
struct Rng {
  std::mt19937_64 engine;

  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double uniform01() {  // [0, 1)
    return static_cast<double>(engine() >> 11) * 0x1.0p-53;
  }
  bool chance(double p) { return uniform01() < p; }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(engine() % n); }
  // Uniform over [0, n) excluding `skip`.
  std::size_t index_excluding(std::size_t n, std::size_t skip) {
    std::size_t i = index(n - 1);
    return i >= skip ? i + 1 : i;
  }
  double normal(double mean, double sd) {
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double z =
        std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(2.0 * std::numbers::pi * u2);
    return mean + sd * z;
  }
};

// Valence grid: distinct lexicon values ascending, each with its words.
struct ValenceGrid {
  std::vector<double> values;
  std::vector<std::vector<std::string>> words;

  explicit ValenceGrid(const ValenceLexicon& lexicon) {
    std::map<double, std::vector<std::string>> by_value;
    for (const auto& [token, valence] : lexicon.entries) by_value[valence].push_back(token);
    for (auto& [valence, tokens] : by_value) {
      std::sort(tokens.begin(), tokens.end());
      values.push_back(valence);
      words.push_back(std::move(tokens));
    }
  }

  std::size_t nearest(double x) const {
    auto it = std::lower_bound(values.begin(), values.end(), x);
    if (it == values.end()) return values.size() - 1;
    if (it == values.begin()) return 0;
    const auto hi = static_cast<std::size_t>(it - values.begin());
    return (x - values[hi - 1] <= values[hi] - x) ? hi - 1 : hi;
  }

  // Two words whose mean valence approximates `target` on the grid.
  std::pair<std::string, std::string> plant(double target, Rng& rng) const {
    const std::size_t a = nearest(target);
    const double rest = std::clamp(2.0 * target - values[a], values.front(), values.back());
    const std::size_t b = nearest(rest);
    return {words[a][rng.index(words[a].size())], words[b][rng.index(words[b].size())]};
  }
};

// Rank sampler with P(r) proportional to 1/(r+1).
struct ZipfRanks {
  std::vector<double> cumulative;

  explicit ZipfRanks(int n) {
    double total = 0.0;
    for (int r = 0; r < n; ++r) {
      total += 1.0 / static_cast<double>(r + 1);
      cumulative.push_back(total);
    }
  }

  int draw(Rng& rng) const {
    const double u = rng.uniform01() * cumulative.back();
    auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
    if (it == cumulative.end()) --it;
    return static_cast<int>(it - cumulative.begin());
  }
};

std::string padded(char prefix, std::int64_t n, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%c%0*lld", prefix, width, static_cast<long long>(n));
  return buf;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError("synth spec: " + what);
}

void require_probability(double p, const std::string& name) {
  require(p >= 0.0 && p <= 1.0, name + " must be a probability");
}

void require_mean(double m, const std::string& name) {
  require(m >= -1.0 && m <= 1.0, name + " must lie in [-1, +1]");
}

}  // namespace

void SynthSpec::validate() const {
  require(n_users_per_group >= 2, "need at least 2 users per group");
  require(n_weeks >= 1, "need at least 1 week");
  require(msgs_per_user_week >= 1, "need at least 1 message per user-week");
  require_probability(p_intergroup, "p_intergroup");
  require_probability(seed_hashtag_rate, "seed_hashtag_rate");
  require_probability(disaster_rate_believer_hostile, "disaster_rate_believer_hostile");
  require_probability(disaster_rate_believer_other, "disaster_rate_believer_other");
  require_probability(disaster_rate_disbeliever_hostile, "disaster_rate_disbeliever_hostile");
  require_probability(disaster_rate_disbeliever_other, "disaster_rate_disbeliever_other");
  require_probability(retweet_rate, "retweet_rate");
  require_probability(reply_rate, "reply_rate");
  require_mean(mean_in_believer, "mean_in_believer");
  require_mean(mean_out_believer, "mean_out_believer");
  require_mean(mean_in_disbeliever, "mean_in_disbeliever");
  require_mean(mean_out_disbeliever, "mean_out_disbeliever");
  require_mean(mean_out_believer + hostile_out_shift, "hostile-shifted believer out-mean");
  require_mean(mean_out_disbeliever + hostile_out_shift, "hostile-shifted disbeliever out-mean");
  require(sentiment_sd > 0.0, "sentiment_sd must be positive");
  require(n_hostile_weeks >= 0 && n_hostile_weeks <= n_weeks,
          "n_hostile_weeks must fit inside n_weeks");
  require(!believer_seed_tag.empty() && !disbeliever_seed_tag.empty(),
          "seed tags must be non-empty");
  require(believer_seed_tag != disbeliever_seed_tag, "seed tags must differ");
}

namespace {

int expected_sign(double mean_out, double mean_in) {
  if (mean_out < 0.0 && mean_in > 0.0) return 1;
  if (mean_out > 0.0 && mean_in < 0.0) return -1;
  return 0;
}

std::set<int> sample_weeks(int n_weeks, int count, Rng& rng) {
  std::vector<int> weeks(static_cast<std::size_t>(n_weeks));
  for (int w = 0; w < n_weeks; ++w) weeks[static_cast<std::size_t>(w)] = w;
  for (int i = 0; i < count; ++i) {
    const auto j = i + static_cast<int>(rng.index(weeks.size() - static_cast<std::size_t>(i)));
    std::swap(weeks[static_cast<std::size_t>(i)], weeks[static_cast<std::size_t>(j)]);
  }
  return {weeks.begin(), weeks.begin() + count};
}

}  // namespace

SynthResult generate(const SynthSpec& spec, const ValenceLexicon& lexicon) {
  spec.validate();
  if (lexicon.entries.empty()) throw ConfigError("synth needs a non-empty valence lexicon");

  Rng rng(spec.rng_seed);
  const ValenceGrid grid(lexicon);
  const ZipfRanks zipf(kTopicPoolSize);
  const auto& fillers = filler_pool();
  const auto& disasters = disaster_pool();
  const std::int64_t anchor = io::parse_iso_date(kAnchorDate);

  const auto n = static_cast<std::size_t>(spec.n_users_per_group);
  std::vector<std::string> believers(n);
  std::vector<std::string> disbelievers(n);
  for (std::size_t i = 0; i < n; ++i) {
    believers[i] = padded('b', static_cast<std::int64_t>(i), 6);
    disbelievers[i] = padded('d', static_cast<std::int64_t>(i), 6);
  }

  SynthResult result;
  for (const auto& u : believers) result.truth.stance[u] = Stance::Believer;
  for (const auto& u : disbelievers) result.truth.stance[u] = Stance::Disbeliever;

  result.truth.planted_hostile_weeks[Stance::Believer] =
      sample_weeks(spec.n_weeks, spec.n_hostile_weeks, rng);
  result.truth.planted_hostile_weeks[Stance::Disbeliever] =
      sample_weeks(spec.n_weeks, spec.n_hostile_weeks, rng);
  result.truth.expected_sign[Stance::Believer] =
      expected_sign(spec.mean_out_believer, spec.mean_in_believer);
  result.truth.expected_sign[Stance::Disbeliever] =
      expected_sign(spec.mean_out_disbeliever, spec.mean_in_disbeliever);

  const auto seed_count =
      static_cast<std::size_t>(std::llround(spec.seed_hashtag_rate * static_cast<double>(n)));

  std::int64_t counter = 0;
  const double amplitude = grid.values.empty() ? 0.0 : 0.9;

  for (int week = 0; week < spec.n_weeks; ++week) {
    for (Stance group : {Stance::Believer, Stance::Disbeliever}) {
      const bool believer = group == Stance::Believer;
      const auto& own = believer ? believers : disbelievers;
      const auto& other = believer ? disbelievers : believers;
      const bool hostile = result.truth.planted_hostile_weeks[group].count(week) != 0;

      const double mean_in = believer ? spec.mean_in_believer : spec.mean_in_disbeliever;
      const double mean_out = (believer ? spec.mean_out_believer : spec.mean_out_disbeliever) +
                              (hostile ? spec.hostile_out_shift : 0.0);
      const double d_rate =
          believer ? (hostile ? spec.disaster_rate_believer_hostile
                              : spec.disaster_rate_believer_other)
                   : (hostile ? spec.disaster_rate_disbeliever_hostile
                              : spec.disaster_rate_disbeliever_other);
      const std::string& own_tag = believer ? spec.believer_seed_tag : spec.disbeliever_seed_tag;
      const std::string& cross_tag = believer ? spec.disbeliever_seed_tag : spec.believer_seed_tag;
      const char topic_prefix = believer ? 'b' : 'd';

      for (std::size_t u = 0; u < n; ++u) {
        for (int t = 0; t < spec.msgs_per_user_week; ++t) {
          Message m;
          m.message_id = padded('m', counter++, 8);
          m.author_id = own[u];
          m.timestamp = anchor + static_cast<std::int64_t>(week) * kSecondsPerWeek +
                        static_cast<std::int64_t>(rng.index(kSecondsPerWeek));

          std::vector<std::string> tokens;
          auto filler = [&] { return fillers[rng.index(fillers.size())]; };

          if (rng.chance(spec.retweet_rate)) {
            const std::string& target = own[rng.index_excluding(n, u)];
            m.retweet_of_user = target;
            m.mentioned_users.push_back(target);
            tokens = {"rt", "@" + target, filler(), filler()};
            if (rng.chance(kTopicRate)) {
              const std::string tag =
                  std::string("topic") + topic_prefix + std::to_string(zipf.draw(rng));
              tokens.push_back("#" + tag);
              m.hashtags.push_back(tag);
            }
          } else {
            const bool inter = rng.chance(spec.p_intergroup);
            const std::string& target =
                inter ? other[rng.index(n)] : own[rng.index_excluding(n, u)];
            const double planted = std::clamp(
                rng.normal(inter ? mean_out : mean_in, spec.sentiment_sd), -amplitude, amplitude);
            const auto [w1, w2] = grid.plant(planted, rng);

            if (rng.chance(spec.reply_rate)) {
              m.reply_to_user = target;
            } else {
              m.mentioned_users.push_back(target);
            }
            tokens = {filler(), filler(), w1, "@" + target, w2, filler()};

            if (rng.chance(kCrossTagRate)) {  // never terminal
              tokens.push_back("#" + cross_tag);
              m.hashtags.push_back(cross_tag);
              tokens.push_back(filler());
            }
            if (rng.chance(d_rate)) {
              tokens.push_back(disasters[rng.index(disasters.size())]);
              if (rng.chance(kDisasterTagProb)) {
                const std::string& tag = disasters[rng.index(disasters.size())];
                tokens.push_back("#" + tag);
                m.hashtags.push_back(tag);
              }
            }
            if (rng.chance(kTopicRate)) {
              const std::string tag =
                  std::string("topic") + topic_prefix + std::to_string(zipf.draw(rng));
              tokens.push_back("#" + tag);
              m.hashtags.push_back(tag);
            }
            if (u < seed_count && rng.chance(kSeedTagProb)) {
              tokens.push_back("#" + own_tag);  // terminal by construction
              m.hashtags.push_back(own_tag);
            }
          }

          std::string text;
          for (const auto& tok : tokens) {
            if (!text.empty()) text += ' ';
            text += tok;
          }
          m.text = std::move(text);
          result.corpus_lines.push_back(message_to_line(m));
        }
      }
    }
  }

  result.collection_config =
      "collection_start = " + std::string(kAnchorDate) +
      "\ncollection_end = " +
      io::format_iso_date(anchor + static_cast<std::int64_t>(spec.n_weeks) * kSecondsPerWeek) +
      "\n";
  return result;
}

}  // namespace affect
