#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "affect/corpus.hpp"

namespace affect {

// Token -> valence in [-1, +1]. Tokens are lowercase and whitespace-free.
struct ValenceLexicon {
  std::unordered_map<std::string, double> entries;

  // Two-column TSV `token<TAB>valence`. Duplicate tokens: last wins, with a
  // warning on `warnings` when provided. Out-of-range valences are fatal.
  static ValenceLexicon load(const std::string& path, std::ostream* warnings = nullptr);
  static ValenceLexicon parse(std::string_view text, std::ostream* warnings = nullptr);
  // The word list shipped with the tool (also used by the corpus generator).
  static ValenceLexicon bundled();
  static std::string_view bundled_text();

  std::optional<double> valence(std::string_view token) const;
  // Every valence negated; used by sign-equivariance tests.
  ValenceLexicon negated() const;
};

// Sentiment of one message toward one mentioned user.
struct AspectScore {
  std::string source;  // author
  std::string target;  // mentioned user
  int week = 0;
  double score = 0.0;  // in [-1, +1]
};

// Lowercased word tokens. '@mention' and '#hashtag' survive as single
// tokens; URLs are removed; other punctuation separates tokens.
std::vector<std::string> tokenize(std::string_view text);

// Mean lexicon valence of tokens within `half_width` of `position`,
// excluding the token at `position` itself. 0 when no window token is in
// the lexicon.
double word_valence(std::span<const std::string> tokens, std::size_t position,
                    const ValenceLexicon& lexicon, int half_width);

// One score per distinct target among mentioned_users + reply target.
// Targets with inline '@handle' occurrences average the per-occurrence
// window valences; metadata-only targets fall back to the whole-message
// mean valence. Scores are clamped to [-1, +1].
std::vector<AspectScore> aspect_scores(const Message& message, const ValenceLexicon& lexicon,
                                       int half_width, int week = 0);

// Scores for a windowed corpus, ordered by week then message order.
// Messages that are retweets are skipped unless include_retweet_mentions.
// Output is independent of the parallelism degree.
std::vector<AspectScore> score_corpus(const std::map<WeekWindow, std::vector<Message>>& windows,
                                      const ValenceLexicon& lexicon, int half_width,
                                      bool include_retweet_mentions = true, int parallelism = 1);

}  // namespace affect
