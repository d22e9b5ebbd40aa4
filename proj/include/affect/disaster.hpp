#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "affect/corpus.hpp"
#include "affect/polarization.hpp"
#include "affect/stance.hpp"

namespace affect {

// Set of lowercase natural-disaster terms.
struct DisasterLexicon {
  std::set<std::string> terms;

  // One term per line; blank lines and '#' comments ignored.
  static DisasterLexicon load(const std::string& path);
  static DisasterLexicon parse(std::string_view text);
  // The bundled default word list.
  static DisasterLexicon bundled();
  static std::string_view bundled_text();
};

enum class WeekCondition { Hostile, Other };

// Disaster-word prevalence for one group under one hostility condition,
// averaged across the weeks in that condition.
struct PrevalenceCell {
  Stance group = Stance::Unlabeled;
  WeekCondition condition = WeekCondition::Other;
  std::optional<double> hashtag_pct;  // % of top-100 hashtags containing a term
  std::optional<double> tweet_pct;    // % of messages with a term token
  double se_hashtag = 0.0;
  double se_tweet = 0.0;
  int n_weeks = 0;
};

// Percentage of the (up to) 100 most frequent hashtags that contain any
// lexicon term as a substring. Ties in frequency break lexicographically.
// Missing when the messages carry no hashtags.
std::optional<double> hashtag_prevalence(std::span<const Message> messages,
                                         const DisasterLexicon& lexicon);

// Percentage of messages whose token set ('#' stripped from hashtag
// tokens) contains a lexicon term by exact equality. Missing when there
// are no messages.
std::optional<double> tweet_prevalence(std::span<const Message> messages,
                                       const DisasterLexicon& lexicon);

// Hostile-vs-other prevalence cells for every group with a summary.
// Weeks with a defined l are split by the summary's hostile set; a
// condition with no usable weeks is omitted (with a warning when a sink
// is given). With `pooled`, each condition's hashtag ranking is computed
// once over the pooled weeks instead of per week (no SE in that mode).
std::vector<PrevalenceCell> report(const std::map<WeekWindow, std::vector<Message>>& windows,
                                   const std::unordered_map<std::string, Stance>& stances,
                                   std::span<const SeriesSummary> summaries,
                                   const DisasterLexicon& lexicon, bool pooled = false,
                                   std::ostream* warnings = nullptr);

std::string to_string(WeekCondition c);

}  // namespace affect
