#include "affect/disaster.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "affect/errors.hpp"
#include "affect/io.hpp"
#include "affect/sentiment.hpp"

namespace affect {

namespace {

constexpr const char* kBundledTerms = R"(avalanche
blizzard
bushfire
cataclysm
cloud
cumulonimbus
cyclone
disaster
drought
duststorm
earthquake
erosion
fire
flood
forestfire
gale
gust
hail
hailstorm
heatwave
high-pressure
hurricane
lava
lightning
low-pressure
magma
naturaldisasters
nimbus
permafrost
rainstorm
sandstorm
seismic
snowstorm
storm
thunderstorm
tornado
tremor
tsunami
twister
violentstorm
volcano
whirlpool
whirlwind
windstorm
)";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

struct RunningMean {
  std::vector<double> values;

  void add(double v) { values.push_back(v); }
  bool empty() const { return values.empty(); }
  int count() const { return static_cast<int>(values.size()); }

  double mean() const {
    double s = 0.0;
    for (double v : values) s += v;
    return s / static_cast<double>(values.size());
  }

  // Standard error of the mean (sample SD / sqrt(n)); 0 below two values.
  double standard_error() const {
    const auto n = values.size();
    if (n < 2) return 0.0;
    const double m = mean();
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return std::sqrt(ss / static_cast<double>(n - 1)) /
           std::sqrt(static_cast<double>(n));
  }
};

}  // namespace

DisasterLexicon DisasterLexicon::parse(std::string_view text) {
  DisasterLexicon lex;
  std::string body(text);
  std::istringstream in(body);
  std::string line;
  while (std::getline(in, line)) {
    std::string t(io::trim(line));
    if (t.empty() || t[0] == '#') continue;
    lex.terms.insert(lower(t));
  }
  return lex;
}

DisasterLexicon DisasterLexicon::load(const std::string& path) {
  DisasterLexicon lex = parse(io::read_file(path));
  if (lex.terms.empty()) {
    throw ConfigError("disaster lexicon has no terms: " + path);
  }
  return lex;
}

DisasterLexicon DisasterLexicon::bundled() { return parse(kBundledTerms); }

std::string_view DisasterLexicon::bundled_text() { return kBundledTerms; }

std::string to_string(WeekCondition c) {
  return c == WeekCondition::Hostile ? "hostile" : "other";
}

std::optional<double> hashtag_prevalence(std::span<const Message> messages,
                                         const DisasterLexicon& lexicon) {
  std::map<std::string, long> counts;
  for (const Message& m : messages) {
    for (const std::string& tag : m.hashtags) ++counts[tag];
  }
  if (counts.empty()) return std::nullopt;

  std::vector<std::pair<std::string, long>> ranked(counts.begin(), counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  const std::size_t top = std::min<std::size_t>(ranked.size(), 100);

  std::size_t matched = 0;
  for (std::size_t i = 0; i < top; ++i) {
    const std::string& tag = ranked[i].first;
    for (const std::string& term : lexicon.terms) {
      if (tag.find(term) != std::string::npos) {
        ++matched;
        break;
      }
    }
  }
  return 100.0 * static_cast<double>(matched) / static_cast<double>(top);
}

std::optional<double> tweet_prevalence(std::span<const Message> messages,
                                       const DisasterLexicon& lexicon) {
  if (messages.empty()) return std::nullopt;

  std::size_t hits = 0;
  for (const Message& m : messages) {
    bool hit = false;
    for (const std::string& token : tokenize(m.text)) {
      std::string_view t = token;
      if (!t.empty() && t.front() == '#') t.remove_prefix(1);
      if (lexicon.terms.count(std::string(t)) != 0) {
        hit = true;
        break;
      }
    }
    if (!hit) {
      for (const std::string& tag : m.hashtags) {
        if (lexicon.terms.count(tag) != 0) {
          hit = true;
          break;
        }
      }
    }
    if (hit) ++hits;
  }
  return 100.0 * static_cast<double>(hits) / static_cast<double>(messages.size());
}

std::vector<PrevalenceCell> report(const std::map<WeekWindow, std::vector<Message>>& windows,
                                   const std::unordered_map<std::string, Stance>& stances,
                                   std::span<const SeriesSummary> summaries,
                                   const DisasterLexicon& lexicon, bool pooled,
                                   std::ostream* warnings) {
  std::vector<PrevalenceCell> cells;

  for (const SeriesSummary& summary : summaries) {
    std::set<int> other;
    for (int w : summary.defined_weeks) {
      if (summary.hostile_weeks.count(w) == 0) other.insert(w);
    }
    const std::pair<WeekCondition, const std::set<int>*> conditions[] = {
        {WeekCondition::Hostile, &summary.hostile_weeks},
        {WeekCondition::Other, &other},
    };

    for (const auto& [condition, weeks] : conditions) {
      // Group-authored messages per contributing week.
      std::vector<std::vector<Message>> per_week;
      for (int w : *weeks) {
        auto it = std::find_if(windows.begin(), windows.end(),
                               [w](const auto& kv) { return kv.first.index == w; });
        if (it == windows.end()) continue;
        std::vector<Message> mine;
        for (const Message& m : it->second) {
          auto st = stances.find(m.author_id);
          if (st != stances.end() && st->second == summary.group) mine.push_back(m);
        }
        if (!mine.empty()) per_week.push_back(std::move(mine));
      }

      if (per_week.empty()) {
        if (warnings != nullptr) {
          *warnings << "warning: no usable weeks for group " << to_string(summary.group)
                    << " in " << to_string(condition) << " condition; cell omitted\n";
        }
        continue;
      }

      PrevalenceCell cell;
      cell.group = summary.group;
      cell.condition = condition;
      cell.n_weeks = static_cast<int>(per_week.size());

      if (pooled) {
        std::vector<Message> all;
        for (auto& v : per_week) {
          all.insert(all.end(), v.begin(), v.end());
        }
        cell.hashtag_pct = hashtag_prevalence(all, lexicon);
        cell.tweet_pct = tweet_prevalence(all, lexicon);
      } else {
        RunningMean hashtag_acc;
        RunningMean tweet_acc;
        for (const auto& mine : per_week) {
          if (auto h = hashtag_prevalence(mine, lexicon)) hashtag_acc.add(*h);
          if (auto t = tweet_prevalence(mine, lexicon)) tweet_acc.add(*t);
        }
        if (!hashtag_acc.empty()) {
          cell.hashtag_pct = hashtag_acc.mean();
          cell.se_hashtag = hashtag_acc.standard_error();
        }
        if (!tweet_acc.empty()) {
          cell.tweet_pct = tweet_acc.mean();
          cell.se_tweet = tweet_acc.standard_error();
        }
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

}  // namespace affect
