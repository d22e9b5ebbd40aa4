#include <doctest.h>

#include <sstream>

#include "affect/errors.hpp"
#include "affect/sentiment.hpp"

using namespace affect;

namespace {

const ValenceLexicon& lex() {
  static ValenceLexicon l = ValenceLexicon::bundled();
  return l;
}

std::vector<std::tuple<std::string, std::string, int, double>> as_tuples(
    const std::vector<AspectScore>& scores) {
  std::vector<std::tuple<std::string, std::string, int, double>> out;
  for (const auto& s : scores) out.emplace_back(s.source, s.target, s.week, s.score);
  return out;
}

}  // namespace

TEST_CASE("tokenizer lowercases, keeps handles and tags, strips urls") {
  CHECK(tokenize("Hello, WORLD!") == std::vector<std::string>{"hello", "world"});
  CHECK(tokenize("see https://Example.com/x?a=1 now") ==
        std::vector<std::string>{"see", "now"});
  CHECK(tokenize("WWW.site.org rocks") == std::vector<std::string>{"rocks"});
  CHECK(tokenize("@Bob_1 likes #Tag99") ==
        std::vector<std::string>{"@bob_1", "likes", "#tag99"});
  // A bare sigil is punctuation, not a token.
  CHECK(tokenize("@ # done") == std::vector<std::string>{"done"});
  CHECK(tokenize("a-b c.d") == std::vector<std::string>{"a", "b", "c", "d"});
  // Non-ASCII bytes stay inside tokens.
  CHECK(tokenize("Caf\xc3\xa9 time") == std::vector<std::string>{"caf\xc3\xa9", "time"});
  CHECK(tokenize("").empty());
  CHECK(tokenize("!!! ...").empty());
}

TEST_CASE("lexicon parses, warns on duplicates and rejects bad rows") {
  std::ostringstream warnings;
  auto l = ValenceLexicon::parse("# comment\n\nGood\t0.5\nbad\t-0.3\ngood\t0.25\n", &warnings);
  CHECK(l.entries.size() == 2);
  CHECK(l.valence("good") == 0.25);  // last entry wins
  CHECK(l.valence("bad") == -0.3);
  CHECK(!l.valence("absent"));
  CHECK(warnings.str().find("duplicate token 'good'") != std::string::npos);

  CHECK_THROWS_AS(ValenceLexicon::parse("toobig\t1.5\n"), ConfigError);
  CHECK_THROWS_AS(ValenceLexicon::parse("no-tab-here\n"), ConfigError);
  CHECK_THROWS_AS(ValenceLexicon::parse("word\tnot-a-number\n"), ConfigError);
  CHECK_THROWS_AS(ValenceLexicon::parse("\t0.5\n"), ConfigError);
}

TEST_CASE("bundled lexicon matches the shipped data file") {
  auto from_file = ValenceLexicon::load(std::string(AFFECT_DATA_DIR) + "/valence_lexicon.tsv");
  CHECK(from_file.entries == lex().entries);
  CHECK(lex().entries.size() == 78);
  CHECK(lex().valence("superb") == 0.95);
  CHECK(lex().valence("despicable") == -0.95);
  CHECK(lex().valence("neutral") == 0.0);
}

TEST_CASE("negation flips every entry") {
  auto neg = lex().negated();
  REQUIRE(neg.entries.size() == lex().entries.size());
  for (const auto& [token, v] : lex().entries) CHECK(neg.valence(token) == -v);
}

TEST_CASE("window valence averages neighbours and skips the center") {
  std::vector<std::string> tokens = {"good", "plain", "bad"};
  CHECK(word_valence(tokens, 1, lex(), 1) == doctest::Approx(0.1));   // (0.5 - 0.3) / 2
  CHECK(word_valence(tokens, 1, lex(), 0) == 0.0);                    // empty window
  CHECK(word_valence(tokens, 0, lex(), 1) == doctest::Approx(0.0));   // only "plain"
  CHECK(word_valence(tokens, 0, lex(), 2) == doctest::Approx(-0.15));  // plain, bad
  CHECK_THROWS_AS((void)word_valence(tokens, 3, lex(), 1), InvariantError);

  std::vector<std::string> unknowns = {"zzz", "@bob", "yyy"};
  CHECK(word_valence(unknowns, 1, lex(), 2) == 0.0);
}

TEST_CASE("inline mentions are scored by their local window") {
  Message m;
  m.author_id = "alice";
  m.text = "@bob is great";
  m.mentioned_users = {"bob"};
  auto scores = aspect_scores(m, lex(), 3, 7);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].source == "alice");
  CHECK(scores[0].target == "bob");
  CHECK(scores[0].week == 7);
  CHECK(scores[0].score == doctest::Approx(0.6));
}

TEST_CASE("repeated inline mentions average their windows") {
  Message m;
  m.author_id = "alice";
  m.text = "@bob great @bob bad";
  m.mentioned_users = {"bob"};
  auto scores = aspect_scores(m, lex(), 1, 0);
  REQUIRE(scores.size() == 1);
  // First occurrence sees {great} = 0.6; second sees {great, bad} = 0.15.
  CHECK(scores[0].score == doctest::Approx(0.375));
}

TEST_CASE("metadata-only mentions fall back to the message mean") {
  Message m;
  m.author_id = "alice";
  m.text = "great stuff but a sloppy finish";
  m.mentioned_users = {"carol"};
  auto scores = aspect_scores(m, lex(), 3, 0);
  REQUIRE(scores.size() == 1);
  // Lexicon hits: great 0.6, sloppy -0.2.
  CHECK(scores[0].score == doctest::Approx(0.2));
}

TEST_CASE("messages without targets or lexicon hits behave predictably") {
  Message no_targets;
  no_targets.author_id = "alice";
  no_targets.text = "great day";
  CHECK(aspect_scores(no_targets, lex(), 3).empty());

  Message no_hits;
  no_hits.author_id = "alice";
  no_hits.text = "zzz qqq";
  no_hits.mentioned_users = {"bob"};
  auto scores = aspect_scores(no_hits, lex(), 3);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].score == 0.0);
}

TEST_CASE("each distinct target gets exactly one score") {
  Message m;
  m.author_id = "alice";
  m.text = "@bob great zzz @carol awful";
  m.mentioned_users = {"bob", "carol", "bob"};
  m.reply_to_user = "dave";
  auto scores = aspect_scores(m, lex(), 1, 0);
  REQUIRE(scores.size() == 3);
  CHECK(scores[0].target == "bob");
  CHECK(scores[1].target == "carol");
  CHECK(scores[2].target == "dave");
  CHECK(scores[0].score == doctest::Approx(0.6));
  CHECK(scores[1].score == doctest::Approx(-0.6));
  // dave never appears inline: message mean of {great, awful} = 0.
  CHECK(scores[2].score == doctest::Approx(0.0));
}

TEST_CASE("scores stay within the unit interval") {
  Message m;
  m.author_id = "a";
  m.text = "@b superb stellar wonderful marvelous magnificent";
  m.mentioned_users = {"b"};
  auto scores = aspect_scores(m, lex(), 10, 0);
  REQUIRE(scores.size() == 1);
  CHECK(scores[0].score <= 1.0);
  CHECK(scores[0].score >= -1.0);
}

TEST_CASE("corpus scoring respects the retweet switch and parallelism") {
  std::map<WeekWindow, std::vector<Message>> windows;
  for (int w = 0; w < 3; ++w) {
    WeekWindow win{w, w * kSecondsPerWeek, (w + 1) * kSecondsPerWeek};
    std::vector<Message> msgs;
    for (int i = 0; i < 5; ++i) {
      Message m;
      m.message_id = "m" + std::to_string(w * 5 + i);
      m.author_id = "u" + std::to_string(i);
      m.text = i % 2 == 0 ? "@peer great work" : "@peer awful take";
      m.mentioned_users = {"peer"};
      if (i == 4) {
        m.retweet_of_user = "peer";
        m.text = "rt @peer great work";
      }
      msgs.push_back(std::move(m));
    }
    windows.emplace(win, std::move(msgs));
  }

  auto with_rt = score_corpus(windows, lex(), 3, /*include_retweet_mentions=*/true);
  auto without_rt = score_corpus(windows, lex(), 3, /*include_retweet_mentions=*/false);
  CHECK(with_rt.size() == 15);
  CHECK(without_rt.size() == 12);

  auto parallel = score_corpus(windows, lex(), 3, true, 4);
  CHECK(as_tuples(parallel) == as_tuples(with_rt));

  // Ordered by week, then message order within the week.
  for (std::size_t i = 1; i < with_rt.size(); ++i)
    CHECK(with_rt[i - 1].week <= with_rt[i].week);
}
