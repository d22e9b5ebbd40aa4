#include "affect/sentiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <ostream>

#include "affect/errors.hpp"
#include "affect/io.hpp"
#include "affect/parallel.hpp"

namespace affect {

namespace {

bool is_word_byte(unsigned char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') ||
         c == '_' || c >= 0x80;
}

bool starts_url(std::string_view s, std::size_t i) {
  auto matches = [&](std::string_view prefix) {
    if (s.size() - i < prefix.size()) return false;
    for (std::size_t k = 0; k < prefix.size(); ++k) {
      char c = s[i + k];
      if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
      if (c != prefix[k]) return false;
    }
    return true;
  };
  return matches("http://") || matches("https://") || matches("www.");
}

}  // namespace

std::vector<std::string> tokenize(std::string_view text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  const std::size_t n = text.size();
  while (i < n) {
    unsigned char c = text[i];
    if (starts_url(text, i)) {
      while (i < n && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
      continue;
    }
    bool prefixed = (c == '@' || c == '#');
    if (prefixed && !(i + 1 < n && is_word_byte(text[i + 1]))) {
      ++i;
      continue;
    }
    if (!prefixed && !is_word_byte(c)) {
      ++i;
      continue;
    }
    std::string token;
    if (prefixed) {
      token += static_cast<char>(c);
      ++i;
    }
    while (i < n && is_word_byte(text[i])) {
      char ch = text[i];
      if (ch >= 'A' && ch <= 'Z') ch += 'a' - 'A';
      token += ch;
      ++i;
    }
    tokens.push_back(std::move(token));
  }
  return tokens;
}

ValenceLexicon ValenceLexicon::load(const std::string& path, std::ostream* warnings) {
  return parse(io::read_file(path), warnings);
}

ValenceLexicon ValenceLexicon::parse(std::string_view text, std::ostream* warnings) {
  ValenceLexicon lex;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() : eol + 1;
    ++line_no;

    line = io::trim(line);
    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos)
      throw ConfigError("lexicon line " + std::to_string(line_no) + ": expected token<TAB>valence");
    std::string token(io::trim(line.substr(0, tab)));
    for (char& ch : token)
      if (ch >= 'A' && ch <= 'Z') ch += 'a' - 'A';
    if (token.empty())
      throw ConfigError("lexicon line " + std::to_string(line_no) + ": empty token");
    double v = io::parse_double(line.substr(tab + 1));
    if (v < -1.0 || v > 1.0)
      throw ConfigError("lexicon line " + std::to_string(line_no) + ": valence outside [-1, 1]");
    auto [it, inserted] = lex.entries.emplace(token, v);
    if (!inserted) {
      if (warnings) *warnings << "lexicon: duplicate token '" << token << "', last entry wins\n";
      it->second = v;
    }
  }
  return lex;
}

std::optional<double> ValenceLexicon::valence(std::string_view token) const {
  auto it = entries.find(std::string(token));
  if (it == entries.end()) return std::nullopt;
  return it->second;
}

ValenceLexicon ValenceLexicon::negated() const {
  ValenceLexicon out;
  out.entries.reserve(entries.size());
  for (const auto& [token, v] : entries) out.entries.emplace(token, -v);
  return out;
}

double word_valence(std::span<const std::string> tokens, std::size_t position,
                    const ValenceLexicon& lexicon, int half_width) {
  if (position >= tokens.size())
    throw InvariantError("word_valence: position out of range");
  const std::size_t lo = position >= static_cast<std::size_t>(half_width)
                             ? position - static_cast<std::size_t>(half_width)
                             : 0;
  const std::size_t hi = std::min(tokens.size() - 1, position + static_cast<std::size_t>(half_width));
  double sum = 0.0;
  int count = 0;
  for (std::size_t i = lo; i <= hi; ++i) {
    if (i == position) continue;
    if (auto v = lexicon.valence(tokens[i])) {
      sum += *v;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

namespace {

double clamp_score(double s) { return std::clamp(s, -1.0, 1.0); }

double message_mean_valence(std::span<const std::string> tokens, const ValenceLexicon& lexicon) {
  double sum = 0.0;
  int count = 0;
  for (const auto& t : tokens) {
    if (auto v = lexicon.valence(t)) {
      sum += *v;
      ++count;
    }
  }
  return count == 0 ? 0.0 : sum / count;
}

}  // namespace

std::vector<AspectScore> aspect_scores(const Message& message, const ValenceLexicon& lexicon,
                                       int half_width, int week) {
  std::vector<std::string> targets;
  auto add_target = [&](std::string_view user) {
    std::string t(user);
    for (char& ch : t)
      if (ch >= 'A' && ch <= 'Z') ch += 'a' - 'A';
    if (t.empty()) return;
    if (std::find(targets.begin(), targets.end(), t) == targets.end())
      targets.push_back(std::move(t));
  };
  for (const auto& u : message.mentioned_users) add_target(u);
  if (message.reply_to_user) add_target(*message.reply_to_user);
  if (targets.empty()) return {};

  const std::vector<std::string> tokens = tokenize(message.text);

  std::vector<AspectScore> out;
  out.reserve(targets.size());
  for (const auto& target : targets) {
    const std::string handle = "@" + target;
    double sum = 0.0;
    int occurrences = 0;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      if (tokens[i] == handle) {
        sum += word_valence(tokens, i, lexicon, half_width);
        ++occurrences;
      }
    }
    double score = occurrences > 0 ? sum / occurrences : message_mean_valence(tokens, lexicon);
    out.push_back({message.author_id, target, week, clamp_score(score)});
  }
  return out;
}

std::vector<AspectScore> score_corpus(const std::map<WeekWindow, std::vector<Message>>& windows,
                                      const ValenceLexicon& lexicon, int half_width,
                                      bool include_retweet_mentions, int parallelism) {
  // Flatten to (week, message*) so chunking is stable across degrees.
  std::vector<std::pair<int, const Message*>> flat;
  for (const auto& [week, messages] : windows)
    for (const Message& m : messages) flat.emplace_back(week.index, &m);

  auto chunk_scores = [&](std::size_t begin, std::size_t end) {
    std::vector<AspectScore> scores;
    for (std::size_t i = begin; i < end; ++i) {
      const auto& [week, m] = flat[i];
      if (!include_retweet_mentions && m->retweet_of_user) continue;
      auto s = aspect_scores(*m, lexicon, half_width, week);
      scores.insert(scores.end(), std::make_move_iterator(s.begin()),
                    std::make_move_iterator(s.end()));
    }
    return scores;
  };
  auto chunks = run_chunked<std::vector<AspectScore>>(flat.size(), parallelism, chunk_scores);

  std::vector<AspectScore> out;
  for (auto& c : chunks)
    out.insert(out.end(), std::make_move_iterator(c.begin()), std::make_move_iterator(c.end()));
  return out;
}

namespace {

// Shipped word list: two words per 0.05 valence step across [-0.95, +0.95].
constexpr const char* kBundledLexicon =
    "superb\t0.95\n"
    "stellar\t0.95\n"
    "wonderful\t0.9\n"
    "marvelous\t0.9\n"
    "magnificent\t0.85\n"
    "glorious\t0.85\n"
    "excellent\t0.8\n"
    "outstanding\t0.8\n"
    "fantastic\t0.75\n"
    "terrific\t0.75\n"
    "amazing\t0.7\n"
    "awesome\t0.7\n"
    "brilliant\t0.65\n"
    "inspiring\t0.65\n"
    "great\t0.6\n"
    "lovely\t0.6\n"
    "delightful\t0.55\n"
    "charming\t0.55\n"
    "good\t0.5\n"
    "solid\t0.5\n"
    "admirable\t0.45\n"
    "worthy\t0.45\n"
    "helpful\t0.4\n"
    "kind\t0.4\n"
    "pleasant\t0.35\n"
    "warm\t0.35\n"
    "nice\t0.3\n"
    "smart\t0.3\n"
    "friendly\t0.25\n"
    "gentle\t0.25\n"
    "hopeful\t0.2\n"
    "fair\t0.2\n"
    "decent\t0.15\n"
    "calm\t0.15\n"
    "fine\t0.1\n"
    "mild\t0.1\n"
    "okay\t0.05\n"
    "passable\t0.05\n"
    "neutral\t0\n"
    "plain\t0\n"
    "meh\t-0.05\n"
    "bland\t-0.05\n"
    "dull\t-0.1\n"
    "tired\t-0.1\n"
    "weak\t-0.15\n"
    "shaky\t-0.15\n"
    "poor\t-0.2\n"
    "sloppy\t-0.2\n"
    "annoying\t-0.25\n"
    "messy\t-0.25\n"
    "bad\t-0.3\n"
    "sad\t-0.3\n"
    "foolish\t-0.35\n"
    "petty\t-0.35\n"
    "wrong\t-0.4\n"
    "useless\t-0.4\n"
    "ugly\t-0.45\n"
    "gross\t-0.45\n"
    "nasty\t-0.5\n"
    "dirty\t-0.5\n"
    "stupid\t-0.55\n"
    "hateful\t-0.55\n"
    "awful\t-0.6\n"
    "dreadful\t-0.6\n"
    "dishonest\t-0.65\n"
    "toxic\t-0.65\n"
    "terrible\t-0.7\n"
    "corrupt\t-0.7\n"
    "horrible\t-0.75\n"
    "rotten\t-0.75\n"
    "disgusting\t-0.8\n"
    "vicious\t-0.8\n"
    "pathetic\t-0.85\n"
    "shameful\t-0.85\n"
    "evil\t-0.9\n"
    "cruel\t-0.9\n"
    "vile\t-0.95\n"
    "despicable\t-0.95\n";

}  // namespace

std::string_view ValenceLexicon::bundled_text() { return kBundledLexicon; }

ValenceLexicon ValenceLexicon::bundled() { return parse(kBundledLexicon); }

}  // namespace affect
