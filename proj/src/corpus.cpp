#include "affect/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <ostream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "affect/errors.hpp"
#include "affect/io.hpp"

namespace affect {

namespace {

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c += 'a' - 'A';
  return out;
}

// Lowercase, strip leading '#'. Tags that end up empty or contain
// whitespace are dropped rather than failing the whole record.
void normalize_hashtags(std::vector<std::string>& tags) {
  std::vector<std::string> out;
  out.reserve(tags.size());
  for (const auto& raw : tags) {
    std::string_view t = raw;
    while (!t.empty() && t.front() == '#') t.remove_prefix(1);
    if (t.empty()) continue;
    bool has_ws = std::any_of(t.begin(), t.end(), [](unsigned char c) { return std::isspace(c); });
    if (has_ws) continue;
    out.push_back(ascii_lower(t));
  }
  tags = std::move(out);
}

}  // namespace

CollectionConfig CollectionConfig::load(const std::string& path) {
  return parse(io::read_file(path));
}

CollectionConfig CollectionConfig::parse(std::string_view text) {
  auto kv = io::KeyValueFile::parse(text);
  CollectionConfig cfg;
  cfg.collection_start = io::parse_iso_date(kv.get("collection_start"));
  cfg.collection_end = io::parse_iso_date(kv.get("collection_end"));
  if (cfg.collection_end <= cfg.collection_start)
    throw ConfigError("collection_end must be after collection_start");
  for (const auto& entry : kv.all("gap")) {
    auto sep = entry.find("..");
    if (sep == std::string::npos)
      throw ConfigError("gap must be 'START .. END': " + entry);
    auto gs = io::parse_iso_date(io::trim(std::string_view(entry).substr(0, sep)));
    auto ge = io::parse_iso_date(io::trim(std::string_view(entry).substr(sep + 2)));
    if (ge <= gs) throw ConfigError("gap end must be after gap start: " + entry);
    cfg.gaps.emplace_back(gs, ge);
  }
  std::sort(cfg.gaps.begin(), cfg.gaps.end());
  return cfg;
}

std::vector<std::pair<std::int64_t, std::int64_t>> CollectionConfig::week_aligned_gaps() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  const std::int64_t a = anchor();
  for (auto [gs, ge] : gaps) {
    std::int64_t first = (gs - a) / kSecondsPerWeek;
    if (gs < a) first = 0;
    std::int64_t last = (ge - 1 - a) / kSecondsPerWeek;  // window containing the last gap second
    out.emplace_back(a + first * kSecondsPerWeek, a + (last + 1) * kSecondsPerWeek);
  }
  return out;
}

bool CollectionConfig::excluded(std::int64_t ts) const {
  if (ts < collection_start || ts >= collection_end) return true;
  for (auto [gs, ge] : week_aligned_gaps())
    if (ts >= gs && ts < ge) return true;
  return false;
}

bool parse_message_line(std::string_view line, Message& out) {
  nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (j.is_discarded() || !j.is_object()) return false;

  auto get_string = [&](const char* key, std::string& dst) {
    auto it = j.find(key);
    if (it == j.end() || !it->is_string()) return false;
    dst = it->get<std::string>();
    return true;
  };

  Message m;
  if (!get_string("id", m.message_id) || m.message_id.empty()) return false;
  std::string user;
  if (!get_string("user", user) || user.empty()) return false;
  m.author_id = ascii_lower(user);

  auto ts = j.find("ts");
  if (ts == j.end() || !ts->is_number_integer()) return false;
  m.timestamp = ts->get<std::int64_t>();

  if (!get_string("text", m.text)) return false;

  auto mentions = j.find("mentions");
  if (mentions == j.end() || !mentions->is_array()) return false;
  for (const auto& v : *mentions) {
    if (!v.is_string()) return false;
    m.mentioned_users.push_back(ascii_lower(v.get<std::string>()));
  }

  auto optional_user = [&](const char* key, std::optional<std::string>& dst) {
    auto it = j.find(key);
    if (it == j.end()) return false;
    if (it->is_null()) return true;
    if (!it->is_string()) return false;
    auto s = ascii_lower(it->get<std::string>());
    if (!s.empty()) dst = std::move(s);
    return true;
  };
  if (!optional_user("reply_to", m.reply_to_user)) return false;
  if (!optional_user("retweet_of", m.retweet_of_user)) return false;

  auto hashtags = j.find("hashtags");
  if (hashtags == j.end() || !hashtags->is_array()) return false;
  for (const auto& v : *hashtags) {
    if (!v.is_string()) return false;
    m.hashtags.push_back(v.get<std::string>());
  }
  normalize_hashtags(m.hashtags);

  // The reply target is a mention even when the handle is not in the text.
  if (m.reply_to_user) {
    auto& ms = m.mentioned_users;
    if (std::find(ms.begin(), ms.end(), *m.reply_to_user) == ms.end())
      ms.insert(ms.begin(), *m.reply_to_user);
  }

  out = std::move(m);
  return true;
}

std::string message_to_line(const Message& m) {
  nlohmann::ordered_json j;
  j["id"] = m.message_id;
  j["user"] = m.author_id;
  j["ts"] = m.timestamp;
  j["text"] = m.text;
  j["mentions"] = m.mentioned_users;
  if (m.reply_to_user)
    j["reply_to"] = *m.reply_to_user;
  else
    j["reply_to"] = nullptr;
  if (m.retweet_of_user)
    j["retweet_of"] = *m.retweet_of_user;
  else
    j["retweet_of"] = nullptr;
  j["hashtags"] = m.hashtags;
  return j.dump();
}

IngestResult ingest(std::istream& source, const CollectionConfig& config) {
  if (source.fail()) throw IoError("ingest: source stream is not readable");

  IngestResult result;
  std::unordered_set<std::string> seen_ids;
  std::set<std::int64_t> weeks;
  std::unordered_set<std::string> users;
  std::int64_t line_count = 0;

  const auto aligned = config.week_aligned_gaps();
  auto excluded = [&](std::int64_t ts) {
    if (ts < config.collection_start || ts >= config.collection_end) return true;
    for (auto [gs, ge] : aligned)
      if (ts >= gs && ts < ge) return true;
    return false;
  };

  std::string line;
  while (std::getline(source, line)) {
    if (source.bad()) throw IoError("ingest: read failure");
    if (io::trim(line).empty()) continue;
    ++line_count;

    Message m;
    if (!parse_message_line(line, m)) {
      ++result.stats.malformed_lines;
      continue;
    }
    if (excluded(m.timestamp)) {
      ++result.stats.dropped_in_gaps;
      continue;
    }
    if (!seen_ids.insert(m.message_id).second) {
      ++result.stats.dropped_duplicates;
      continue;
    }
    weeks.insert((m.timestamp - config.anchor()) / kSecondsPerWeek);
    users.insert(m.author_id);
    result.messages.push_back(std::move(m));
  }
  if (source.bad()) throw IoError("ingest: read failure");

  if (result.stats.malformed_lines * 2 > line_count)
    throw CorruptCorpusError("ingest: " + std::to_string(result.stats.malformed_lines) + " of " +
                             std::to_string(line_count) + " lines are malformed");

  result.stats.message_count = static_cast<std::int64_t>(result.messages.size());
  result.stats.user_count = static_cast<std::int64_t>(users.size());
  result.stats.week_count = static_cast<std::int64_t>(weeks.size());
  return result;
}

WeekWindow week_window_at(int index, std::int64_t anchor) {
  WeekWindow w;
  w.index = index;
  w.start = anchor + static_cast<std::int64_t>(index) * kSecondsPerWeek;
  w.end = w.start + kSecondsPerWeek;
  return w;
}

std::map<WeekWindow, std::vector<Message>> window(std::span<const Message> messages,
                                                  std::int64_t anchor) {
  std::map<WeekWindow, std::vector<Message>> out;
  for (const Message& m : messages) {
    if (m.timestamp < anchor)
      throw InvariantError("window: message " + m.message_id + " predates the anchor");
    int index = static_cast<int>((m.timestamp - anchor) / kSecondsPerWeek);
    out[week_window_at(index, anchor)].push_back(m);
  }
  return out;
}

void write_messages(std::ostream& out, std::span<const Message> messages) {
  for (const Message& m : messages) out << message_to_line(m) << '\n';
  if (!out) throw IoError("write_messages: write failure");
}

std::string stats_to_text(const CorpusStats& s) {
  std::string out;
  out += "message_count=" + std::to_string(s.message_count) + "\n";
  out += "user_count=" + std::to_string(s.user_count) + "\n";
  out += "week_count=" + std::to_string(s.week_count) + "\n";
  out += "dropped_duplicates=" + std::to_string(s.dropped_duplicates) + "\n";
  out += "dropped_in_gaps=" + std::to_string(s.dropped_in_gaps) + "\n";
  out += "malformed_lines=" + std::to_string(s.malformed_lines) + "\n";
  return out;
}

}  // namespace affect
