#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace affect {

inline constexpr std::int64_t kSecondsPerWeek = 604800;

// One interaction record after normalization: user ids lowercased,
// hashtags lowercased with '#' stripped, reply target folded into mentions.
struct Message {
  std::string message_id;
  std::string author_id;
  std::int64_t timestamp = 0;  // UTC epoch seconds
  std::string text;
  std::vector<std::string> mentioned_users;  // ordered; includes reply target
  std::optional<std::string> reply_to_user;
  std::optional<std::string> retweet_of_user;
  std::vector<std::string> hashtags;

  bool operator==(const Message&) const = default;
};

struct WeekWindow {
  int index = 0;
  std::int64_t start = 0;
  std::int64_t end = 0;  // exclusive; end - start == kSecondsPerWeek

  auto operator<=>(const WeekWindow& other) const { return index <=> other.index; }
  bool operator==(const WeekWindow& other) const { return index == other.index; }
};

struct CorpusStats {
  std::int64_t message_count = 0;
  std::int64_t user_count = 0;
  std::int64_t week_count = 0;
  std::int64_t dropped_duplicates = 0;
  std::int64_t dropped_in_gaps = 0;
  std::int64_t malformed_lines = 0;
};

// Collection interval [start, end) in epoch seconds plus excluded gaps.
// The week anchor is always collection_start (midnight UTC of the first day).
struct CollectionConfig {
  std::int64_t collection_start = 0;
  std::int64_t collection_end = 0;
  std::vector<std::pair<std::int64_t, std::int64_t>> gaps;  // [start, end)

  static CollectionConfig load(const std::string& path);
  static CollectionConfig parse(std::string_view text);

  std::int64_t anchor() const { return collection_start; }
  // Gaps snapped outward to the week grid: a window intersecting a gap is
  // excluded in full, so no partially observed week reaches the metrics.
  std::vector<std::pair<std::int64_t, std::int64_t>> week_aligned_gaps() const;
  bool excluded(std::int64_t ts) const;
};

struct IngestResult {
  std::vector<Message> messages;
  CorpusStats stats;
};

// Reads line-delimited records, drops malformed lines (counted), drops
// records in excluded gaps or outside the collection interval (counted),
// and keeps the first record per message_id (later ones counted as
// duplicates). Throws IoError on a failing stream and CorruptCorpusError
// when more than half of the lines are malformed.
IngestResult ingest(std::istream& source, const CollectionConfig& config);

WeekWindow week_window_at(int index, std::int64_t anchor);

// Buckets messages into 7-day windows by floor((ts - anchor) / week).
// Throws InvariantError if any message predates the anchor. Windows with
// no messages do not appear.
std::map<WeekWindow, std::vector<Message>> window(std::span<const Message> messages,
                                                  std::int64_t anchor);

// Normalized record in the ingest line format.
std::string message_to_line(const Message& m);
// Returns false on malformed input.
bool parse_message_line(std::string_view line, Message& out);

void write_messages(std::ostream& out, std::span<const Message> messages);
std::string stats_to_text(const CorpusStats& stats);

}  // namespace affect
