// affectgauge: measure affective polarization between two opposed stance
// groups in an interaction corpus. Stages hand off through delimited files
// in the output directory so any stage can be rerun in isolation.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "affect/affect_graph.hpp"
#include "affect/corpus.hpp"
#include "affect/disaster.hpp"
#include "affect/errors.hpp"
#include "affect/io.hpp"
#include "affect/polarization.hpp"
#include "affect/sentiment.hpp"
#include "affect/stance.hpp"
#include "affect/synth.hpp"

namespace fs = std::filesystem;
using namespace affect;

namespace {

// Input problems the user fixes by pointing at the right files; these
// exit with the usage code, unlike runtime failures.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string corpus;
  std::string collection;
  std::string lexicon;
  std::string disaster_lexicon;
  std::string seeds;
  std::string out;
  int half_width = 3;
  std::string weeks_anchor;  // ISO date; overrides the collection start
  int parallelism = 1;
  bool include_retweet_mentions = true;
  bool pooled_hashtags = false;

  int synth_users = 1000;
  int synth_weeks = 20;
  int synth_msgs = 2;
  int synth_hostile_weeks = 3;
  std::uint64_t rng_seed = 1;
  bool symmetric = false;
};

fs::path out_dir(const Options& o) {
  if (o.out.empty())
    throw UsageError("no output directory: pass --out or set AFFECTGAUGE_OUT");
  fs::create_directories(o.out);
  return fs::path(o.out);
}

fs::path stage_input(const Options& o, const std::string& name, const std::string& producer) {
  fs::path p = out_dir(o) / name;
  if (!fs::exists(p))
    throw UsageError("missing input: " + p.string() + " (run the " + producer +
                     " stage first)");
  return p;
}

std::ofstream open_output(const fs::path& p) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw IoError("cannot open for writing: " + p.string());
  return out;
}

std::vector<Message> read_normalized(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::vector<Message> messages;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    Message m;
    if (!parse_message_line(line, m))
      throw CorruptCorpusError(path.string() + ":" + std::to_string(line_no) +
                               ": unreadable record");
    messages.push_back(std::move(m));
  }
  if (in.bad()) throw IoError("read failure: " + path.string());
  return messages;
}

// Rows of a delimited file after verifying its header line.
std::vector<std::vector<std::string>> read_delimited(const fs::path& path,
                                                     const std::string& header) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open file: " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != header)
    throw CorruptCorpusError(path.string() + ": expected header '" + header + "'");
  std::vector<std::vector<std::string>> rows;
  const std::size_t width = io::split(header, ',').size();
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    auto fields = io::split(line, ',');
    if (fields.size() != width)
      throw CorruptCorpusError(path.string() + ":" + std::to_string(line_no) +
                               ": expected " + std::to_string(width) + " fields");
    rows.push_back(std::move(fields));
  }
  if (in.bad()) throw IoError("read failure: " + path.string());
  return rows;
}

std::optional<double> parse_optional(const std::string& field) {
  if (field.empty()) return std::nullopt;
  return io::parse_double(field);
}

CollectionConfig stage_collection(const Options& o) {
  return CollectionConfig::parse(io::read_file(stage_input(o, "collection.cfg", "ingest").string()));
}

std::int64_t resolve_anchor(const Options& o, const CollectionConfig& collection) {
  if (!o.weeks_anchor.empty()) return io::parse_iso_date(o.weeks_anchor);
  return collection.anchor();
}

ValenceLexicon load_valence(const Options& o) {
  if (o.lexicon.empty()) return ValenceLexicon::bundled();
  return ValenceLexicon::load(o.lexicon, &std::cerr);
}

SeedConfig load_seeds(const Options& o) {
  if (!o.seeds.empty()) return SeedConfig::load(o.seeds);
  SeedConfig cfg;
  cfg.believer_hashtags = {"climatechangeisreal", "savetheearth"};
  cfg.disbeliever_hashtags = {"climatehoax", "qanon"};
  return cfg;
}

std::string collection_to_text(const CollectionConfig& c) {
  std::string text = "collection_start = " + io::format_iso_date(c.collection_start) +
                     "\ncollection_end = " + io::format_iso_date(c.collection_end) + "\n";
  for (const auto& [start, end] : c.gaps) {
    text += "gap = " + io::format_iso_date(start) + " .. " + io::format_iso_date(end) + "\n";
  }
  return text;
}

// ---- stages ---------------------------------------------------------------

void run_ingest(const Options& o) {
  fs::path dir = out_dir(o);  // fail before the work, not after
  if (o.corpus.empty()) throw UsageError("ingest needs --corpus");
  if (o.collection.empty()) throw UsageError("ingest needs --collection");
  CollectionConfig collection = CollectionConfig::load(o.collection);

  std::ifstream in(o.corpus, std::ios::binary);
  if (!in) throw UsageError("missing input: " + o.corpus);
  IngestResult result = ingest(in, collection);
  auto corpus_out = open_output(dir / "corpus_normalized.jsonl");
  write_messages(corpus_out, result.messages);
  io::write_file((dir / "corpus_stats.txt").string(), stats_to_text(result.stats));
  io::write_file((dir / "collection.cfg").string(), collection_to_text(collection));
  std::cout << stats_to_text(result.stats);
}

void run_stance(const Options& o) {
  auto messages = read_normalized(stage_input(o, "corpus_normalized.jsonl", "ingest"));
  SeedConfig seeds = load_seeds(o);
  auto assignments = cotrain(messages, seeds);

  auto out = open_output(out_dir(o) / "stances.csv");
  out << "user_id,label,confidence,origin\n";
  std::size_t labeled = 0;
  for (const auto& a : assignments) {
    out << a.user_id << ',' << to_string(a.label) << ',' << io::format_double(a.confidence)
        << ',' << to_string(a.origin) << '\n';
    if (a.label != Stance::Unlabeled) ++labeled;
  }
  if (!out) throw IoError("write failure: stances.csv");
  std::cout << "labeled " << labeled << " of " << assignments.size() << " users\n";
}

void run_sentiment(const Options& o) {
  auto messages = read_normalized(stage_input(o, "corpus_normalized.jsonl", "ingest"));
  CollectionConfig collection = stage_collection(o);
  ValenceLexicon lexicon = load_valence(o);

  auto windows = window(messages, resolve_anchor(o, collection));
  auto scores = score_corpus(windows, lexicon, o.half_width, o.include_retweet_mentions,
                             o.parallelism);

  auto out = open_output(out_dir(o) / "aspect_scores.csv");
  out << "week,source,target,score\n";
  for (const auto& s : scores) {
    out << s.week << ',' << s.source << ',' << s.target << ',' << io::format_double(s.score)
        << '\n';
  }
  if (!out) throw IoError("write failure: aspect_scores.csv");
  std::cout << "scored " << scores.size() << " interactions\n";
}

void run_graph(const Options& o) {
  auto rows = read_delimited(stage_input(o, "aspect_scores.csv", "sentiment"),
                             "week,source,target,score");
  std::map<int, std::vector<AspectScore>> by_week;
  for (const auto& r : rows) {
    AspectScore s;
    s.week = static_cast<int>(io::parse_int(r[0]));
    s.source = r[1];
    s.target = r[2];
    s.score = io::parse_double(r[3]);
    by_week[s.week].push_back(std::move(s));
  }

  auto out = open_output(out_dir(o) / "graphs.csv");
  out << "week,src,dst,w_pos,w_neg,w_net\n";
  for (const auto& [week, scores] : by_week) {
    AffectiveGraph g = build(scores);
    for (const auto& [key, w] : g.edges) {
      out << week << ',' << key.first << ',' << key.second << ','
          << io::format_double(w.pos) << ',' << io::format_double(w.neg) << ','
          << io::format_double(w.net) << '\n';
    }
  }
  if (!out) throw IoError("write failure: graphs.csv");
}

std::map<int, AffectiveGraph> read_graphs(const fs::path& path) {
  auto rows = read_delimited(path, "week,src,dst,w_pos,w_neg,w_net");
  std::map<int, AffectiveGraph> graphs;
  for (const auto& r : rows) {
    const int week = static_cast<int>(io::parse_int(r[0]));
    AffectiveGraph& g = graphs[week];
    g.week = week;
    g.nodes.insert(r[1]);
    g.nodes.insert(r[2]);
    EdgeWeights w;
    w.pos = io::parse_double(r[3]);
    w.neg = io::parse_double(r[4]);
    w.net = io::parse_double(r[5]);
    g.edges[{r[1], r[2]}] = w;
  }
  return graphs;
}

std::unordered_map<std::string, Stance> read_stances(const fs::path& path) {
  auto rows = read_delimited(path, "user_id,label,confidence,origin");
  std::unordered_map<std::string, Stance> stances;
  for (const auto& r : rows) {
    auto label = stance_from_string(r[1]);
    if (!label) throw CorruptCorpusError(path.string() + ": unknown label '" + r[1] + "'");
    stances[r[0]] = *label;
  }
  return stances;
}

void run_polarize(const Options& o) {
  auto graphs = read_graphs(stage_input(o, "graphs.csv", "graph"));
  auto stances = read_stances(stage_input(o, "stances.csv", "stance"));

  std::map<Stance, std::vector<PolarizationRecord>> series;
  std::vector<PolarizationRecord> records;
  for (const auto& [week, graph] : graphs) {
    for (Stance group : {Stance::Believer, Stance::Disbeliever}) {
      PolarizationRecord rec = metric(graph, stances, group);
      series[group].push_back(rec);
      records.push_back(std::move(rec));
    }
  }

  std::map<Stance, SeriesSummary> summaries;
  for (const auto& [group, recs] : series) {
    try {
      summaries[group] = summarize(recs);
    } catch (const InsufficientDataError& e) {
      std::cerr << "warning: " << to_string(group) << ": " << e.what()
                << "; no hostile-week threshold\n";
    }
  }

  fs::path dir = out_dir(o);
  auto out = open_output(dir / "polarization.csv");
  out << "week,group,ei_pos,ei_neg,valence,magnitude,l,hostile_flag\n";
  for (const auto& rec : records) {
    auto it = summaries.find(rec.group);
    const bool hostile = it != summaries.end() && rec.signed_emd &&
                         it->second.hostile_weeks.count(rec.week) != 0;
    out << rec.week << ',' << to_string(rec.group) << ',' << io::format_optional(rec.ei_pos)
        << ',' << io::format_optional(rec.ei_neg) << ',' << io::format_optional(rec.valence)
        << ',' << io::format_optional(rec.magnitude) << ','
        << io::format_optional(rec.signed_emd) << ',' << (hostile ? '1' : '0') << '\n';
  }
  if (!out) throw IoError("write failure: polarization.csv");

  auto summary_out = open_output(dir / "polarization_summary.csv");
  summary_out << "group,mean_l,sd_l,threshold,n_weeks,hostile_weeks\n";
  for (const auto& [group, s] : summaries) {
    std::string weeks;
    for (int w : s.hostile_weeks) {
      if (!weeks.empty()) weeks += ';';
      weeks += std::to_string(w);
    }
    summary_out << to_string(group) << ',' << io::format_double(s.mean_l) << ','
                << io::format_double(s.sd_l) << ',' << io::format_double(s.threshold()) << ','
                << s.defined_weeks.size() << ',' << weeks << '\n';
  }
  if (!summary_out) throw IoError("write failure: polarization_summary.csv");
}

void run_report(const Options& o) {
  auto messages = read_normalized(stage_input(o, "corpus_normalized.jsonl", "ingest"));
  CollectionConfig collection = stage_collection(o);
  auto stances = read_stances(stage_input(o, "stances.csv", "stance"));
  auto rows = read_delimited(stage_input(o, "polarization.csv", "polarize"),
                             "week,group,ei_pos,ei_neg,valence,magnitude,l,hostile_flag");

  std::map<Stance, SeriesSummary> by_group;
  for (const auto& r : rows) {
    auto group = stance_from_string(r[1]);
    if (!group) throw CorruptCorpusError("polarization.csv: unknown group '" + r[1] + "'");
    SeriesSummary& s = by_group[*group];
    s.group = *group;
    const int week = static_cast<int>(io::parse_int(r[0]));
    if (!r[6].empty()) s.defined_weeks.insert(week);
    if (r[7] == "1") s.hostile_weeks.insert(week);
  }
  std::vector<SeriesSummary> summaries;
  for (auto& [group, s] : by_group) summaries.push_back(std::move(s));

  DisasterLexicon lexicon = o.disaster_lexicon.empty() ? DisasterLexicon::bundled()
                                                       : DisasterLexicon::load(o.disaster_lexicon);
  auto windows = window(messages, resolve_anchor(o, collection));
  auto cells = report(windows, stances, summaries, lexicon, o.pooled_hashtags, &std::cerr);

  auto out = open_output(out_dir(o) / "disaster_report.csv");
  out << "group,condition,metric,value,se,n_weeks\n";
  for (const auto& cell : cells) {
    if (cell.hashtag_pct) {
      out << to_string(cell.group) << ',' << to_string(cell.condition) << ",hashtag_pct,"
          << io::format_double(*cell.hashtag_pct) << ',' << io::format_double(cell.se_hashtag)
          << ',' << cell.n_weeks << '\n';
    }
    if (cell.tweet_pct) {
      out << to_string(cell.group) << ',' << to_string(cell.condition) << ",tweet_pct,"
          << io::format_double(*cell.tweet_pct) << ',' << io::format_double(cell.se_tweet)
          << ',' << cell.n_weeks << '\n';
    }
  }
  if (!out) throw IoError("write failure: disaster_report.csv");
}

void run_synth(const Options& o) {
  fs::path dir = out_dir(o);  // fail before the work, not after
  SynthSpec spec;
  spec.n_users_per_group = o.synth_users;
  spec.n_weeks = o.synth_weeks;
  spec.msgs_per_user_week = o.synth_msgs;
  spec.n_hostile_weeks = o.synth_hostile_weeks;
  spec.rng_seed = o.rng_seed;
  if (o.symmetric) {
    // No planted asymmetry: identical in/out sentiment, no hostile shift,
    // equal disaster rates, and no retweets (they are same-group-only and
    // wordless, which would itself be an in/out asymmetry).
    spec.mean_in_believer = spec.mean_out_believer = 0.1;
    spec.mean_in_disbeliever = spec.mean_out_disbeliever = 0.1;
    spec.hostile_out_shift = 0.0;
    spec.n_hostile_weeks = 0;
    spec.disaster_rate_believer_hostile = spec.disaster_rate_believer_other = 0.05;
    spec.disaster_rate_disbeliever_hostile = spec.disaster_rate_disbeliever_other = 0.05;
    spec.retweet_rate = 0.0;
  }

  SynthResult result = generate(spec, load_valence(o));

  auto corpus = open_output(dir / "corpus.jsonl");
  for (const auto& line : result.corpus_lines) corpus << line << '\n';
  if (!corpus) throw IoError("write failure: corpus.jsonl");
  io::write_file((dir / "collection.cfg").string(), result.collection_config);

  auto users = open_output(dir / "ground_truth_users.csv");
  users << "user_id,label\n";
  std::vector<std::string> ids;
  ids.reserve(result.truth.stance.size());
  for (const auto& [user, stance] : result.truth.stance) ids.push_back(user);
  std::sort(ids.begin(), ids.end());
  for (const auto& user : ids) users << user << ',' << to_string(result.truth.stance.at(user)) << '\n';
  if (!users) throw IoError("write failure: ground_truth_users.csv");

  auto weeks = open_output(dir / "ground_truth_weeks.csv");
  weeks << "group,week,hostile_planted\n";
  for (const auto& [group, hostile] : result.truth.planted_hostile_weeks) {
    for (int w = 0; w < spec.n_weeks; ++w) {
      weeks << to_string(group) << ',' << w << ',' << (hostile.count(w) != 0 ? '1' : '0')
            << '\n';
    }
  }
  if (!weeks) throw IoError("write failure: ground_truth_weeks.csv");
  std::cout << "generated " << result.corpus_lines.size() << " messages\n";
}

void run_all(const Options& o) {
  run_ingest(o);
  run_stance(o);
  run_sentiment(o);
  run_graph(o);
  run_polarize(o);
  run_report(o);
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  CLI::App app{"Affective polarization pipeline for two-group interaction corpora"};
  app.require_subcommand(1);

  auto add_out = [&](CLI::App* cmd) {
    cmd->add_option("--out", o.out, "output directory (or AFFECTGAUGE_OUT)")
        ->envname("AFFECTGAUGE_OUT");
  };
  auto add_corpus_inputs = [&](CLI::App* cmd) {
    cmd->add_option("--corpus", o.corpus, "line-delimited message corpus")
        ->check(CLI::ExistingFile);
    cmd->add_option("--collection", o.collection, "collection interval + gaps config")
        ->check(CLI::ExistingFile);
  };
  auto add_sentiment_opts = [&](CLI::App* cmd) {
    cmd->add_option("--lexicon", o.lexicon, "token valence table (default: bundled)")
        ->check(CLI::ExistingFile);
    cmd->add_option("--window-halfwidth", o.half_width, "tokens considered on each side of a mention")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    cmd->add_option("--include-retweet-mentions", o.include_retweet_mentions,
                    "score mentions inside retweets")
        ->capture_default_str();
    cmd->add_option("--parallelism", o.parallelism, "worker threads")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  };
  auto add_anchor = [&](CLI::App* cmd) {
    cmd->add_option("--weeks-anchor", o.weeks_anchor,
                    "ISO date overriding the collection start as week 0 origin");
  };

  CLI::App* c_ingest = app.add_subcommand("ingest", "normalize and window-filter a corpus");
  add_corpus_inputs(c_ingest);
  c_ingest->get_option("--corpus")->required();
  c_ingest->get_option("--collection")->required();
  add_out(c_ingest);

  CLI::App* c_stance = app.add_subcommand("stance", "label users by stance");
  c_stance->add_option("--seeds", o.seeds, "seed hashtags + co-training parameters")
      ->check(CLI::ExistingFile);
  add_out(c_stance);

  CLI::App* c_sent = app.add_subcommand("sentiment", "score mention-level sentiment");
  add_sentiment_opts(c_sent);
  add_anchor(c_sent);
  add_out(c_sent);

  CLI::App* c_graph = app.add_subcommand("graph", "build weekly valenced interaction graphs");
  add_out(c_graph);

  CLI::App* c_pol = app.add_subcommand("polarize", "compute weekly polarization series");
  add_out(c_pol);

  CLI::App* c_rep = app.add_subcommand("report", "disaster-word prevalence by hostility");
  c_rep->add_option("--disaster-lexicon", o.disaster_lexicon,
                    "disaster term list (default: bundled)")
      ->check(CLI::ExistingFile);
  c_rep->add_flag("--pooled-hashtags", o.pooled_hashtags,
                  "rank hashtags once per condition instead of per week");
  add_anchor(c_rep);
  add_out(c_rep);

  CLI::App* c_synth = app.add_subcommand("synth", "generate a planted two-group corpus");
  c_synth->add_option("--users", o.synth_users, "users per group")->check(CLI::PositiveNumber)->capture_default_str();
  c_synth->add_option("--weeks", o.synth_weeks, "number of weeks")->check(CLI::PositiveNumber)->capture_default_str();
  c_synth->add_option("--msgs-per-user-week", o.synth_msgs, "messages per user per week")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  c_synth->add_option("--hostile-weeks", o.synth_hostile_weeks, "planted hostile weeks per group")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  c_synth->add_option("--rng-seed", o.rng_seed, "generator seed")->capture_default_str();
  c_synth->add_flag("--symmetric", o.symmetric, "no planted asymmetry (null corpus)");
  c_synth->add_option("--lexicon", o.lexicon, "token valence table (default: bundled)")
      ->check(CLI::ExistingFile);
  add_out(c_synth);

  CLI::App* c_all = app.add_subcommand("all", "run every stage in order");
  add_corpus_inputs(c_all);
  c_all->get_option("--corpus")->required();
  c_all->get_option("--collection")->required();
  c_all->add_option("--seeds", o.seeds, "seed hashtags + co-training parameters")
      ->check(CLI::ExistingFile);
  c_all->add_option("--disaster-lexicon", o.disaster_lexicon,
                    "disaster term list (default: bundled)")
      ->check(CLI::ExistingFile);
  c_all->add_flag("--pooled-hashtags", o.pooled_hashtags,
                  "rank hashtags once per condition instead of per week");
  add_sentiment_opts(c_all);
  add_anchor(c_all);
  add_out(c_all);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(c_ingest)) run_ingest(o);
    else if (app.got_subcommand(c_stance)) run_stance(o);
    else if (app.got_subcommand(c_sent)) run_sentiment(o);
    else if (app.got_subcommand(c_graph)) run_graph(o);
    else if (app.got_subcommand(c_pol)) run_polarize(o);
    else if (app.got_subcommand(c_rep)) run_report(o);
    else if (app.got_subcommand(c_synth)) run_synth(o);
    else if (app.got_subcommand(c_all)) run_all(o);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
