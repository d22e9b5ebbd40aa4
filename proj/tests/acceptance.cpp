// Acceptance gate: nine end-to-end checks against the library and the CLI.
// Each prints one PASS/FAIL line; the process exits non-zero if any fail.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>
#include <vector>

#include "affect/affect_graph.hpp"
#include "affect/corpus.hpp"
#include "affect/disaster.hpp"
#include "affect/errors.hpp"
#include "affect/io.hpp"
#include "affect/polarization.hpp"
#include "affect/sentiment.hpp"
#include "affect/stance.hpp"
#include "affect/synth.hpp"
#include "transport_oracle.hpp"

namespace fs = std::filesystem;
using namespace affect;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Gate {
  int index = 0;
  int passed = 0;

  void report(const std::string& name, bool pass, const std::string& details) {
    ++index;
    if (pass) ++passed;
    std::cout << "[" << index << "/9] " << name << ": " << (pass ? "PASS" : "FAIL") << " ("
              << details << ")\n"
              << std::flush;
  }
};

// ---- 1: exact transport distance against an independent solver ------------

void check_transport_oracle(Gate& gate) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> value(-5.0, 5.0);
  std::uniform_int_distribution<int> size(1, 10);

  const auto start = Clock::now();
  double max_err = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> a(size(rng)), b(size(rng));
    for (auto& v : a) v = value(rng);
    for (auto& v : b) v = value(rng);
    max_err = std::max(max_err, std::abs(emd_1d(a, b) - oracle::emd_reference(a, b)));
  }
  const double elapsed = seconds_since(start);
  gate.report("transport distance vs min-cost-flow oracle",
              max_err <= 1e-9 && elapsed < 10.0,
              "1000 pairs, max err " + fmt(max_err) + ", " + fmt(elapsed) + "s");
}

// ---- 2: hand-checkable index fixtures -------------------------------------

void check_ei_fixtures(Gate& gate) {
  auto weights = [](std::vector<double> external, std::vector<double> internal) {
    GroupedWeights w;
    w.group = Stance::Believer;
    w.view = GraphView::Pos;
    w.external = std::move(external);
    w.internal = std::move(internal);
    return w;
  };
  bool ok = true;
  std::string detail = "E3/I1=0.5, E=I=0, I0=+1, empty=missing";
  auto expect = [&](std::optional<double> got, double want) {
    if (!got || std::abs(*got - want) > 1e-12) ok = false;
  };
  expect(ei_index(weights({3.0}, {1.0})), 0.5);
  expect(ei_index(weights({2.0}, {2.0})), 0.0);
  expect(ei_index(weights({1.0, 0.5}, {})), 1.0);
  if (ei_index(weights({0.0}, {0.0}))) ok = false;
  if (ei_index(weights({}, {}))) ok = false;
  gate.report("external-internal index fixtures", ok, detail);
}

// ---- 3: structural identities on random weekly graphs ---------------------

void check_metric_invariants(Gate& gate) {
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> score_dist(-1.0, 1.0);
  std::uniform_int_distribution<int> n_edges(10, 40);
  std::uniform_int_distribution<int> user_pick(0, 13);

  std::vector<std::string> users;
  std::unordered_map<std::string, Stance> stances;
  for (int i = 0; i < 6; ++i) {
    users.push_back("b" + std::to_string(i));
    stances[users.back()] = Stance::Believer;
  }
  for (int i = 0; i < 6; ++i) {
    users.push_back("d" + std::to_string(i));
    stances[users.back()] = Stance::Disbeliever;
  }
  users.push_back("u0");
  users.push_back("u1");

  const double scale = 2.5;
  int checked = 0;
  int failures = 0;
  std::string first_failure;
  auto fail = [&](const std::string& why) {
    ++failures;
    if (first_failure.empty()) first_failure = why;
  };
  auto close = [](double a, double b, double tol) { return std::abs(a - b) <= tol; };

  for (int trial = 0; trial < 500; ++trial) {
    std::vector<AspectScore> scores;
    const int m = n_edges(rng);
    for (int e = 0; e < m; ++e) {
      const std::string& src = users[static_cast<std::size_t>(user_pick(rng))];
      const std::string& dst = users[static_cast<std::size_t>(user_pick(rng))];
      if (src == dst) continue;
      scores.push_back({src, dst, trial, score_dist(rng)});
    }
    if (scores.empty()) continue;

    std::vector<AspectScore> scaled = scores;
    for (auto& s : scaled) s.score *= scale;
    std::vector<AspectScore> negated = scores;
    for (auto& s : negated) s.score = -s.score;

    const AffectiveGraph g = build(scores);
    const AffectiveGraph gs = build(scaled);
    const AffectiveGraph gn = build(negated);

    for (Stance group : {Stance::Believer, Stance::Disbeliever}) {
      const PolarizationRecord r = metric(g, stances, group);
      const PolarizationRecord rs = metric(gs, stances, group);
      const PolarizationRecord rn = metric(gn, stances, group);
      ++checked;

      for (const auto& ei : {r.ei_pos, r.ei_neg}) {
        if (ei && (*ei < -1.0 - 1e-12 || *ei > 1.0 + 1e-12)) fail("index outside [-1, 1]");
      }
      if (r.valence) {
        if (!r.ei_pos || !r.ei_neg || !close(*r.valence, *r.ei_neg - *r.ei_pos, 1e-12))
          fail("valence != ei_neg - ei_pos");
        if (*r.valence < -2.0 - 1e-12 || *r.valence > 2.0 + 1e-12)
          fail("valence outside [-2, 2]");
      }
      if (r.signed_emd) {
        if (!r.magnitude || !close(std::abs(*r.signed_emd), *r.magnitude, 1e-12))
          fail("|l| != magnitude");
        if (*r.magnitude > 0.0 && *r.valence > 0.0 && *r.signed_emd <= 0.0) fail("sign drop");
        if (*r.magnitude > 0.0 && *r.valence < 0.0 && *r.signed_emd >= 0.0) fail("sign drop");
        if (*r.magnitude == 0.0 && *r.signed_emd != 0.0) fail("zero magnitude, nonzero l");
      }

      // Scaling by c > 0 keeps both indices, scales the distance by c.
      if (r.ei_pos.has_value() != rs.ei_pos.has_value()) fail("scaling changed definedness");
      if (r.ei_pos && rs.ei_pos && !close(*r.ei_pos, *rs.ei_pos, 1e-9)) fail("scaling moved ei_pos");
      if (r.ei_neg && rs.ei_neg && !close(*r.ei_neg, *rs.ei_neg, 1e-9)) fail("scaling moved ei_neg");
      if (r.magnitude.has_value() != rs.magnitude.has_value()) fail("scaling changed magnitude definedness");
      if (r.magnitude && rs.magnitude && !close(*rs.magnitude, scale * *r.magnitude, 1e-9))
        fail("magnitude not scaled by c");

      // Negating every score swaps the two valence views and flips l.
      if (r.ei_pos.has_value() != rn.ei_neg.has_value() ||
          r.ei_neg.has_value() != rn.ei_pos.has_value())
        fail("negation changed definedness");
      if (r.ei_pos && rn.ei_neg && !close(*r.ei_pos, *rn.ei_neg, 1e-12)) fail("negation view swap");
      if (r.ei_neg && rn.ei_pos && !close(*r.ei_neg, *rn.ei_pos, 1e-12)) fail("negation view swap");
      if (r.signed_emd && rn.signed_emd && !close(*r.signed_emd, -*rn.signed_emd, 1e-12))
        fail("negation did not flip l");
    }
  }
  gate.report("weekly metric invariants on random graphs", failures == 0,
              std::to_string(checked) + " group-weeks checked" +
                  (failures == 0 ? "" : ", first failure: " + first_failure));
}

// ---- shared full-pipeline runs on generated corpora -----------------------

struct PipelineRun {
  GroundTruth truth;
  std::map<Stance, std::vector<PolarizationRecord>> series;
  std::map<Stance, SeriesSummary> summaries;
  std::vector<PrevalenceCell> cells;
  double accuracy = 0.0;   // labeled users matching the planted stance
  double coverage = 0.0;   // labeled share of all users
  double seconds = 0.0;
  bool summarized = true;
};

PipelineRun run_pipeline(const SynthSpec& spec, const ValenceLexicon& lexicon) {
  const auto start = Clock::now();
  PipelineRun run;

  SynthResult synth = generate(spec, lexicon);
  run.truth = synth.truth;

  std::vector<Message> messages;
  messages.reserve(synth.corpus_lines.size());
  for (const auto& line : synth.corpus_lines) {
    Message m;
    if (!parse_message_line(line, m)) throw InvariantError("generated line unreadable");
    messages.push_back(std::move(m));
  }

  SeedConfig seeds;
  seeds.believer_hashtags = {spec.believer_seed_tag};
  seeds.disbeliever_hashtags = {spec.disbeliever_seed_tag};
  auto assignments = cotrain(messages, seeds);

  long labeled = 0, correct = 0;
  for (const auto& a : assignments) {
    if (a.label == Stance::Unlabeled) continue;
    ++labeled;
    if (synth.truth.stance.at(a.user_id) == a.label) ++correct;
  }
  run.accuracy = labeled == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(labeled);
  run.coverage = assignments.empty()
                     ? 0.0
                     : static_cast<double>(labeled) / static_cast<double>(assignments.size());

  auto stances = stance_map(assignments);
  const auto collection = CollectionConfig::parse(synth.collection_config);
  auto windows = window(messages, collection.anchor());
  auto scores = score_corpus(windows, lexicon, 3, true, 4);

  std::map<int, std::vector<AspectScore>> by_week;
  for (auto& s : scores) by_week[s.week].push_back(std::move(s));
  for (const auto& [week, week_scores] : by_week) {
    const AffectiveGraph g = build(week_scores);
    for (Stance group : {Stance::Believer, Stance::Disbeliever})
      run.series[group].push_back(metric(g, stances, group));
  }

  std::vector<SeriesSummary> summary_list;
  for (const auto& [group, series] : run.series) {
    try {
      run.summaries[group] = summarize(series);
      summary_list.push_back(run.summaries[group]);
    } catch (const InsufficientDataError&) {
      run.summarized = false;
    }
  }
  run.cells = report(windows, stances, summary_list, DisasterLexicon::bundled());

  run.seconds = seconds_since(start);
  return run;
}

const std::vector<PipelineRun>& shared_runs() {
  static std::vector<PipelineRun> runs = [] {
    std::vector<PipelineRun> out;
    const auto lexicon = ValenceLexicon::bundled();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SynthSpec spec;  // default planted corpus
      spec.rng_seed = seed;
      std::cerr << "  [acceptance] pipeline run " << seed << "/10...\n";
      out.push_back(run_pipeline(spec, lexicon));
    }
    return out;
  }();
  return runs;
}

// ---- 4: the planted sign dominates the measured series --------------------

void check_sign_recovery(Gate& gate) {
  long defined = 0, matched = 0;
  double max_seconds = 0.0;
  bool all_summarized = true;
  for (const auto& run : shared_runs()) {
    max_seconds = std::max(max_seconds, run.seconds);
    all_summarized = all_summarized && run.summarized;
    for (const auto& [group, series] : run.series) {
      const int expected = run.truth.expected_sign.at(group);
      for (const auto& r : series) {
        if (!r.signed_emd) continue;
        ++defined;
        const double l = *r.signed_emd;
        if ((expected > 0 && l > 0.0) || (expected < 0 && l < 0.0) ||
            (expected == 0 && l == 0.0))
          ++matched;
      }
    }
  }
  const double match_rate = defined == 0 ? 0.0 : static_cast<double>(matched) / defined;

  // A corpus with no planted asymmetry must stay near zero.
  SynthSpec null_spec;
  null_spec.rng_seed = 101;
  null_spec.mean_in_believer = null_spec.mean_out_believer = 0.1;
  null_spec.mean_in_disbeliever = null_spec.mean_out_disbeliever = 0.1;
  null_spec.hostile_out_shift = 0.0;
  null_spec.n_hostile_weeks = 0;
  null_spec.disaster_rate_believer_hostile = null_spec.disaster_rate_believer_other = 0.05;
  null_spec.disaster_rate_disbeliever_hostile = null_spec.disaster_rate_disbeliever_other = 0.05;
  // Retweets are same-group by construction and carry no sentiment words,
  // so they would be a real in/out asymmetry; a null corpus has none.
  null_spec.retweet_rate = 0.0;
  std::cerr << "  [acceptance] null-corpus pipeline run...\n";
  const PipelineRun null_run = run_pipeline(null_spec, ValenceLexicon::bundled());
  double null_sum = 0.0;
  long null_count = 0;
  for (const auto& [group, series] : null_run.series) {
    for (const auto& r : series) {
      if (!r.signed_emd) continue;
      null_sum += std::abs(*r.signed_emd);
      ++null_count;
    }
  }
  const double null_mean = null_count == 0 ? 1.0 : null_sum / static_cast<double>(null_count);

  const bool pass =
      all_summarized && match_rate >= 0.95 && null_mean < 0.05 && max_seconds < 60.0;
  gate.report("planted polarization sign recovery", pass,
              "sign match " + fmt(100.0 * match_rate) + "% of " + std::to_string(defined) +
                  " group-weeks, null-corpus mean |l| " + fmt(null_mean) + ", slowest seed " +
                  fmt(max_seconds) + "s");
}

// ---- 5: stance labeling accuracy ------------------------------------------

void check_stance_accuracy(Gate& gate) {
  double min_accuracy = 1.0, min_coverage = 1.0;
  for (const auto& run : shared_runs()) {
    min_accuracy = std::min(min_accuracy, run.accuracy);
    min_coverage = std::min(min_coverage, run.coverage);
  }
  gate.report("stance labeling accuracy", min_accuracy >= 0.90,
              "10 corpora, min accuracy " + fmt(100.0 * min_accuracy) + "%, min labeled share " +
                  fmt(100.0 * min_coverage) + "%");
}

// ---- 6: hostile week detection --------------------------------------------

void check_hostile_weeks(Gate& gate) {
  std::vector<PolarizationRecord> fixture;
  for (int week = 0; week < 4; ++week) {
    PolarizationRecord r;
    r.week = week;
    r.group = Stance::Believer;
    r.signed_emd = week == 3 ? 1.0 : 0.0;
    fixture.push_back(r);
  }
  const bool fixture_ok = summarize(fixture).hostile_weeks == std::set<int>{3};

  long planted = 0, recovered = 0;
  for (const auto& run : shared_runs()) {
    for (const auto& [group, weeks] : run.truth.planted_hostile_weeks) {
      auto it = run.summaries.find(group);
      for (int w : weeks) {
        ++planted;
        if (it != run.summaries.end() && it->second.hostile_weeks.count(w) != 0) ++recovered;
      }
    }
  }
  const double rate = planted == 0 ? 0.0 : static_cast<double>(recovered) / planted;
  gate.report("hostile week detection", fixture_ok && rate >= 0.80,
              std::string("fixture {0,0,0,1} -> week 3 ") + (fixture_ok ? "ok" : "WRONG") +
                  ", recovered " + std::to_string(recovered) + "/" + std::to_string(planted) +
                  " planted weeks");
}

// ---- 7: disaster-word prevalence direction --------------------------------

void check_disaster_direction(Gate& gate) {
  const double eps = 0.5;  // percentage points of slack on the decreasing side
  int ok_runs = 0;
  for (const auto& run : shared_runs()) {
    auto cell = [&](Stance g, WeekCondition c) -> const PrevalenceCell* {
      for (const auto& x : run.cells)
        if (x.group == g && x.condition == c) return &x;
      return nullptr;
    };
    const auto* dis_h = cell(Stance::Disbeliever, WeekCondition::Hostile);
    const auto* dis_o = cell(Stance::Disbeliever, WeekCondition::Other);
    const auto* bel_h = cell(Stance::Believer, WeekCondition::Hostile);
    const auto* bel_o = cell(Stance::Believer, WeekCondition::Other);
    if (!dis_h || !dis_o || !bel_h || !bel_o) continue;
    if (!dis_h->hashtag_pct || !dis_o->hashtag_pct || !dis_h->tweet_pct || !dis_o->tweet_pct)
      continue;
    if (!bel_h->hashtag_pct || !bel_o->hashtag_pct || !bel_h->tweet_pct || !bel_o->tweet_pct)
      continue;
    const bool up = *dis_h->hashtag_pct > *dis_o->hashtag_pct &&
                    *dis_h->tweet_pct > *dis_o->tweet_pct;
    const bool down = *bel_h->hashtag_pct < *bel_o->hashtag_pct + eps &&
                      *bel_h->tweet_pct < *bel_o->tweet_pct + eps;
    if (up && down) ++ok_runs;
  }
  gate.report("disaster-word prevalence direction", ok_runs >= 9,
              std::to_string(ok_runs) + "/10 runs with rising disbeliever and falling "
              "believer prevalence in their hostile weeks");
}

// ---- 8: byte-identical outputs across parallelism -------------------------

int shell(const std::string& command) {
  const int status = std::system(command.c_str());
  if (status == -1 || !WIFEXITED(status)) return -1;
  return WEXITSTATUS(status);
}

void check_determinism(Gate& gate) {
  const fs::path dir =
      fs::temp_directory_path() / ("affect_accept_" + std::to_string(::getpid()));
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = AFFECT_CLI;
  const std::string log = (dir / "log.txt").string();
  const std::string data = (dir / "data").string();

  bool pass = true;
  std::string detail;
  if (shell(cli + " synth --users 150 --weeks 8 --rng-seed 42 --out " + data + " >" + log +
            " 2>&1") != 0) {
    pass = false;
    detail = "corpus generation failed";
  }
  for (int degree : {1, 8}) {
    if (!pass) break;
    const std::string out = (dir / ("p" + std::to_string(degree))).string();
    if (shell(cli + " all --corpus " + data + "/corpus.jsonl --collection " + data +
              "/collection.cfg --parallelism " + std::to_string(degree) + " --out " + out +
              " >" + log + " 2>&1") != 0) {
      pass = false;
      detail = "pipeline failed at parallelism " + std::to_string(degree);
    }
  }
  int compared = 0;
  if (pass) {
    for (const char* name :
         {"corpus_normalized.jsonl", "corpus_stats.txt", "collection.cfg", "stances.csv",
          "aspect_scores.csv", "graphs.csv", "polarization.csv", "polarization_summary.csv",
          "disaster_report.csv"}) {
      const auto a = io::read_file((dir / "p1" / name).string());
      const auto b = io::read_file((dir / "p8" / name).string());
      ++compared;
      if (a != b) {
        pass = false;
        detail = std::string("differs: ") + name;
        break;
      }
    }
    if (pass) detail = std::to_string(compared) + " files byte-identical at parallelism 1 vs 8";
  }
  fs::remove_all(dir);
  gate.report("byte-identical outputs across parallelism", pass, detail);
}

// ---- 9: stage throughput ---------------------------------------------------

void check_throughput(Gate& gate) {
  SynthSpec spec;
  spec.n_users_per_group = 1250;  // 2 * 1250 * 20 * 2 = 100k messages
  spec.rng_seed = 9;
  const auto lexicon = ValenceLexicon::bundled();
  std::cerr << "  [acceptance] throughput corpus...\n";
  SynthResult synth = generate(spec, lexicon);
  std::string corpus;
  for (const auto& line : synth.corpus_lines) {
    corpus += line;
    corpus += '\n';
  }
  const auto collection = CollectionConfig::parse(synth.collection_config);

  const auto start = Clock::now();
  std::istringstream in(corpus);
  IngestResult ingested = ingest(in, collection);
  auto windows = window(ingested.messages, collection.anchor());
  auto scores = score_corpus(windows, lexicon, 3, true, 1);
  std::map<int, std::vector<AspectScore>> by_week;
  for (auto& s : scores) by_week[s.week].push_back(std::move(s));
  std::size_t edges = 0;
  for (const auto& [week, week_scores] : by_week) edges += build(week_scores).edges.size();
  const double elapsed = seconds_since(start);

  const double rate = static_cast<double>(ingested.stats.message_count) / elapsed;
  gate.report("single-thread stage throughput", rate >= 50000.0,
              fmt(static_cast<double>(ingested.stats.message_count)) + " messages -> " +
                  std::to_string(edges) + " edges, " + fmt(rate) + " msg/s");
}

}  // namespace

int main() {
  Gate gate;
  try {
    check_transport_oracle(gate);
    check_ei_fixtures(gate);
    check_metric_invariants(gate);
    check_sign_recovery(gate);
    check_stance_accuracy(gate);
    check_hostile_weeks(gate);
    check_disaster_direction(gate);
    check_determinism(gate);
    check_throughput(gate);
  } catch (const std::exception& e) {
    std::cout << "ACCEPTANCE: aborted by exception: " << e.what() << "\n";
    return 1;
  }
  std::cout << "ACCEPTANCE: " << gate.passed << "/9 PASS\n";
  return gate.passed == 9 ? 0 : 1;
}
