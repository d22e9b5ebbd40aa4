#include "affect/polarization.hpp"

#include <algorithm>
#include <cmath>

#include "affect/errors.hpp"

namespace affect {

std::optional<double> ei_index(const GroupedWeights& weights) {
  if (weights.view == GraphView::Net)
    throw InvariantError("ei_index: requires the pos or neg view");
  double external = 0.0;
  double internal = 0.0;
  for (double w : weights.external) {
    if (w < 0.0) throw InvariantError("ei_index: negative weight in a valenced view");
    external += w;
  }
  for (double w : weights.internal) {
    if (w < 0.0) throw InvariantError("ei_index: negative weight in a valenced view");
    internal += w;
  }
  const double total = external + internal;
  if (total == 0.0) return std::nullopt;
  return (external - internal) / total;
}

std::optional<double> polarization_valence(std::optional<double> ei_neg,
                                           std::optional<double> ei_pos) {
  if (!ei_neg || !ei_pos) return std::nullopt;
  return *ei_neg - *ei_pos;
}

namespace {

// Walks the merged sorted breakpoints of two samples, exposing the
// empirical CDF step counts between and at each distinct value.
template <typename Segment>
void walk_cdfs(std::span<const double> a, std::span<const double> b, Segment&& segment) {
  std::vector<double> sa(a.begin(), a.end());
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sa.begin(), sa.end());
  std::sort(sb.begin(), sb.end());

  std::size_t i = 0, j = 0;
  double prev = 0.0;
  bool first = true;
  while (i < sa.size() || j < sb.size()) {
    double cur;
    if (i < sa.size() && (j >= sb.size() || sa[i] <= sb[j]))
      cur = sa[i];
    else
      cur = sb[j];
    if (!first) segment(prev, cur, i, j);
    while (i < sa.size() && sa[i] == cur) ++i;
    while (j < sb.size() && sb[j] == cur) ++j;
    prev = cur;
    first = false;
  }
}

}  // namespace

double emd_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvariantError("emd_1d: both multisets must be non-empty");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double total = 0.0;
  walk_cdfs(a, b, [&](double lo, double hi, std::size_t ca, std::size_t cb) {
    total += std::abs(static_cast<double>(ca) / na - static_cast<double>(cb) / nb) * (hi - lo);
  });
  return total;
}

double ks_1d(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw InvariantError("ks_1d: both multisets must be non-empty");
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double max_gap = 0.0;
  walk_cdfs(a, b, [&](double, double, std::size_t ca, std::size_t cb) {
    max_gap = std::max(max_gap, std::abs(static_cast<double>(ca) / na - static_cast<double>(cb) / nb));
  });
  return max_gap;
}

PolarizationRecord metric(const AffectiveGraph& graph,
                          const std::unordered_map<std::string, Stance>& stances, Stance group) {
  PolarizationRecord record;
  record.week = graph.week;
  record.group = group;

  // No interaction toward the out-group: nothing to measure this week.
  GroupedWeights net = group_weights(graph, GraphView::Net, stances, group);
  if (net.external.empty()) return record;

  record.ei_pos = ei_index(group_weights(graph, GraphView::Pos, stances, group));
  record.ei_neg = ei_index(group_weights(graph, GraphView::Neg, stances, group));
  record.valence = polarization_valence(record.ei_neg, record.ei_pos);
  if (!net.internal.empty()) record.magnitude = emd_1d(net.external, net.internal);
  if (record.magnitude && record.valence) {
    double l = *record.valence < 0.0 ? -*record.magnitude : *record.magnitude;
    if (*record.magnitude == 0.0) l = 0.0;
    record.signed_emd = l;
  }
  return record;
}

SeriesSummary summarize(std::span<const PolarizationRecord> series) {
  SeriesSummary summary;
  std::vector<std::pair<int, double>> defined;
  for (const auto& r : series) {
    summary.group = r.group;
    if (r.signed_emd) defined.emplace_back(r.week, *r.signed_emd);
  }
  if (defined.size() < 2)
    throw InsufficientDataError("summarize: need at least 2 defined l values, have " +
                                std::to_string(defined.size()));

  double sum = 0.0;
  for (const auto& [week, l] : defined) sum += l;
  const double mean = sum / static_cast<double>(defined.size());
  double variance = 0.0;
  for (const auto& [week, l] : defined) variance += (l - mean) * (l - mean);
  variance /= static_cast<double>(defined.size());

  summary.mean_l = mean;
  summary.sd_l = std::sqrt(variance);
  for (const auto& [week, l] : defined) {
    summary.defined_weeks.insert(week);
    if (l > summary.threshold()) summary.hostile_weeks.insert(week);
  }
  return summary;
}

}  // namespace affect
