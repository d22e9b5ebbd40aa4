#pragma once

#include <optional>
#include <set>
#include <span>
#include <vector>

#include "affect/affect_graph.hpp"

namespace affect {

// Per (week, group) polarization measurements. Fields are missing when
// their inputs are undefined; a group with no out-group edges in a week
// yields a record with every measurement missing.
struct PolarizationRecord {
  int week = 0;
  Stance group = Stance::Unlabeled;
  std::optional<double> ei_pos;     // E/I on the positive view, in [-1, +1]
  std::optional<double> ei_neg;     // E/I on the negative view, in [-1, +1]
  std::optional<double> valence;    // ei_neg - ei_pos, in [-2, +2]
  std::optional<double> magnitude;  // EMD between out-group and in-group weights
  std::optional<double> signed_emd; // magnitude carrying the valence sign ("l")
};

struct SeriesSummary {
  Stance group = Stance::Unlabeled;
  double mean_l = 0.0;
  double sd_l = 0.0;  // population standard deviation
  std::set<int> hostile_weeks;  // weeks with l > mean_l + sd_l
  std::set<int> defined_weeks;  // weeks with a defined l

  double threshold() const { return mean_l + sd_l; }
};

// (E - I) / (E + I) over the summed external and internal weights.
// Missing when E + I == 0. Requires a pos or neg view with non-negative
// weights; anything else is an invariant violation.
std::optional<double> ei_index(const GroupedWeights& weights);

// Negative-view E/I minus positive-view E/I; missing if either is.
std::optional<double> polarization_valence(std::optional<double> ei_neg,
                                           std::optional<double> ei_pos);

// Exact first Wasserstein distance between the empirical distributions
// of two non-empty multisets: the integral of |A - B| over the merged
// breakpoints of the two empirical CDFs.
double emd_1d(std::span<const double> a, std::span<const double> b);

// Kolmogorov-Smirnov statistic (max CDF gap); diagnostic only.
double ks_1d(std::span<const double> a, std::span<const double> b);

// Full per-week record for one group on a built graph: E/I on both
// valence views, their difference, and the signed EMD between the
// group's out-group and in-group net-weight distributions.
PolarizationRecord metric(const AffectiveGraph& graph,
                          const std::unordered_map<std::string, Stance>& stances, Stance group);

// Mean, population SD and hostile weeks over the defined l values of one
// group's series. Throws InsufficientDataError below 2 defined values.
SeriesSummary summarize(std::span<const PolarizationRecord> series);

}  // namespace affect
