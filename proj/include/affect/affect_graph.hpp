#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "affect/sentiment.hpp"
#include "affect/stance.hpp"

namespace affect {

enum class GraphView { Pos, Neg, Net };

struct EdgeWeights {
  double pos = 0.0;  // sum of positive score parts
  double neg = 0.0;  // sum of negative score parts (stored >= 0)
  double net = 0.0;  // pos - neg

  bool operator==(const EdgeWeights&) const = default;
};

// Weekly directed multigraph over users, aggregated per (source, target).
// Zero-valence interactions keep their edge key with zero weight so
// interaction counts stay auditable. Self-loops are dropped.
struct AffectiveGraph {
  int week = 0;
  std::set<std::string> nodes;
  std::map<std::pair<std::string, std::string>, EdgeWeights> edges;

  const EdgeWeights* find(const std::string& src, const std::string& dst) const;
};

// Aggregates one week of aspect scores. Throws InvariantError when the
// scores span more than one week.
AffectiveGraph build(std::span<const AspectScore> scores);

// Edge-weight multisets for one group on one view. External edges run
// from the group to users holding the opposing stance; internal edges
// stay within the group. Edges touching Unlabeled users count toward
// neither multiset.
struct GroupedWeights {
  Stance group = Stance::Unlabeled;
  GraphView view = GraphView::Net;
  std::vector<double> external;
  std::vector<double> internal;
};

GroupedWeights group_weights(const AffectiveGraph& graph, GraphView view,
                             const std::unordered_map<std::string, Stance>& stances,
                             Stance group);

std::string to_string(GraphView view);

}  // namespace affect
