#include "affect/affect_graph.hpp"

#include <algorithm>

#include "affect/errors.hpp"

namespace affect {

const EdgeWeights* AffectiveGraph::find(const std::string& src, const std::string& dst) const {
  auto it = edges.find({src, dst});
  return it == edges.end() ? nullptr : &it->second;
}

AffectiveGraph build(std::span<const AspectScore> scores) {
  AffectiveGraph g;
  bool week_set = false;
  for (const AspectScore& s : scores) {
    if (!week_set) {
      g.week = s.week;
      week_set = true;
    } else if (s.week != g.week) {
      throw InvariantError("build: scores span weeks " + std::to_string(g.week) + " and " +
                           std::to_string(s.week));
    }
    if (s.source == s.target) continue;
    EdgeWeights& w = g.edges[{s.source, s.target}];
    w.pos += std::max(0.0, s.score);
    w.neg += std::max(0.0, -s.score);
    w.net += s.score;
    g.nodes.insert(s.source);
    g.nodes.insert(s.target);
  }
  return g;
}

GroupedWeights group_weights(const AffectiveGraph& graph, GraphView view,
                             const std::unordered_map<std::string, Stance>& stances,
                             Stance group) {
  if (group == Stance::Unlabeled)
    throw InvariantError("group_weights: group must be Believer or Disbeliever");
  const Stance opposing = group == Stance::Believer ? Stance::Disbeliever : Stance::Believer;

  auto stance_of = [&](const std::string& user) {
    auto it = stances.find(user);
    return it == stances.end() ? Stance::Unlabeled : it->second;
  };
  auto pick = [&](const EdgeWeights& w) {
    switch (view) {
      case GraphView::Pos: return w.pos;
      case GraphView::Neg: return w.neg;
      case GraphView::Net: return w.net;
    }
    return w.net;
  };

  GroupedWeights out;
  out.group = group;
  out.view = view;
  for (const auto& [key, w] : graph.edges) {
    const Stance src = stance_of(key.first);
    if (src != group) continue;
    const Stance dst = stance_of(key.second);
    if (dst == opposing)
      out.external.push_back(pick(w));
    else if (dst == group)
      out.internal.push_back(pick(w));
  }
  return out;
}

std::string to_string(GraphView view) {
  switch (view) {
    case GraphView::Pos: return "pos";
    case GraphView::Neg: return "neg";
    case GraphView::Net: return "net";
  }
  return "net";
}

}  // namespace affect
