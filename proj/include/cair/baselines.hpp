#pragma once

// Reference representations of a route set: a prefix tree without suffix
// sharing and an undirected AS-level connectivity graph.

#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "cair/automaton.hpp"

namespace cair {

class RouteTrie {
 public:
  RouteTrie();
  static RouteTrie build(const RouteSet& routes);

  void insert(const Route& route);
  bool accepts(const Route& route) const;

  std::size_t node_count() const noexcept { return children_.size(); }  // includes the root
  std::size_t edge_count() const noexcept { return children_.size() - 1; }

 private:
  std::vector<std::map<RouteSymbol, std::size_t>> children_;
};

// A graph node is an AS (prepend instances collapse) or a prefix.
using GraphNode = RouteSymbol;

class AsGraph {
 public:
  static AsGraph build(const RouteSet& routes);

  void insert(const Route& route);
  // Every adjacent pair of the route, origin-to-prefix included, is a link.
  bool implies(const Route& route) const;

  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t link_count() const noexcept { return links_.size(); }
  const std::set<GraphNode>& nodes() const noexcept { return nodes_; }
  const std::set<std::pair<GraphNode, GraphNode>>& links() const noexcept { return links_; }

  std::string export_dot() const;

 private:
  bool has_link(GraphNode a, GraphNode b) const;

  std::set<GraphNode> nodes_;
  std::set<std::pair<GraphNode, GraphNode>> links_;  // (smaller, larger)
};

inline bool graph_implies(const AsGraph& graph, const Route& route) { return graph.implies(route); }

struct SizeComparison {
  std::size_t routes = 0;
  std::size_t automaton_states = 0;
  std::size_t automaton_transitions = 0;
  std::size_t trie_nodes = 0;  // root included
  std::size_t trie_edges = 0;
  std::size_t graph_nodes = 0;
  std::size_t graph_links = 0;

  double trie_to_automaton_nodes() const;
  double trie_to_automaton_edges() const;
  double automaton_to_graph_nodes() const;
  double automaton_to_graph_edges() const;
};

SizeComparison compare_sizes(const RouteSet& routes);
SizeComparison compare_sizes(const RouteSet& routes, const RouteAutomaton& automaton);

}  // namespace cair
