#include "cair/baselines.hpp"

#include <sstream>

namespace cair {

namespace {

GraphNode node_of(RouteSymbol s) { return s.is_as() ? RouteSymbol::as(s.as_value()) : s; }

double ratio(std::size_t num, std::size_t den) {
  return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
}

std::string dot_id(GraphNode n) {
  std::string s = n.to_string();
  for (char& c : s) {
    if (c == '.' || c == '/') c = '_';
  }
  return s;
}

}  // namespace

RouteTrie::RouteTrie() : children_(1) {}

RouteTrie RouteTrie::build(const RouteSet& routes) {
  RouteTrie trie;
  for (const auto& r : routes) trie.insert(r);
  return trie;
}

void RouteTrie::insert(const Route& route) {
  std::size_t node = 0;
  for (RouteSymbol s : route.word()) {
    auto it = children_[node].find(s);
    if (it == children_[node].end()) {
      const std::size_t child = children_.size();
      children_[node].emplace(s, child);
      children_.emplace_back();
      node = child;
    } else {
      node = it->second;
    }
  }
}

bool RouteTrie::accepts(const Route& route) const {
  std::size_t node = 0;
  for (RouteSymbol s : route.word()) {
    auto it = children_[node].find(s);
    if (it == children_[node].end()) return false;
    node = it->second;
  }
  return true;
}

AsGraph AsGraph::build(const RouteSet& routes) {
  AsGraph g;
  for (const auto& r : routes) g.insert(r);
  return g;
}

void AsGraph::insert(const Route& route) {
  const auto word = route.word();
  for (std::size_t i = 0; i < word.size(); ++i) {
    const GraphNode n = node_of(word[i]);
    nodes_.insert(n);
    if (i == 0) continue;
    const GraphNode prev = node_of(word[i - 1]);
    if (prev == n) continue;
    links_.insert(std::minmax(prev, n));
  }
}

bool AsGraph::has_link(GraphNode a, GraphNode b) const {
  return a == b || links_.count(std::minmax(a, b)) > 0;
}

bool AsGraph::implies(const Route& route) const {
  const auto word = route.word();
  for (std::size_t i = 1; i < word.size(); ++i) {
    if (!has_link(node_of(word[i - 1]), node_of(word[i]))) return false;
  }
  return nodes_.count(node_of(word.front())) > 0;
}

std::string AsGraph::export_dot() const {
  std::ostringstream out;
  out << "graph as_graph {\n";
  for (GraphNode n : nodes_) {
    out << "  " << dot_id(n) << " [label=\"" << n.to_string() << "\""
        << (n.is_prefix() ? ", shape=box" : "") << "];\n";
  }
  for (const auto& [a, b] : links_) out << "  " << dot_id(a) << " -- " << dot_id(b) << ";\n";
  out << "}\n";
  return out.str();
}

double SizeComparison::trie_to_automaton_nodes() const { return ratio(trie_nodes, automaton_states); }
double SizeComparison::trie_to_automaton_edges() const {
  return ratio(trie_edges, automaton_transitions);
}
double SizeComparison::automaton_to_graph_nodes() const {
  return ratio(automaton_states, graph_nodes);
}
double SizeComparison::automaton_to_graph_edges() const {
  return ratio(automaton_transitions, graph_links);
}

SizeComparison compare_sizes(const RouteSet& routes, const RouteAutomaton& automaton) {
  const auto trie = RouteTrie::build(routes);
  const auto graph = AsGraph::build(routes);
  SizeComparison c;
  c.routes = routes.size();
  c.automaton_states = automaton.state_count();
  c.automaton_transitions = automaton.transition_count();
  c.trie_nodes = trie.node_count();
  c.trie_edges = trie.edge_count();
  c.graph_nodes = graph.node_count();
  c.graph_links = graph.link_count();
  return c;
}

SizeComparison compare_sizes(const RouteSet& routes) {
  return compare_sizes(routes, RouteAutomaton::build(routes));
}

}  // namespace cair
