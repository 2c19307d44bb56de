#include "doctest.h"

#include "cair/baselines.hpp"
#include "support/oracles.hpp"

using namespace cair;
using oracle::route;

TEST_CASE("trie of R_toy") {
  const auto trie = RouteTrie::build(oracle::r_toy());
  // root, AS1, then AS2 AS3 P1 P2 and AS4 AS3 P3
  CHECK(trie.node_count() == 9);
  CHECK(trie.edge_count() == 8);
  for (const auto& r : oracle::r_toy()) CHECK(trie.accepts(r));
  CHECK_FALSE(trie.accepts(route({1, 2, 3}, "10.0.3.0/24")));
}

TEST_CASE("trie edge cases") {
  CHECK(RouteTrie::build({}).node_count() == 1);
  CHECK(RouteTrie::build({}).edge_count() == 0);
  RouteTrie t;
  t.insert(route({1, 2}, "10.0.0.0/8"));
  const auto n = t.node_count();
  t.insert(route({1, 2}, "10.0.0.0/8"));
  CHECK(t.node_count() == n);
}

TEST_CASE("AS graph of R_toy and the transitivity artifact") {
  const auto g = AsGraph::build(oracle::r_toy());
  CHECK(g.node_count() == 7);
  CHECK(g.link_count() == 7);
  const auto phantom = route({1, 2, 3}, "10.0.3.0/24");
  CHECK(graph_implies(g, phantom));
  CHECK_FALSE(RouteAutomaton::build(oracle::r_toy()).accepts(phantom));
  CHECK_FALSE(graph_implies(g, route({2, 4}, "10.0.3.0/24")));
  CHECK_FALSE(graph_implies(g, route({9}, "10.0.3.0/24")));
}

TEST_CASE("graph shapes") {
  const auto path = AsGraph::build({route({1, 2, 3}, "10.0.0.0/8")});
  CHECK(path.node_count() == 4);
  CHECK(path.link_count() == 3);
  const auto prepended = AsGraph::build({route({1, 1, 1, 2}, "10.0.0.0/8")});
  CHECK(prepended.node_count() == 3);
  CHECK(prepended.link_count() == 2);
  CHECK(graph_implies(prepended, route({1, 1, 1, 2}, "10.0.0.0/8")));
  CHECK(prepended.export_dot().find("AS1 -- AS2") != std::string::npos);
}

TEST_CASE("graph over-approximates and trie dominates the automaton") {
  for (std::uint64_t seed = 400; seed < 420; ++seed) {
    oracle::RouteGenerator gen(seed);
    const RouteSet s = gen.route_set();
    const auto g = AsGraph::build(s);
    for (const auto& r : s) CHECK(graph_implies(g, r));
    const auto c = compare_sizes(s);
    CHECK(c.automaton_states <= c.trie_nodes);
    CHECK(c.automaton_transitions <= c.trie_edges);
  }
}

TEST_CASE("compare_sizes") {
  const auto c = compare_sizes(oracle::r_toy());
  CHECK(c.automaton_states == 7);
  CHECK(c.automaton_transitions == 8);
  CHECK(c.trie_nodes == 9);
  CHECK(c.trie_edges == 8);
  CHECK(c.graph_nodes == 7);
  CHECK(c.graph_links == 7);
  CHECK(c.automaton_to_graph_nodes() == doctest::Approx(1.0));

  const auto heavy = oracle::suffix_heavy_routes();
  const auto h = compare_sizes(RouteSet(heavy.begin(), heavy.end()));
  MESSAGE("suffix-heavy trie/automaton node ratio " << h.trie_to_automaton_nodes());
  CHECK(h.trie_to_automaton_nodes() > 5.0);
}
