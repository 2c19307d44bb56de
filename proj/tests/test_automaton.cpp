#include "doctest.h"

#include <algorithm>

#include "cair/automaton.hpp"
#include "support/oracles.hpp"

using namespace cair;
using oracle::pfx;
using oracle::route;

namespace {

std::uint32_t canonical_number(const RouteAutomaton& a, StateId q) {
  const auto order = a.canonical_order();
  return static_cast<std::uint32_t>(std::find(order.begin(), order.end(), q) - order.begin());
}

void check_language(const RouteAutomaton& a, const RouteSet& expected) {
  CHECK(a.to_route_set() == expected);
  CHECK(a.route_count() == expected.size());
  CHECK(a.right_language_size(a.start()) == expected.size());
}

void check_matches_oracle(const RouteAutomaton& a, const RouteSet& routes) {
  const auto m = oracle::trie_then_refine(routes);
  CHECK(a.state_count() == m.states);
  CHECK(a.transition_count() == m.transitions);
  check_language(a, routes);
  CHECK_NOTHROW(a.check_invariants());
}

RouteSymbol as(std::uint32_t v) { return RouteSymbol::as({v}); }

}  // namespace

TEST_CASE("empty automaton") {
  RouteAutomaton a;
  CHECK(a.state_count() == 2);
  CHECK(a.transition_count() == 0);
  CHECK(a.route_count() == 0);
  CHECK_FALSE(a.accepts(route({1}, "10.0.0.0/8")));
  CHECK(a.enumerate_routes().empty());
  CHECK_NOTHROW(a.check_invariants());
}

TEST_CASE("R_toy keeps the AS3 states apart") {
  const auto a = RouteAutomaton::build(oracle::r_toy());
  CHECK(a.state_count() == 7);
  CHECK(a.transition_count() == 8);
  check_matches_oracle(a, oracle::r_toy());

  const auto q3 = a.walk(std::vector{as(1), as(2), as(3)});
  const auto q5 = a.walk(std::vector{as(1), as(4), as(3)});
  REQUIRE(q3);
  REQUIRE(q5);
  CHECK(*q3 != *q5);
  CHECK(a.right_language_size(*q3) == 2);
  CHECK(a.right_language_size(*q5) == 1);
  CHECK(a.right_language_size(a.accepting()) == 1);

  CHECK(a.accepts(route({1, 2, 3}, "10.0.1.0/24")));
  CHECK_FALSE(a.accepts(route({1, 2, 3}, "10.0.3.0/24")));
}

TEST_CASE("walk over R_toy") {
  const auto a = RouteAutomaton::build(oracle::r_toy());
  const auto q2 = a.walk(std::vector{as(1), as(2)});
  REQUIRE(q2);
  CHECK(canonical_number(a, *q2) == 2);
  CHECK_FALSE(a.walk(std::vector{as(1), as(9)}));
  CHECK(a.walk(std::vector<RouteSymbol>{}) == a.start());
  CHECK(canonical_number(a, a.start()) == 0);
  CHECK(canonical_number(a, a.accepting()) == 6);
  CHECK_THROWS_AS(a.right_language_size(12345), Error);
}

TEST_CASE("adding a route twice is a no-op") {
  RouteAutomaton a;
  CHECK(a.add_route(route({1, 2, 3}, "10.0.1.0/24")).changed);
  const auto again = a.add_route(route({1, 2, 3}, "10.0.1.0/24"));
  CHECK_FALSE(again.changed);
  CHECK(again.states_added == 0);
  CHECK(a.route_count() == 1);
}

TEST_CASE("shared suffix is merged through the register") {
  const RouteSet s{route({1, 2}, "10.0.1.0/24"), route({3, 2}, "10.0.1.0/24")};
  const auto a = RouteAutomaton::build(s);
  CHECK(a.state_count() == 4);
  CHECK(*a.walk(std::vector{as(1), as(2)}) == *a.walk(std::vector{as(3), as(2)}));
  check_matches_oracle(a, s);
}

TEST_CASE("confluence states are cloned before divergence") {
  // q after AS2 is shared; adding AS1 AS2 AS5|P must not make AS3 AS2 AS5|P appear.
  RouteAutomaton a = RouteAutomaton::build({route({1, 2}, "10.0.1.0/24"), route({3, 2}, "10.0.1.0/24")});
  const auto summary = a.add_route(route({1, 2, 5}, "10.0.1.0/24"));
  CHECK(summary.clones >= 1);
  CHECK_FALSE(a.accepts(route({3, 2, 5}, "10.0.1.0/24")));
  check_matches_oracle(a, {route({1, 2}, "10.0.1.0/24"), route({3, 2}, "10.0.1.0/24"),
                           route({1, 2, 5}, "10.0.1.0/24")});
}

TEST_CASE("removing from R_toy") {
  RouteAutomaton a = RouteAutomaton::build(oracle::r_toy());
  const auto summary = a.remove_route(route({1, 2, 3}, "10.0.2.0/24"));
  CHECK(summary.changed);
  RouteSet reduced = oracle::r_toy();
  reduced.erase(route({1, 2, 3}, "10.0.2.0/24"));
  check_matches_oracle(a, reduced);
  const auto rebuilt = RouteAutomaton::build(reduced);
  CHECK(a.stats() == rebuilt.stats());
  const auto q3 = a.walk(std::vector{as(1), as(2), as(3)});
  const auto q5 = a.walk(std::vector{as(1), as(4), as(3)});
  CHECK(*q3 != *q5);
  CHECK(a.transitions(*q3).size() == 1);

  CHECK_FALSE(a.remove_route(route({9, 9}, "10.0.2.0/24")).changed);
  CHECK_FALSE(a.remove_route(route({1, 2}, "10.0.1.0/24")).changed);
  CHECK(a.stats() == rebuilt.stats());
}

TEST_CASE("removing every route returns to the empty automaton") {
  oracle::RouteGenerator gen(31);
  const RouteSet s = gen.route_set();
  RouteAutomaton a = RouteAutomaton::build(s);
  for (const auto& r : s) {
    CHECK(a.remove_route(r).changed);
  }
  CHECK(a.state_count() == 2);
  CHECK(a.transition_count() == 0);
  CHECK(a.route_count() == 0);
  CHECK_NOTHROW(a.check_invariants());
}

TEST_CASE("random sets match trie plus partition refinement") {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    oracle::RouteGenerator gen(seed, {300, 60, 20});
    const RouteSet s = gen.route_set();
    CAPTURE(seed);
    check_matches_oracle(RouteAutomaton::build(s), s);
  }
}

TEST_CASE("minimal after every committed mutation") {
  oracle::RouteGenerator gen(7, {200, 40, 10});
  RouteAutomaton a;
  RouteSet current;
  for (int step = 0; step < 400; ++step) {
    const bool remove = !current.empty() && gen.rng().chance(30);
    if (remove) {
      auto it = current.begin();
      std::advance(it, static_cast<std::ptrdiff_t>(gen.rng().below(current.size())));
      const Route r = *it;
      a.remove_route(r);
      current.erase(r);
    } else {
      const Route r = gen.next();
      a.add_route(r);
      current.insert(r);
    }
    CAPTURE(step);
    REQUIRE_NOTHROW(a.check_invariants());
    const auto m = oracle::trie_then_refine(current);
    REQUIRE(a.state_count() == m.states);
    REQUIRE(a.transition_count() == m.transitions);
  }
  check_language(a, current);
}

TEST_CASE("prepends are distinct symbols") {
  const RouteSet s{route({701, 701, 20195}, "24.120.56.0/22"), route({701, 20195}, "24.120.56.0/22")};
  const auto a = RouteAutomaton::build(s);
  check_matches_oracle(a, s);
  CHECK(a.accepts(route({701, 701, 20195}, "24.120.56.0/22")));
  CHECK_FALSE(a.accepts(route({701, 701, 701, 20195}, "24.120.56.0/22")));
}

TEST_CASE("canonical order is topological and isomorphism-invariant") {
  oracle::RouteGenerator gen(55);
  auto routes = gen.route_set().to_vector();
  RouteAutomaton forward, backward;
  for (const auto& r : routes) forward.add_route(r);
  for (auto it = routes.rbegin(); it != routes.rend(); ++it) backward.add_route(*it);

  auto numbered_edges = [](const RouteAutomaton& x) {
    const auto order = x.canonical_order();
    std::vector<std::uint32_t> num(x.id_bound());
    for (std::uint32_t i = 0; i < order.size(); ++i) num[order[i]] = i;
    std::vector<std::tuple<std::uint32_t, std::uint64_t, std::uint32_t>> edges;
    for (StateId q : order) {
      for (const auto& t : x.transitions(q)) {
        CHECK(num[q] < num[t.target]);
        edges.emplace_back(num[q], t.symbol.key(), num[t.target]);
      }
    }
    std::sort(edges.begin(), edges.end());
    return edges;
  };
  CHECK(numbered_edges(forward) == numbered_edges(backward));
}

TEST_CASE("stats count prefixes and AS numbers") {
  const auto st = RouteAutomaton::build(oracle::r_toy()).stats();
  CHECK(st.states == 7);
  CHECK(st.transitions == 8);
  CHECK(st.routes == 3);
  CHECK(st.prefixes == 3);
  CHECK(st.asns == 4);
}
