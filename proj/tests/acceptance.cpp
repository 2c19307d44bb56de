// Acceptance suite: one PASS/FAIL/SKIP line per criterion, non-zero exit when
// any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cair/automaton.hpp"
#include "cair/baselines.hpp"
#include "cair/detect.hpp"
#include "cair/dominance.hpp"
#include "cair/ingest.hpp"
#include "cair/synth.hpp"
#include "support/oracles.hpp"

namespace {

using namespace cair;

struct Outcome {
  bool pass = true;
  bool skipped = false;
  std::string detail;
};

class Failure {
 public:
  Failure& operator<<(const auto& v) {
    text_ << v;
    return *this;
  }
  std::string str() const { return text_.str(); }

 private:
  std::ostringstream text_;
};

Outcome fail(const Failure& f) { return {false, false, f.str()}; }

std::uint64_t criterion_seed(int criterion, std::size_t trial) {
  return 0x9e3779b97f4a7c15ull * static_cast<std::uint64_t>(criterion) + trial;
}

Outcome minimality() {
  for (std::size_t i = 0; i < 200; ++i) {
    const RouteSet s = oracle::RouteGenerator(criterion_seed(1, i)).route_set();
    const auto a = RouteAutomaton::build(s);
    const auto m = oracle::trie_then_refine(s);
    if (a.state_count() != m.states || a.transition_count() != m.transitions) {
      return fail(Failure() << "set " << i << ": automaton " << a.state_count() << "/" << a.transition_count()
                            << " vs refined trie " << m.states << "/" << m.transitions);
    }
    if (a.to_route_set() != s) return fail(Failure() << "set " << i << ": language differs from input");
  }
  return {true, false, "200 sets"};
}

Outcome order_independence() {
  for (std::size_t i = 0; i < 50; ++i) {
    oracle::RouteGenerator gen(criterion_seed(2, i));
    const RouteSet s = gen.route_set();
    const auto reference = RouteAutomaton::build(s);
    const RouteSet language = reference.to_route_set();
    std::vector<Route> order = s.to_vector();
    for (int p = 0; p < 5; ++p) {
      std::shuffle(order.begin(), order.end(), gen.rng().engine());
      RouteAutomaton a;
      for (const auto& r : order) a.add_route(r);
      if (a.stats() != reference.stats()) return fail(Failure() << "set " << i << " permutation " << p << ": stats");
      if (a.to_route_set() != language) return fail(Failure() << "set " << i << " permutation " << p << ": language");
    }
  }
  return {true, false, "50 sets x 5 permutations"};
}

Outcome add_remove_inverse() {
  const oracle::RandomRouteParams params{200, 200, 50};
  for (std::size_t i = 0; i < 1000; ++i) {
    oracle::RouteGenerator gen(criterion_seed(3, i), params);
    const RouteSet s = gen.route_set();
    Route r = gen.next();
    while (s.contains(r)) r = gen.next();
    const auto reference = RouteAutomaton::build(s);
    auto a = RouteAutomaton::build(s);
    a.add_route(r);
    a.remove_route(r);
    if (a.stats() != reference.stats()) return fail(Failure() << "trial " << i << ": stats after add/remove");
    if (a.to_route_set() != s) return fail(Failure() << "trial " << i << ": language after add/remove");
  }
  return {true, false, "1000 trials"};
}

Outcome transitivity_artifact() {
  const RouteSet toy = oracle::r_toy();
  const Route probe = oracle::route({1, 2, 3}, "10.0.3.0/24");
  const auto a = RouteAutomaton::build(toy);
  const auto g = AsGraph::build(toy);
  const auto m = oracle::trie_then_refine(toy);
  if (!graph_implies(g, probe)) return fail(Failure() << "graph does not imply AS1 AS2 AS3|P3");
  if (a.accepts(probe)) return fail(Failure() << "automaton accepts AS1 AS2 AS3|P3");
  if (a.state_count() != m.states || a.state_count() != 7) {
    return fail(Failure() << "states " << a.state_count() << ", oracle " << m.states);
  }
  if (g.node_count() != 7 || g.link_count() != 7) {
    return fail(Failure() << "graph " << g.node_count() << " nodes / " << g.link_count() << " links");
  }
  return {true, false, "7 states; graph 7/7"};
}

Outcome defcon() {
  const auto attack = gen_interception(defcon_spec());
  const auto alerts = detect(RouteAutomaton::build(attack.routes)).alerts;
  if (alerts.size() != 1) return fail(Failure() << alerts.size() << " alerts on the attack fixture");
  const auto& x = alerts.front();
  const auto p22 = *IpPrefix::parse("24.120.56.0/22");
  const auto a24 = *IpPrefix::parse("24.120.56.0/24");
  const auto b24 = *IpPrefix::parse("24.120.58.0/24");
  if (x.victim_as != AsNumber{20195} || x.p_v != p22 || (x.p_prime_v != a24 && x.p_prime_v != b24) ||
      x.t != AsNumber{4436} || x.s != AsNumber{26627}) {
    return fail(Failure() << "alert v=" << x.victim_as.value << " p_v=" << x.p_v.to_string()
                          << " p'_v=" << x.p_prime_v.to_string() << " t=" << x.t.value
                          << " s=" << (x.s ? std::to_string(x.s->value) : "-"));
  }
  const auto control = detect(RouteAutomaton::build(gen_benign(defcon_control_spec()))).alerts;
  if (!control.empty()) return fail(Failure() << control.size() << " alerts on the control fixture");
  return {true, false, "v=AS20195 p'_v=" + x.p_prime_v.to_string()};
}

Outcome dominance_oracle() {
  const oracle::RandomRouteParams params{500, 200, 50};
  for (std::size_t i = 0; i < 100; ++i) {
    const auto a = RouteAutomaton::build(oracle::RouteGenerator(criterion_seed(6, i), params).route_set());
    const auto expected = oracle::brute_force_dominance(a);
    const auto got = dominance(a).per_as;
    if (got != expected) return fail(Failure() << "automaton " << i << ": dominance differs from enumeration");
  }
  return {true, false, "100 automata"};
}

Outcome leak_signature() {
  const auto spec = leak_spec();
  const auto [before, after] = gen_leak(spec, gen_benign(spec));
  const auto d0 = dominance(RouteAutomaton::build(before), "before");
  const auto d1 = dominance(RouteAutomaton::build(after), "after");
  const auto v = assess_leak(diff(d0, d1));
  if (!v.triggered) return fail(Failure() << "not triggered");
  if (v.suspected_originator != spec.leak->originator) return fail(Failure() << "wrong originator");
  if (v.originator_gain_pct < 500.0 || v.changed_as_fraction < 0.05) {
    return fail(Failure() << "gain " << v.originator_gain_pct << "%, churn " << v.changed_as_fraction);
  }
  if (assess_leak(diff(d1, d1)).triggered) return fail(Failure() << "diff(x, x) triggered");
  std::ostringstream detail;
  detail << "gain " << std::lround(v.originator_gain_pct) << "%, churn "
         << std::lround(v.changed_as_fraction * 10000) / 100.0 << "%";
  return {true, false, detail.str()};
}

Outcome trie_bounds() {
  for (std::size_t i = 0; i < 200; ++i) {
    const RouteSet s = oracle::RouteGenerator(criterion_seed(1, i)).route_set();
    const auto c = compare_sizes(s);
    if (c.automaton_states > c.trie_nodes || c.automaton_transitions > c.trie_edges) {
      return fail(Failure() << "set " << i << ": automaton " << c.automaton_states << "/"
                            << c.automaton_transitions << " exceeds trie " << c.trie_nodes << "/" << c.trie_edges);
    }
  }
  return {true, false, "200 sets"};
}

bool within(double got, double want, double tolerance) { return std::abs(got - want) <= tolerance * want; }

Outcome full_data() {
  const char* path = std::getenv("CAIR_OREGON2_RIB");
  if (!path || !*path) return {true, true, "CAIR_OREGON2_RIB not set"};
  const auto in = ingest_file(path, InputFormat::BgpdumpM);
  const auto a = RouteAutomaton::build(in.routes);
  const auto& r = in.report;
  std::ostringstream detail;
  detail << r.distinct_prefixes << " prefixes, " << r.distinct_asns << " ASNs, " << r.distinct_paths << " paths, "
         << a.state_count() << " states, " << a.transition_count() << " transitions";
  const bool ok = r.distinct_prefixes == 600216 && r.distinct_asns == 52396 && r.distinct_paths == 2875026 &&
                  within(static_cast<double>(a.state_count()), 302598, 0.005) &&
                  within(static_cast<double>(a.transition_count()), 10355671, 0.005);
  return {ok, false, detail.str()};
}

// Heads h each reach suffixes 1..10, inserted head by head. When the last
// suffix of a head arrives, that head's state becomes equivalent to the
// previous head's and the two merge.
std::vector<Route> suffix_rich_fixture() {
  std::vector<Route> out;
  for (std::uint32_t h = 1; h <= 20; ++h) {
    for (std::uint32_t k = 1; k <= 10; ++k) {
      out.push_back(Route::from_asns({100 + h, 500 + k, 900 + k}, IpPrefix::make(0x0A000000u | (k << 8), 24)));
    }
  }
  return out;
}

Outcome size_witness() {
  RouteAutomaton a;
  std::size_t decreases = 0;
  std::size_t first = 0;
  const auto routes = suffix_rich_fixture();
  for (std::size_t i = 0; i < routes.size(); ++i) {
    const std::size_t before = a.state_count();
    a.add_route(routes[i]);
    if (a.state_count() < before) {
      if (decreases++ == 0) first = i + 1;
    }
  }
  if (decreases == 0) return fail(Failure() << "state count never decreased");
  return {true, false,
          std::to_string(decreases) + " decreasing steps, first at insertion " + std::to_string(first)};
}

struct Criterion {
  int number;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "minimality oracle", 60, minimality},
      {2, "order independence", 30, order_independence},
      {3, "add/remove inverse", 60, add_remove_inverse},
      {4, "transitivity artifact", 5, transitivity_artifact},
      {5, "DEFCON ground truth", 5, defcon},
      {6, "dominance oracle", 60, dominance_oracle},
      {7, "leak signature", 10, leak_signature},
      {8, "trie bounds", 60, trie_bounds},
      {9, "full-data reproduction", 7200, full_data},
      {10, "self-adaptive size witness", 5, size_witness},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    Outcome o;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, false, std::string("exception: ") + e.what()};
    }
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    if (o.pass && !o.skipped && dt.count() > c.budget_s) {
      o.pass = false;
      o.detail += "; over budget of " + std::to_string(static_cast<int>(c.budget_s)) + " s";
    }
    const char* verdict = o.skipped ? "SKIP" : (o.pass ? "PASS" : "FAIL");
    std::cout << verdict << " criterion " << c.number << " (" << c.name << "): " << o.detail << " ["
              << dt.count() << " s]\n";
    failures += o.pass ? 0 : 1;
  }
  return failures == 0 ? 0 : 1;
}
