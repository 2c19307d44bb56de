#include "cair/automaton.hpp"

#include <algorithm>
#include <queue>
#include <tuple>
#include <unordered_set>

namespace cair {

namespace {

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t transition_hash(RouteSymbol symbol, StateId target) {
  return mix(symbol.key() ^ mix(target));
}

auto symbol_less = [](const Transition& t, RouteSymbol s) { return t.symbol < s; };

}  // namespace

RouteAutomaton::RouteAutomaton() {
  start_ = new_state();
  final_ = new_state();
}

RouteAutomaton RouteAutomaton::build(const RouteSet& routes) {
  RouteAutomaton m;
  for (const auto& r : routes) m.add_route(r);
  return m;
}

// ---------------------------------------------------------------------------
// Low-level state bookkeeping

StateId RouteAutomaton::new_state() {
  StateId id;
  if (!free_.empty()) {
    id = free_.back();
    free_.pop_back();
  } else {
    id = static_cast<StateId>(states_.size());
    states_.emplace_back();
  }
  states_[id] = State{};
  states_[id].live = true;
  ++live_count_;
  return id;
}

StateId RouteAutomaton::clone_state(StateId q) {
  StateId c = new_state();
  State& dst = states_[c];
  dst.out = states_[q].out;
  dst.hash = states_[q].hash;
  for (const auto& t : dst.out) ++states_[t.target].in;
  transition_count_ += dst.out.size();
  return c;
}

void RouteAutomaton::delete_state(StateId q) {
  State& s = states_[q];
  for (const auto& t : s.out) --states_[t.target].in;
  transition_count_ -= s.out.size();
  s = State{};
  free_.push_back(q);
  --live_count_;
}

void RouteAutomaton::set_target(StateId q, RouteSymbol symbol, StateId target) {
  State& s = states_[q];
  auto it = std::lower_bound(s.out.begin(), s.out.end(), symbol, symbol_less);
  if (it != s.out.end() && it->symbol == symbol) {
    if (it->target == target) return;
    --states_[it->target].in;
    s.hash -= transition_hash(symbol, it->target);
    it->target = target;
  } else {
    s.out.insert(it, Transition{symbol, target});
    ++transition_count_;
  }
  ++states_[target].in;
  s.hash += transition_hash(symbol, target);
}

void RouteAutomaton::erase_transition(StateId q, RouteSymbol symbol) {
  State& s = states_[q];
  auto it = std::lower_bound(s.out.begin(), s.out.end(), symbol, symbol_less);
  if (it == s.out.end() || it->symbol != symbol) return;
  --states_[it->target].in;
  s.hash -= transition_hash(symbol, it->target);
  s.out.erase(it);
  --transition_count_;
}

std::optional<StateId> RouteAutomaton::find_equivalent(StateId q) const {
  const State& s = states_[q];
  auto [lo, hi] = register_.equal_range(s.hash);
  for (auto it = lo; it != hi; ++it) {
    if (it->second != q && states_[it->second].out == s.out) return it->second;
  }
  return std::nullopt;
}

void RouteAutomaton::register_state(StateId q) {
  register_.emplace(states_[q].hash, q);
  states_[q].registered = true;
}

void RouteAutomaton::unregister_state(StateId q) {
  if (!states_[q].registered) return;
  auto [lo, hi] = register_.equal_range(states_[q].hash);
  for (auto it = lo; it != hi; ++it) {
    if (it->second == q) {
      register_.erase(it);
      break;
    }
  }
  states_[q].registered = false;
}

void RouteAutomaton::privatize_path(std::vector<StateId>& path, std::span<const RouteSymbol> word,
                                    std::size_t last, MutationSummary& summary) {
  std::size_t confluence = last + 1;
  for (std::size_t i = 1; i <= last; ++i) {
    if (states_[path[i]].in > 1) {
      confluence = i;
      break;
    }
  }
  // States before the first confluence are reached only along this path;
  // their signatures change in place.
  for (std::size_t i = 1; i < confluence; ++i) unregister_state(path[i]);
  for (std::size_t i = confluence; i <= last; ++i) {
    StateId c = clone_state(path[i]);
    set_target(path[i - 1], word[i - 1], c);
    path[i] = c;
    ++summary.clones;
    ++summary.states_added;
  }
}

// ---------------------------------------------------------------------------
// Mutations

MutationSummary RouteAutomaton::add_route(const Route& route) {
  MutationSummary summary;
  const std::vector<RouteSymbol> word = route.word();
  const std::size_t n = word.size();

  std::vector<StateId> path{start_};
  path.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto next = target(path.back(), word[i]);
    if (!next) break;
    path.push_back(*next);
  }
  const std::size_t common = path.size() - 1;
  if (common == n) return summary;  // already accepted

  privatize_path(path, word, common, summary);

  StateId cur = path[common];
  for (std::size_t i = common; i + 1 < n; ++i) {
    StateId s = new_state();
    ++summary.states_added;
    set_target(cur, word[i], s);
    path.push_back(s);
    cur = s;
  }
  set_target(cur, word[n - 1], final_);

  for (std::size_t i = n - 1; i >= 1; --i) {
    const StateId q = path[i];
    if (auto eq = find_equivalent(q)) {
      set_target(path[i - 1], word[i - 1], *eq);
      delete_state(q);
      ++summary.states_removed;
    } else {
      register_state(q);
    }
  }

  ++route_count_;
  summary.changed = true;
  return summary;
}

MutationSummary RouteAutomaton::remove_route(const Route& route) {
  MutationSummary summary;
  const std::vector<RouteSymbol> word = route.word();
  const std::size_t n = word.size();

  std::vector<StateId> path{start_};
  path.reserve(n + 1);
  for (std::size_t i = 0; i < n; ++i) {
    auto next = target(path.back(), word[i]);
    if (!next) return summary;
    path.push_back(*next);
  }
  if (path.back() != final_) return summary;
  path.pop_back();

  privatize_path(path, word, n - 1, summary);
  erase_transition(path[n - 1], word[n - 1]);

  for (std::size_t i = n - 1; i >= 1; --i) {
    const StateId q = path[i];
    if (states_[q].out.empty()) {
      erase_transition(path[i - 1], word[i - 1]);
      delete_state(q);
      ++summary.states_removed;
    } else if (auto eq = find_equivalent(q)) {
      set_target(path[i - 1], word[i - 1], *eq);
      delete_state(q);
      ++summary.states_removed;
    } else {
      register_state(q);
    }
  }

  --route_count_;
  summary.changed = true;
  return summary;
}

// ---------------------------------------------------------------------------
// Queries

std::span<const Transition> RouteAutomaton::transitions(StateId q) const {
  if (!is_state(q)) throw Error(ErrorCode::UnknownState, "unknown state " + std::to_string(q));
  return states_[q].out;
}

std::optional<StateId> RouteAutomaton::target(StateId q, RouteSymbol symbol) const {
  const auto& out = states_[q].out;
  auto it = std::lower_bound(out.begin(), out.end(), symbol, symbol_less);
  if (it == out.end() || it->symbol != symbol) return std::nullopt;
  return it->target;
}

std::uint32_t RouteAutomaton::in_degree(StateId q) const {
  if (!is_state(q)) throw Error(ErrorCode::UnknownState, "unknown state " + std::to_string(q));
  return states_[q].in;
}

bool RouteAutomaton::accepts(const Route& route) const {
  const auto word = route.word();
  auto q = walk(word);
  return q && *q == final_;
}

std::optional<StateId> RouteAutomaton::walk(std::span<const RouteSymbol> partial) const {
  StateId q = start_;
  for (const auto& s : partial) {
    auto next = target(q, s);
    if (!next) return std::nullopt;
    q = *next;
  }
  return q;
}

std::uint64_t RouteAutomaton::right_language_size(StateId q) const {
  if (!is_state(q)) throw Error(ErrorCode::UnknownState, "unknown state " + std::to_string(q));
  std::vector<std::uint64_t> memo(states_.size(), 0);
  std::vector<bool> done(states_.size(), false);
  std::function<std::uint64_t(StateId)> count = [&](StateId s) -> std::uint64_t {
    if (s == final_) return 1;
    if (done[s]) return memo[s];
    std::uint64_t total = 0;
    for (const auto& t : states_[s].out) total += count(t.target);
    done[s] = true;
    return memo[s] = total;
  };
  return count(q);
}

void RouteAutomaton::for_each_route(const std::function<void(const Route&)>& visit) const {
  std::vector<RouteSymbol> path;
  std::function<void(StateId)> dfs = [&](StateId q) {
    for (const auto& t : states_[q].out) {
      if (t.symbol.is_prefix()) {
        visit(Route(path, t.symbol.prefix_value()));
      } else {
        path.push_back(t.symbol);
        dfs(t.target);
        path.pop_back();
      }
    }
  };
  dfs(start_);
}

std::vector<Route> RouteAutomaton::enumerate_routes() const {
  std::vector<Route> out;
  out.reserve(route_count_);
  for_each_route([&](const Route& r) { out.push_back(r); });
  return out;
}

RouteSet RouteAutomaton::to_route_set() const {
  RouteSet set;
  for_each_route([&](const Route& r) { set.insert(r); });
  return set;
}

AutomatonStats RouteAutomaton::stats() const {
  AutomatonStats st;
  st.states = live_count_;
  st.transitions = transition_count_;
  st.routes = route_count_;
  std::unordered_set<std::uint64_t> prefixes;
  std::unordered_set<std::uint32_t> asns;
  for (const auto& s : states_) {
    if (!s.live) continue;
    for (const auto& t : s.out) {
      if (t.symbol.is_prefix()) {
        prefixes.insert(t.symbol.key());
      } else {
        asns.insert(t.symbol.as_value().value);
      }
    }
  }
  st.prefixes = prefixes.size();
  st.asns = asns.size();
  return st;
}

std::vector<StateId> RouteAutomaton::states() const {
  std::vector<StateId> ids;
  ids.reserve(live_count_);
  for (StateId q = 0; q < states_.size(); ++q) {
    if (states_[q].live) ids.push_back(q);
  }
  return ids;
}

std::vector<StateId> RouteAutomaton::canonical_order() const {
  using Key = std::tuple<std::uint64_t, std::uint32_t, StateId>;  // symbol, parent no., id
  std::vector<std::uint32_t> pending(states_.size(), 0);
  std::vector<std::pair<std::uint64_t, std::uint32_t>> best(
      states_.size(), {~std::uint64_t{0}, ~std::uint32_t{0}});
  for (const auto& s : states_) {
    if (!s.live) continue;
    for (const auto& t : s.out) ++pending[t.target];
  }

  std::priority_queue<Key, std::vector<Key>, std::greater<>> ready;
  std::vector<StateId> order;
  order.reserve(live_count_);
  ready.emplace(0, 0, start_);
  for (StateId q = 0; q < states_.size(); ++q) {
    // Unreachable roots only exist in a broken automaton; keep them visible.
    if (states_[q].live && q != start_ && pending[q] == 0) ready.emplace(~std::uint64_t{0}, 0, q);
  }
  while (!ready.empty()) {
    const StateId q = std::get<2>(ready.top());
    ready.pop();
    const auto number = static_cast<std::uint32_t>(order.size());
    order.push_back(q);
    for (const auto& t : states_[q].out) {
      best[t.target] = std::min(best[t.target], {t.symbol.key(), number});
      if (--pending[t.target] == 0) {
        ready.emplace(best[t.target].first, best[t.target].second, t.target);
      }
    }
  }
  return order;
}

void RouteAutomaton::check_invariants() const {
  auto fail = [](const std::string& what) { throw Error(ErrorCode::ContractViolation, what); };

  std::vector<std::uint32_t> in(states_.size(), 0);
  std::size_t live = 0;
  std::size_t transitions = 0;
  for (StateId q = 0; q < states_.size(); ++q) {
    const State& s = states_[q];
    if (!s.live) continue;
    ++live;
    transitions += s.out.size();
    std::uint64_t hash = 0;
    for (std::size_t i = 0; i < s.out.size(); ++i) {
      const Transition& t = s.out[i];
      if (i > 0 && !(s.out[i - 1].symbol < t.symbol)) fail("transitions not strictly sorted");
      if (!is_state(t.target)) fail("transition to dead id");
      if (t.symbol.is_prefix() != (t.target == final_)) fail("accepting-state labelling broken");
      ++in[t.target];
      hash += transition_hash(t.symbol, t.target);
    }
    if (hash != s.hash) fail("stale signature hash");
    if (q == final_ && !s.out.empty()) fail("accepting state has transitions");
    if (q != final_ && q != start_ && s.out.empty()) fail("dead-end state");
    if (q != start_ && q != final_ && !s.registered) fail("state missing from register");
  }
  for (StateId q = 0; q < states_.size(); ++q) {
    if (!states_[q].live) continue;
    if (in[q] != states_[q].in) fail("in-degree bookkeeping mismatch");
    if (q != start_ && q != final_ && in[q] == 0) fail("orphan state");
  }
  if (live != live_count_) fail("state count mismatch");
  if (transitions != transition_count_) fail("transition count mismatch");
  if (register_.size() + 2 != live_count_) fail("register size mismatch");

  const auto order = canonical_order();
  if (order.size() != live_count_) fail("cycle detected");
  if (order.front() != start_ || order.back() != final_) fail("start/accepting placement");

  std::unordered_map<std::uint64_t, std::vector<StateId>> by_hash;
  for (StateId q = 0; q < states_.size(); ++q) {
    if (!states_[q].live || q == start_ || q == final_) continue;
    auto& bucket = by_hash[states_[q].hash];
    for (StateId other : bucket) {
      if (states_[other].out == states_[q].out) fail("two equivalent states (not minimal)");
    }
    bucket.push_back(q);
  }
  if (right_language_size(start_) != route_count_ &&
      !(route_count_ == 0 && states_[start_].out.empty())) {
    fail("route count mismatch");
  }
}

}  // namespace cair
