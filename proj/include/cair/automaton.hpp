#pragma once

// Minimal deterministic acyclic route automaton with incremental add/remove.
//
// Construction follows the on-the-fly minimization scheme for acyclic
// automata: walk the common path (cloning confluence states so no unobserved
// word appears), append the remaining suffix, then walk back along the word
// and either merge each touched state into an equivalent registered state or
// register it. Equivalence is decided on the outgoing transition signature
// alone because every successor is already unique when it is examined.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cair/frl.hpp"

namespace cair {

using StateId = std::uint32_t;
inline constexpr StateId kNoState = ~StateId{0};

struct Transition {
  RouteSymbol symbol;
  StateId target = kNoState;

  friend bool operator==(const Transition&, const Transition&) = default;
};

struct MutationSummary {
  bool changed = false;
  std::size_t states_added = 0;  // includes clones
  std::size_t states_removed = 0;
  std::size_t clones = 0;
};

struct AutomatonStats {
  std::size_t states = 0;
  std::size_t transitions = 0;
  std::size_t routes = 0;
  std::size_t prefixes = 0;
  std::size_t asns = 0;

  friend bool operator==(const AutomatonStats&, const AutomatonStats&) = default;
};

// Restricts DOT output to the accepting paths that use a given prefix
// and/or AS (any prepend instance).
struct DotFilter {
  std::optional<IpPrefix> prefix;
  std::optional<AsNumber> asn;
};

class RouteAutomaton {
 public:
  static constexpr std::uint16_t kFormatVersion = 1;

  RouteAutomaton();

  static RouteAutomaton build(const RouteSet& routes);

  MutationSummary add_route(const Route& route);
  MutationSummary remove_route(const Route& route);

  bool accepts(const Route& route) const;
  // Extended transition function; nullopt stands for the dead state.
  std::optional<StateId> walk(std::span<const RouteSymbol> partial) const;
  // Number of suffix words accepted from q; 1 for the accepting state.
  std::uint64_t right_language_size(StateId q) const;

  std::vector<Route> enumerate_routes() const;
  void for_each_route(const std::function<void(const Route&)>& visit) const;
  RouteSet to_route_set() const;

  AutomatonStats stats() const;

  StateId start() const noexcept { return start_; }
  StateId accepting() const noexcept { return final_; }
  bool is_state(StateId q) const noexcept { return q < states_.size() && states_[q].live; }
  std::span<const Transition> transitions(StateId q) const;
  std::optional<StateId> target(StateId q, RouteSymbol symbol) const;
  std::uint32_t in_degree(StateId q) const;

  std::size_t state_count() const noexcept { return live_count_; }
  std::size_t transition_count() const noexcept { return transition_count_; }
  std::size_t route_count() const noexcept { return route_count_; }
  // Upper bound on state ids, for dense per-state arrays.
  std::size_t id_bound() const noexcept { return states_.size(); }
  std::vector<StateId> states() const;

  // Canonical topological numbering: Kahn's algorithm where the ready state
  // with the smallest (incoming symbol, numbered parent) pair goes first.
  // Isomorphic automata get identical numberings, q0 first and q_f last.
  std::vector<StateId> canonical_order() const;

  // Throws Error{ContractViolation} describing the first broken invariant.
  void check_invariants() const;

  void save(std::ostream& out) const;
  void save(const std::string& path) const;
  static RouteAutomaton load(std::istream& in);
  static RouteAutomaton load(const std::string& path);

  std::string export_dot(const DotFilter& filter = {}) const;

 private:
  struct State {
    std::vector<Transition> out;  // sorted by symbol
    std::uint64_t hash = 0;       // order-independent signature hash
    std::uint32_t in = 0;
    bool live = false;
    bool registered = false;
  };

  StateId new_state();
  StateId clone_state(StateId q);
  void delete_state(StateId q);
  void set_target(StateId q, RouteSymbol symbol, StateId target);
  void erase_transition(StateId q, RouteSymbol symbol);
  std::optional<StateId> find_equivalent(StateId q) const;
  void register_state(StateId q);
  void unregister_state(StateId q);
  // Clones confluence states along `path` (from index 1) so that the path
  // becomes private, and unregisters every path state whose signature is
  // about to change. `word` labels path[i-1] -> path[i].
  void privatize_path(std::vector<StateId>& path, std::span<const RouteSymbol> word,
                      std::size_t last, MutationSummary& summary);

  std::vector<State> states_;
  std::vector<StateId> free_;
  std::unordered_multimap<std::uint64_t, StateId> register_;
  StateId start_ = kNoState;
  StateId final_ = kNoState;
  std::size_t live_count_ = 0;
  std::size_t transition_count_ = 0;
  std::size_t route_count_ = 0;
};

}  // namespace cair
