#pragma once

// Interception search pattern over a route automaton.
//
// A segment is entered at q_a, whose single outgoing AS label is t. From
// there each state has exactly one outgoing AS transition until q'_v, which
// carries prefix transitions only. The labels after t's prepend run form
// w^a_v and end with the victim AS v. A segment is nonuniform when some
// other state q_v, entered over a v-labelled transition, also announces
// prefixes; an alert is raised when q'_v announces a subprefix of one of
// q_v's prefixes.

#include <cstddef>
#include <optional>
#include <set>
#include <vector>

#include "cair/automaton.hpp"

namespace cair {

struct DetectorConfig {
  std::size_t min_segment_length = 3;  // AS hops in w^a_v
  std::vector<std::set<AsNumber>> sibling_groups;
  bool require_strict_subprefix = true;
};

struct ArtificialSegment {
  StateId entry_state = kNoState;          // q_a
  std::vector<RouteSymbol> chain_labels;   // t, then w^a_v
  std::vector<StateId> chain_states;       // delta(q_a, t) ... q'_v
  std::vector<IpPrefix> terminal_prefixes;

  AsNumber victim() const { return chain_labels.back().as_value(); }
  StateId terminal() const { return chain_states.back(); }
  // Labels after the first AS's prepend run.
  std::vector<RouteSymbol> backhaul_with_victim() const;
  // AS hops in w^a_v (prepend instances count once).
  std::size_t segment_length() const;
};

struct Contradiction {
  StateId state = kNoState;          // q_v
  std::vector<RouteSymbol> witness;  // shortest, then smallest, word from q0 to q_v
  std::vector<IpPrefix> prefixes;
};

struct InterceptionAlert {
  AsNumber victim_as;
  IpPrefix p_v;
  IpPrefix p_prime_v;
  ArtificialSegment artificial_segment;
  Contradiction contradiction;
  std::optional<AsNumber> s;
  AsNumber t;
};

struct DetectionCounts {
  std::size_t artificial_segments = 0;
  std::size_t nonuniform = 0;
  std::size_t subprefix_alerts = 0;
  std::size_t sibling_suppressed = 0;
  std::size_t alerts = 0;
};

struct DetectionReport {
  std::vector<ArtificialSegment> segments;
  std::vector<InterceptionAlert> alerts;
  DetectionCounts counts;
};

// Segments ordered by victim, then the entry state's witness word, then labels.
std::vector<ArtificialSegment> find_artificial_segments(const RouteAutomaton& automaton,
                                                        const DetectorConfig& config = {});

// Every contradicting state for the segment, best witness first.
std::vector<Contradiction> contradicting_states(const RouteAutomaton& automaton,
                                                const ArtificialSegment& segment);
std::optional<Contradiction> check_nonuniformity(const RouteAutomaton& automaton,
                                                 const ArtificialSegment& segment);

// Alerts sorted by victim AS, then p'_v, then p_v; one per (v, p_v, p'_v).
std::vector<InterceptionAlert> raise_alerts(const RouteAutomaton& automaton,
                                            const DetectorConfig& config = {});

DetectionReport detect(const RouteAutomaton& automaton, const DetectorConfig& config = {});

}  // namespace cair
