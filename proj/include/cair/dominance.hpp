#pragma once

// Routing dominance |Q(u)|: the number of states reachable by AS-labelled
// walks whose first label is u (all prepend instances of u aggregated).
// Snapshot diffs and a threshold-based route-leak verdict build on it.

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cair/automaton.hpp"
#include "cair/kernels.hpp"

namespace cair {

struct DominanceReport {
  std::string snapshot_label;
  std::map<AsNumber, std::uint64_t> per_as;
};

struct DominanceOptions {
  // Target states per bitset block, in 64-bit words; 0 picks automatically
  // under a ~256 MiB working-set budget.
  std::size_t block_words = 0;
  unsigned threads = 0;  // 0: worker_threads()
  const kernels::BitsetKernels* kernels = nullptr;  // nullptr: kernels::active()
};

DominanceReport dominance(const RouteAutomaton& automaton, std::string label = {},
                          const DominanceOptions& options = {});

// Ranked view: count descending, AS ascending.
std::vector<std::pair<AsNumber, std::uint64_t>> ranked(const DominanceReport& report);

inline constexpr double kNewcomerGain = std::numeric_limits<double>::infinity();

struct AsDelta {
  std::uint64_t before = 0;
  std::uint64_t after = 0;
  std::int64_t delta = 0;
  double delta_pct = 0.0;  // against `before`; kNewcomerGain when before == 0 < after
};

struct DominanceDiff {
  std::string before_label;
  std::string after_label;
  std::map<AsNumber, AsDelta> per_as;
  std::size_t changed_as_count = 0;
  double changed_as_fraction = 0.0;  // changed / ASes present in either report
  std::uint64_t total_state_churn = 0;
};

DominanceDiff diff(const DominanceReport& before, const DominanceReport& after);

struct Mover {
  AsNumber asn;
  AsDelta change;
};

// Top n by |delta|, ties by AS number ascending.
std::vector<Mover> top_movers(const DominanceDiff& diff, std::size_t n);

struct LeakThresholds {
  double gain_threshold_pct = 500.0;
  double churn_threshold_fraction = 0.05;
  std::size_t top_k = 5;
};

struct LeakVerdict {
  std::optional<AsNumber> suspected_originator;
  double originator_gain_pct = 0.0;
  std::vector<std::pair<AsNumber, std::int64_t>> catalysts;  // other top gainers
  std::vector<std::pair<AsNumber, std::int64_t>> victims;    // top losers
  bool triggered = false;
  double changed_as_fraction = 0.0;
  LeakThresholds thresholds;
  std::string before_label;
  std::string after_label;
};

LeakVerdict assess_leak(const DominanceDiff& diff, const LeakThresholds& thresholds = {});

}  // namespace cair
