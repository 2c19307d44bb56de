#include "cair/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>

#include "cair/parallel.hpp"

namespace cair {

namespace {

constexpr std::size_t kWorkingSetWords = std::size_t{1} << 25;  // 256 MiB of bitset rows

}  // namespace

// Reach sets are computed per block of target states: every state gets a
// row holding the block's bits it reaches over AS transitions, filled in
// reverse topological order by OR-ing its children's rows. Each AS then
// ORs the rows of its transition targets and counts the bits.
DominanceReport dominance(const RouteAutomaton& automaton, std::string label,
                          const DominanceOptions& options) {
  DominanceReport report;
  report.snapshot_label = std::move(label);

  const auto order = automaton.canonical_order();
  const std::size_t n = order.size();
  std::vector<std::uint32_t> pos(automaton.id_bound(), 0);
  for (std::uint32_t i = 0; i < n; ++i) pos[order[i]] = i;

  std::vector<std::vector<std::uint32_t>> children(n);
  std::map<AsNumber, std::vector<std::uint32_t>> targets_by_as;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (const auto& t : automaton.transitions(order[i])) {
      if (!t.symbol.is_as()) continue;
      children[i].push_back(pos[t.target]);
      targets_by_as[t.symbol.as_value()].push_back(pos[t.target]);
    }
  }
  if (targets_by_as.empty()) return report;

  std::vector<AsNumber> asns;
  std::vector<std::vector<std::uint32_t>> groups;
  for (auto& [asn, targets] : targets_by_as) {
    std::sort(targets.begin(), targets.end());
    targets.erase(std::unique(targets.begin(), targets.end()), targets.end());
    asns.push_back(asn);
    groups.push_back(std::move(targets));
  }

  const auto& k = options.kernels ? *options.kernels : kernels::active();
  const unsigned threads = options.threads ? options.threads : worker_threads();
  const std::size_t total_words = (n + 63) / 64;
  std::size_t block_words = options.block_words;
  if (block_words == 0) {
    const std::size_t budget = kWorkingSetWords / std::max(1u, threads);
    block_words = std::clamp<std::size_t>(budget / (n + 1), 1, total_words);
  }
  const std::size_t block_bits = block_words * 64;
  const std::size_t blocks = (n + block_bits - 1) / block_bits;

  std::vector<std::vector<std::uint64_t>> partial(std::min<std::size_t>(threads, blocks));
  parallel_slices(blocks, static_cast<unsigned>(partial.size()),
                  [&](unsigned worker, std::size_t first, std::size_t last) {
    auto& counts = partial[worker];
    counts.assign(groups.size(), 0);
    std::vector<std::uint64_t> rows;
    std::vector<std::uint64_t> acc(block_words);
    for (std::size_t b = first; b < last; ++b) {
      const std::size_t lo = b * block_bits;
      const std::size_t hi = std::min(n, lo + block_bits);
      // States after the block reach nothing inside it.
      rows.assign(hi * block_words, 0);
      for (std::size_t i = hi; i-- > 0;) {
        std::uint64_t* row = rows.data() + i * block_words;
        if (i >= lo) row[(i - lo) / 64] |= std::uint64_t{1} << ((i - lo) % 64);
        for (std::uint32_t c : children[i]) {
          if (c < hi) k.or_into(row, rows.data() + std::size_t{c} * block_words, block_words);
        }
      }
      for (std::size_t g = 0; g < groups.size(); ++g) {
        const auto& targets = groups[g];
        const auto end = std::lower_bound(targets.begin(), targets.end(), hi);
        if (end == targets.begin()) continue;
        if (end - targets.begin() == 1) {
          counts[g] += k.popcount(rows.data() + std::size_t{targets.front()} * block_words,
                                  block_words);
          continue;
        }
        std::fill(acc.begin(), acc.end(), 0);
        for (auto it = targets.begin(); it != end; ++it) {
          k.or_into(acc.data(), rows.data() + std::size_t{*it} * block_words, block_words);
        }
        counts[g] += k.popcount(acc.data(), block_words);
      }
    }
  });

  for (std::size_t g = 0; g < groups.size(); ++g) {
    std::uint64_t total = 0;
    for (const auto& counts : partial) {
      if (!counts.empty()) total += counts[g];
    }
    report.per_as.emplace(asns[g], total);
  }
  return report;
}

std::vector<std::pair<AsNumber, std::uint64_t>> ranked(const DominanceReport& report) {
  std::vector<std::pair<AsNumber, std::uint64_t>> out(report.per_as.begin(), report.per_as.end());
  std::stable_sort(out.begin(), out.end(),
                   [](const auto& a, const auto& b) { return a.second > b.second; });
  return out;
}

DominanceDiff diff(const DominanceReport& before, const DominanceReport& after) {
  DominanceDiff d;
  d.before_label = before.snapshot_label;
  d.after_label = after.snapshot_label;
  for (const auto& [asn, count] : before.per_as) d.per_as[asn].before = count;
  for (const auto& [asn, count] : after.per_as) d.per_as[asn].after = count;
  for (auto& [asn, change] : d.per_as) {
    change.delta = static_cast<std::int64_t>(change.after) - static_cast<std::int64_t>(change.before);
    if (change.before > 0) {
      change.delta_pct = 100.0 * static_cast<double>(change.delta) / static_cast<double>(change.before);
    } else {
      change.delta_pct = change.after > 0 ? kNewcomerGain : 0.0;
    }
    if (change.delta != 0) ++d.changed_as_count;
    d.total_state_churn += static_cast<std::uint64_t>(std::llabs(change.delta));
  }
  if (!d.per_as.empty()) {
    d.changed_as_fraction =
        static_cast<double>(d.changed_as_count) / static_cast<double>(d.per_as.size());
  }
  return d;
}

std::vector<Mover> top_movers(const DominanceDiff& diff, std::size_t n) {
  std::vector<Mover> all;
  all.reserve(diff.per_as.size());
  for (const auto& [asn, change] : diff.per_as) all.push_back({asn, change});
  std::stable_sort(all.begin(), all.end(), [](const Mover& a, const Mover& b) {
    return std::llabs(a.change.delta) > std::llabs(b.change.delta);
  });
  if (all.size() > n) all.resize(n);
  return all;
}

LeakVerdict assess_leak(const DominanceDiff& diff, const LeakThresholds& thresholds) {
  LeakVerdict v;
  v.thresholds = thresholds;
  v.changed_as_fraction = diff.changed_as_fraction;
  v.before_label = diff.before_label;
  v.after_label = diff.after_label;

  std::vector<Mover> gainers, losers;
  for (const auto& [asn, change] : diff.per_as) {
    if (change.delta > 0) gainers.push_back({asn, change});
    if (change.delta < 0) losers.push_back({asn, change});
  }
  std::stable_sort(gainers.begin(), gainers.end(),
                   [](const Mover& a, const Mover& b) { return a.change.delta > b.change.delta; });
  std::stable_sort(losers.begin(), losers.end(),
                   [](const Mover& a, const Mover& b) { return a.change.delta < b.change.delta; });
  if (gainers.size() > thresholds.top_k) gainers.resize(thresholds.top_k);
  if (losers.size() > thresholds.top_k) losers.resize(thresholds.top_k);

  if (!gainers.empty()) {
    // Largest relative gain among the top absolute gainers; the newcomer
    // sentinel (+inf) outranks every finite gain.
    auto best = std::max_element(gainers.begin(), gainers.end(), [](const Mover& a, const Mover& b) {
      return a.change.delta_pct < b.change.delta_pct;
    });
    v.suspected_originator = best->asn;
    v.originator_gain_pct = best->change.delta_pct;
    for (const auto& g : gainers) {
      if (g.asn != best->asn) v.catalysts.emplace_back(g.asn, g.change.delta);
    }
  }
  for (const auto& l : losers) v.victims.emplace_back(l.asn, l.change.delta);

  v.triggered = v.suspected_originator && v.originator_gain_pct >= thresholds.gain_threshold_pct &&
                diff.changed_as_fraction >= thresholds.churn_threshold_fraction;
  return v;
}

}  // namespace cair
