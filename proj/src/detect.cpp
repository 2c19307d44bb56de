#include "cair/detect.hpp"

#include <algorithm>
#include <deque>
#include <tuple>

namespace cair {

namespace {

bool single_as_out(const RouteAutomaton& a, StateId q) {
  const auto out = a.transitions(q);
  return out.size() == 1 && out.front().symbol.is_as();
}

std::vector<IpPrefix> prefixes_of(const RouteAutomaton& a, StateId q) {
  std::vector<IpPrefix> out;
  for (const auto& t : a.transitions(q)) {
    if (t.symbol.is_prefix()) out.push_back(t.symbol.prefix_value());
  }
  return out;
}

// Shared per-snapshot tables: predecessors and BFS witness words.
class Scan {
 public:
  explicit Scan(const RouteAutomaton& a) : a_(a), preds_(a.id_bound()), parent_(a.id_bound()) {
    for (StateId q : a.states()) {
      for (const auto& t : a.transitions(q)) preds_[t.target].push_back({t.symbol, q});
    }
    // Breadth-first in symbol order: the first discovery of a state is its
    // shortest, then lexicographically smallest, word.
    std::vector<bool> seen(a.id_bound(), false);
    std::deque<StateId> queue{a.start()};
    seen[a.start()] = true;
    while (!queue.empty()) {
      const StateId q = queue.front();
      queue.pop_front();
      for (const auto& t : a.transitions(q)) {
        if (seen[t.target]) continue;
        seen[t.target] = true;
        parent_[t.target] = {t.symbol, q};
        queue.push_back(t.target);
      }
    }
  }

  const std::vector<Transition>& preds(StateId q) const { return preds_[q]; }

  std::vector<RouteSymbol> witness(StateId q) const {
    std::vector<RouteSymbol> word;
    while (q != a_.start()) {
      word.push_back(parent_[q].symbol);
      q = parent_[q].target;
    }
    std::reverse(word.begin(), word.end());
    return word;
  }

  std::vector<Contradiction> contradictions(const ArtificialSegment& seg) const {
    const AsNumber v = seg.victim();
    std::set<StateId> candidates;
    for (StateId q : a_.states()) {
      for (const auto& t : a_.transitions(q)) {
        if (t.symbol.is_as() && t.symbol.as_value() == v && t.target != seg.terminal()) {
          candidates.insert(t.target);
        }
      }
    }
    std::vector<Contradiction> out;
    for (StateId c : candidates) {
      auto prefixes = prefixes_of(a_, c);
      if (prefixes.empty()) continue;
      out.push_back({c, witness(c), std::move(prefixes)});
    }
    std::sort(out.begin(), out.end(), [](const Contradiction& x, const Contradiction& y) {
      if (x.witness.size() != y.witness.size()) return x.witness.size() < y.witness.size();
      return x.witness < y.witness;
    });
    return out;
  }

 private:
  const RouteAutomaton& a_;
  std::vector<std::vector<Transition>> preds_;  // (symbol, source)
  std::vector<Transition> parent_;              // (symbol, parent)
};

std::vector<ArtificialSegment> segments_with(const RouteAutomaton& a, const Scan& scan,
                                             const DetectorConfig& config) {
  struct Keyed {
    ArtificialSegment seg;
    std::vector<RouteSymbol> entry_witness;
  };
  std::vector<Keyed> found;
  for (StateId q : a.states()) {
    if (!single_as_out(a, q)) continue;
    const bool inner = std::any_of(scan.preds(q).begin(), scan.preds(q).end(),
                                   [&](const Transition& p) { return single_as_out(a, p.target); });
    if (inner) continue;

    ArtificialSegment seg;
    seg.entry_state = q;
    StateId cur = q;
    while (single_as_out(a, cur)) {
      const Transition& t = a.transitions(cur).front();
      seg.chain_labels.push_back(t.symbol);
      seg.chain_states.push_back(t.target);
      cur = t.target;
    }
    const auto out = a.transitions(cur);
    if (out.empty()) continue;
    if (!std::all_of(out.begin(), out.end(), [](const Transition& t) { return t.symbol.is_prefix(); })) {
      continue;
    }
    if (seg.segment_length() < config.min_segment_length || seg.backhaul_with_victim().empty()) {
      continue;
    }
    seg.terminal_prefixes = prefixes_of(a, cur);
    found.push_back({std::move(seg), scan.witness(q)});
  }
  std::sort(found.begin(), found.end(), [](const Keyed& x, const Keyed& y) {
    return std::tie(x.seg.chain_labels.back(), x.entry_witness, x.seg.chain_labels) <
           std::tie(y.seg.chain_labels.back(), y.entry_witness, y.seg.chain_labels);
  });
  std::vector<ArtificialSegment> out;
  out.reserve(found.size());
  for (auto& k : found) out.push_back(std::move(k.seg));
  return out;
}

// Last AS before the trailing run of v in a word, if any.
std::optional<AsNumber> neighbour_before(const std::vector<RouteSymbol>& word, AsNumber v) {
  std::size_t i = word.size();
  while (i > 0 && (word[i - 1].is_prefix() || word[i - 1].as_value() == v)) --i;
  if (i == 0) return std::nullopt;
  return word[i - 1].as_value();
}

bool same_organization(const DetectorConfig& config, const std::vector<AsNumber>& members) {
  for (const auto& group : config.sibling_groups) {
    if (std::all_of(members.begin(), members.end(),
                    [&](AsNumber m) { return group.count(m) > 0; })) {
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<RouteSymbol> ArtificialSegment::backhaul_with_victim() const {
  std::size_t i = 1;
  while (i < chain_labels.size() && chain_labels[i].as_value() == chain_labels[0].as_value()) ++i;
  return {chain_labels.begin() + static_cast<std::ptrdiff_t>(i), chain_labels.end()};
}

std::size_t ArtificialSegment::segment_length() const {
  const auto w = backhaul_with_victim();
  return static_cast<std::size_t>(
      std::count_if(w.begin(), w.end(), [](RouteSymbol s) { return s.prepend_index() == 1; }));
}

std::vector<ArtificialSegment> find_artificial_segments(const RouteAutomaton& automaton,
                                                        const DetectorConfig& config) {
  return segments_with(automaton, Scan(automaton), config);
}

std::vector<Contradiction> contradicting_states(const RouteAutomaton& automaton,
                                                const ArtificialSegment& segment) {
  return Scan(automaton).contradictions(segment);
}

std::optional<Contradiction> check_nonuniformity(const RouteAutomaton& automaton,
                                                 const ArtificialSegment& segment) {
  auto all = contradicting_states(automaton, segment);
  if (all.empty()) return std::nullopt;
  return std::move(all.front());
}

DetectionReport detect(const RouteAutomaton& automaton, const DetectorConfig& config) {
  if (config.min_segment_length < 1) {
    throw Error(ErrorCode::ContractViolation, "min_segment_length must be at least 1");
  }
  const Scan scan(automaton);
  DetectionReport report;
  report.segments = segments_with(automaton, scan, config);
  report.counts.artificial_segments = report.segments.size();

  std::vector<InterceptionAlert> raw;
  for (const auto& seg : report.segments) {
    const auto contradictions = scan.contradictions(seg);
    if (contradictions.empty()) continue;
    ++report.counts.nonuniform;

    const AsNumber v = seg.victim();
    const auto forged_word = [&] {
      auto w = scan.witness(seg.entry_state);
      w.insert(w.end(), seg.chain_labels.begin(), seg.chain_labels.end());
      return w;
    }();
    std::optional<AsNumber> s;
    const auto& entry_preds = scan.preds(seg.entry_state);
    if (!entry_preds.empty() &&
        std::all_of(entry_preds.begin(), entry_preds.end(), [&](const Transition& p) {
          return p.symbol.as_value() == entry_preds.front().symbol.as_value();
        })) {
      s = entry_preds.front().symbol.as_value();
    }

    for (const auto& c : contradictions) {
      for (const IpPrefix& pv : c.prefixes) {
        for (const IpPrefix& ppv : seg.terminal_prefixes) {
          const bool sub = config.require_strict_subprefix
                               ? is_strict_subprefix(ppv, pv)
                               : (ppv.length >= pv.length && pv.covers(ppv.base));
          if (!sub) continue;
          ++report.counts.subprefix_alerts;
          std::vector<AsNumber> members{v};
          if (auto n = neighbour_before(forged_word, v)) members.push_back(*n);
          if (auto n = neighbour_before(c.witness, v)) members.push_back(*n);
          if (same_organization(config, members)) {
            ++report.counts.sibling_suppressed;
            continue;
          }
          raw.push_back({v, pv, ppv, seg, c, s, seg.chain_labels.front().as_value()});
        }
      }
    }
  }

  // Stable: within one key the earliest segment and best witness win.
  std::stable_sort(raw.begin(), raw.end(), [](const InterceptionAlert& x, const InterceptionAlert& y) {
    return std::tie(x.victim_as, x.p_prime_v, x.p_v) < std::tie(y.victim_as, y.p_prime_v, y.p_v);
  });
  for (auto& alert : raw) {
    if (!report.alerts.empty()) {
      const auto& last = report.alerts.back();
      if (last.victim_as == alert.victim_as && last.p_v == alert.p_v &&
          last.p_prime_v == alert.p_prime_v) {
        continue;
      }
    }
    report.alerts.push_back(std::move(alert));
  }
  report.counts.alerts = report.alerts.size();
  return report;
}

std::vector<InterceptionAlert> raise_alerts(const RouteAutomaton& automaton,
                                            const DetectorConfig& config) {
  return detect(automaton, config).alerts;
}

}  // namespace cair
