#include "cair/report.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <vector>

namespace cair::report {

namespace {

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string join_symbols(const std::vector<RouteSymbol>& word) {
  std::string out;
  for (const auto& s : word) {
    if (!out.empty()) out += ' ';
    out += s.to_string();
  }
  return out;
}

std::string as_text(AsNumber a) { return "AS" + std::to_string(a.value); }

// Left-aligned first column, right-aligned rest.
class Table {
 public:
  explicit Table(std::vector<std::string> header) { rows_.push_back(std::move(header)); }
  void add(std::vector<std::string> row) { rows_.push_back(std::move(row)); }

  void write(std::ostream& out) const {
    std::vector<std::size_t> width;
    for (const auto& row : rows_) {
      width.resize(std::max(width.size(), row.size()), 0);
      for (std::size_t i = 0; i < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
    }
    for (std::size_t r = 0; r < rows_.size(); ++r) {
      const auto& row = rows_[r];
      for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) out << "  ";
        const std::string pad(width[i] - row[i].size(), ' ');
        out << (i == 0 ? row[i] + pad : pad + row[i]);
      }
      out << '\n';
      if (r == 0) {
        std::size_t total = 0;
        for (std::size_t w : width) total += w;
        out << std::string(total + 2 * (width.size() - 1), '-') << '\n';
      }
    }
  }

 private:
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace

std::optional<Mode> parse_mode(const std::string& name) {
  if (name == "table") return Mode::Table;
  if (name == "records") return Mode::Records;
  return std::nullopt;
}

std::string format_pct(double pct) {
  if (std::isinf(pct)) return pct > 0 ? "+inf%" : "-inf%";
  return (pct >= 0 ? "+" : "") + fixed(pct, 2) + "%";
}

void write_ingest(std::ostream& out, Mode mode, const IngestReport& r) {
  if (mode == Mode::Records) {
    out << "ingest\t" << r.route_records << '\t' << r.accepted << '\t' << r.dropped_as_set << '\t'
        << r.dropped_loop << '\t' << r.dropped_malformed << '\t' << r.duplicate_routes << '\t'
        << r.distinct_prefixes << '\t' << r.distinct_asns << '\t' << r.distinct_paths << '\t'
        << r.skipped_lines << '\n';
    return;
  }
  Table t({"ingest", "count"});
  t.add({"route records", std::to_string(r.route_records)});
  t.add({"accepted", std::to_string(r.accepted)});
  t.add({"dropped (AS_SET)", std::to_string(r.dropped_as_set)});
  t.add({"dropped (loop)", std::to_string(r.dropped_loop)});
  t.add({"dropped (malformed)", std::to_string(r.dropped_malformed)});
  t.add({"duplicate routes", std::to_string(r.duplicate_routes)});
  t.add({"IP prefixes", std::to_string(r.distinct_prefixes)});
  t.add({"AS numbers", std::to_string(r.distinct_asns)});
  t.add({"unique AS paths", std::to_string(r.distinct_paths)});
  t.add({"skipped lines", std::to_string(r.skipped_lines)});
  t.write(out);
}

void write_stats(std::ostream& out, Mode mode, const AutomatonStats& s) {
  if (mode == Mode::Records) {
    out << "stats\t" << s.states << '\t' << s.transitions << '\t' << s.routes << '\t' << s.prefixes
        << '\t' << s.asns << '\n';
    return;
  }
  Table t({"automaton", "count"});
  t.add({"states", std::to_string(s.states)});
  t.add({"transitions", std::to_string(s.transitions)});
  t.add({"routes", std::to_string(s.routes)});
  t.add({"prefixes", std::to_string(s.prefixes)});
  t.add({"AS numbers", std::to_string(s.asns)});
  t.write(out);
}

void write_alert_record(std::ostream& out, const InterceptionAlert& a) {
  out << "alert\t" << a.victim_as.value << '\t' << a.p_v.to_string() << '\t'
      << a.p_prime_v.to_string() << '\t' << (a.s ? std::to_string(a.s->value) : "-") << '\t'
      << a.t.value << '\t' << join_symbols(a.artificial_segment.chain_labels) << '\t'
      << join_symbols(a.contradiction.witness) << '\n';
}

void write_expected_alert(std::ostream& out, const ExpectedAlert& a) {
  out << "expected_alert\t" << a.victim_as.value << '\t' << a.p_v.to_string() << '\t'
      << a.p_prime_v.to_string() << '\t' << (a.s ? std::to_string(a.s->value) : "-") << '\t'
      << a.t.value << '\n';
}

void write_detection(std::ostream& out, Mode mode, const DetectionReport& r) {
  const auto& c = r.counts;
  if (mode == Mode::Records) {
    out << "detect\t" << c.artificial_segments << '\t' << c.nonuniform << '\t' << c.subprefix_alerts
        << '\t' << c.sibling_suppressed << '\t' << c.alerts << '\n';
    for (const auto& a : r.alerts) write_alert_record(out, a);
    return;
  }
  Table t({"stage", "count"});
  t.add({"artificial path segments", std::to_string(c.artificial_segments)});
  t.add({"nonuniform redistribution", std::to_string(c.nonuniform)});
  t.add({"subprefix alerts", std::to_string(c.subprefix_alerts)});
  t.add({"sibling suppressed", std::to_string(c.sibling_suppressed)});
  t.add({"interception alerts", std::to_string(c.alerts)});
  t.write(out);
  for (const auto& a : r.alerts) {
    out << "\nvictim " << as_text(a.victim_as) << "  " << a.p_v.to_string() << " <- "
        << a.p_prime_v.to_string() << '\n'
        << "  artificial segment: " << join_symbols(a.artificial_segment.chain_labels) << '\n'
        << "  contradicting path: " << join_symbols(a.contradiction.witness) << '\n'
        << "  suspected upstreams: s=" << (a.s ? as_text(*a.s) : "?") << " t=" << as_text(a.t)
        << '\n';
  }
}

void write_dominance(std::ostream& out, Mode mode, const DominanceReport& r, std::size_t top) {
  auto rows = ranked(r);
  if (rows.size() > top) rows.resize(top);
  if (mode == Mode::Records) {
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out << "dominance\t" << r.snapshot_label << '\t' << i + 1 << '\t' << rows[i].first.value << '\t'
          << rows[i].second << '\n';
    }
    return;
  }
  Table t({"rank", "AS", "|Q(u)|"});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    t.add({std::to_string(i + 1), as_text(rows[i].first), std::to_string(rows[i].second)});
  }
  if (!r.snapshot_label.empty()) out << "snapshot " << r.snapshot_label << '\n';
  t.write(out);
}

void write_diff(std::ostream& out, Mode mode, const DominanceDiff& d, std::size_t top,
                const LeakVerdict& v) {
  const auto movers = top_movers(d, top);
  const std::string originator = v.suspected_originator ? std::to_string(v.suspected_originator->value) : "-";
  if (mode == Mode::Records) {
    out << "diff\t" << d.before_label << '\t' << d.after_label << '\t' << d.changed_as_count << '\t'
        << fixed(d.changed_as_fraction, 6) << '\t' << d.total_state_churn << '\n';
    for (std::size_t i = 0; i < movers.size(); ++i) {
      const auto& m = movers[i];
      out << "mover\t" << i + 1 << '\t' << m.asn.value << '\t' << m.change.before << '\t'
          << m.change.after << '\t' << m.change.delta << '\t' << format_pct(m.change.delta_pct) << '\n';
    }
    out << "leak\t" << (v.triggered ? 1 : 0) << '\t' << originator << '\t'
        << format_pct(v.originator_gain_pct) << '\t' << fixed(v.changed_as_fraction, 6) << '\t'
        << fixed(v.thresholds.gain_threshold_pct, 2) << '\t'
        << fixed(v.thresholds.churn_threshold_fraction, 6) << '\n';
    for (const auto& [asn, delta] : v.catalysts) out << "catalyst\t" << asn.value << '\t' << delta << '\n';
    for (const auto& [asn, delta] : v.victims) out << "victim\t" << asn.value << '\t' << delta << '\n';
    return;
  }
  out << "interval " << (d.before_label.empty() ? "before" : d.before_label) << " -> "
      << (d.after_label.empty() ? "after" : d.after_label) << '\n';
  Table t({"rank", "AS", "before", "after", "delta", "delta %"});
  for (std::size_t i = 0; i < movers.size(); ++i) {
    const auto& m = movers[i];
    t.add({std::to_string(i + 1), as_text(m.asn), std::to_string(m.change.before),
           std::to_string(m.change.after),
           (m.change.delta > 0 ? "+" : "") + std::to_string(m.change.delta),
           format_pct(m.change.delta_pct)});
  }
  t.write(out);
  out << "\nchanged ASes: " << d.changed_as_count << " (" << fixed(100.0 * d.changed_as_fraction, 2)
      << "%), state churn: " << d.total_state_churn << '\n'
      << "leak verdict: " << (v.triggered ? "TRIGGERED" : "not triggered")
      << " (gain >= " << fixed(v.thresholds.gain_threshold_pct, 2) << "%, churn >= "
      << fixed(100.0 * v.thresholds.churn_threshold_fraction, 2) << "%)\n";
  if (v.suspected_originator) {
    out << "suspected originator: " << as_text(*v.suspected_originator) << " "
        << format_pct(v.originator_gain_pct) << '\n';
  }
  for (const auto& [asn, delta] : v.catalysts) out << "catalyst: " << as_text(asn) << " +" << delta << '\n';
  for (const auto& [asn, delta] : v.victims) out << "victim: " << as_text(asn) << " " << delta << '\n';
}

void write_comparison(std::ostream& out, Mode mode, const SizeComparison& c) {
  if (mode == Mode::Records) {
    out << "compare\tautomaton\t" << c.automaton_states << '\t' << c.automaton_transitions << '\n'
        << "compare\ttrie\t" << c.trie_nodes << '\t' << c.trie_edges << '\n'
        << "compare\tgraph\t" << c.graph_nodes << '\t' << c.graph_links << '\n'
        << "ratio\ttrie/automaton\t" << fixed(c.trie_to_automaton_nodes(), 4) << '\t'
        << fixed(c.trie_to_automaton_edges(), 4) << '\n'
        << "ratio\tautomaton/graph\t" << fixed(c.automaton_to_graph_nodes(), 4) << '\t'
        << fixed(c.automaton_to_graph_edges(), 4) << '\n';
    return;
  }
  Table t({"structure", "nodes", "edges"});
  t.add({"route automaton", std::to_string(c.automaton_states), std::to_string(c.automaton_transitions)});
  t.add({"trie (root incl.)", std::to_string(c.trie_nodes), std::to_string(c.trie_edges)});
  t.add({"AS graph", std::to_string(c.graph_nodes), std::to_string(c.graph_links)});
  t.add({"trie / automaton", fixed(c.trie_to_automaton_nodes(), 2) + "x",
         fixed(c.trie_to_automaton_edges(), 2) + "x"});
  t.add({"automaton / graph", fixed(100.0 * c.automaton_to_graph_nodes(), 2) + "%",
         fixed(c.automaton_to_graph_edges(), 2) + "x"});
  t.write(out);
}

}  // namespace cair::report
