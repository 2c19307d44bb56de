#pragma once

// Text renderings shared by the CLI. Record mode writes one tab-separated
// line per item, first field naming the record type; table mode is for
// people. Field orders are listed in the README.

#include <iosfwd>
#include <optional>
#include <string>

#include "cair/baselines.hpp"
#include "cair/detect.hpp"
#include "cair/dominance.hpp"
#include "cair/ingest.hpp"
#include "cair/synth.hpp"

namespace cair::report {

enum class Mode { Table, Records };

std::optional<Mode> parse_mode(const std::string& name);

std::string format_pct(double pct);  // "+2239.00%", "-98.57%", "+inf%"

void write_ingest(std::ostream& out, Mode mode, const IngestReport& r);
void write_stats(std::ostream& out, Mode mode, const AutomatonStats& s);
void write_detection(std::ostream& out, Mode mode, const DetectionReport& r);
void write_alert_record(std::ostream& out, const InterceptionAlert& a);
void write_expected_alert(std::ostream& out, const ExpectedAlert& a);
void write_dominance(std::ostream& out, Mode mode, const DominanceReport& r, std::size_t top);
void write_diff(std::ostream& out, Mode mode, const DominanceDiff& d, std::size_t top,
                const LeakVerdict& verdict);
void write_comparison(std::ostream& out, Mode mode, const SizeComparison& c);

}  // namespace cair::report
