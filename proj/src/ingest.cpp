#include "cair/ingest.hpp"

#include <fstream>
#include <istream>
#include <ostream>
#include <unordered_set>

#include "cair/parallel.hpp"

namespace cair {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

[[noreturn]] void malformed(const std::string& what) { throw Error(ErrorCode::Malformed, what); }

std::vector<AsNumber> parse_path_tokens(std::string_view text) {
  std::vector<AsNumber> out;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    if (i >= text.size()) break;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ' && text[j] != '\t') ++j;
    auto asn = parse_asn(text.substr(i, j - i));
    if (!asn) malformed("bad AS number '" + std::string(text.substr(i, j - i)) + "'");
    out.push_back(*asn);
    i = j;
  }
  return out;
}

Route make_route(std::string_view path_text, std::string_view prefix_text,
                 const ParseOptions& options) {
  auto prefix = IpPrefix::parse(trim(prefix_text));
  if (!prefix) malformed("bad prefix '" + std::string(prefix_text) + "'");
  const auto asns = parse_path_tokens(path_text);
  return Route::from_asns(asns, *prefix, options.collapse_prepends);
}

struct LineOutcome {
  enum class Kind { Ignored, Route, AsSet, Loop, Malformed, Skipped } kind = Kind::Ignored;
  std::optional<Route> route;
};

LineOutcome classify(std::string_view line, InputFormat format, const ParseOptions& options) {
  using Kind = LineOutcome::Kind;
  const std::string_view body = trim(line);
  if (body.empty()) return {};
  if (format == InputFormat::Simple && body.front() == '#') return {};
  try {
    if (format == InputFormat::Simple) return {Kind::Route, parse_simple(body, options)};
    SkipReason reason = SkipReason::None;
    auto route = parse_bgpdump_m(body, &reason, options);
    if (route) return {Kind::Route, std::move(route)};
    return {reason == SkipReason::AsSet ? Kind::AsSet : Kind::Skipped, std::nullopt};
  } catch (const Error& e) {
    return {e.code() == ErrorCode::LoopDetected ? Kind::Loop : Kind::Malformed, std::nullopt};
  }
}

}  // namespace

std::optional<InputFormat> parse_input_format(std::string_view name) {
  if (name == "simple") return InputFormat::Simple;
  if (name == "bgpdump-m") return InputFormat::BgpdumpM;
  return std::nullopt;
}

Route parse_simple(std::string_view line, const ParseOptions& options) {
  line = trim(line);
  const auto pipe = line.find('|');
  if (pipe == std::string_view::npos) malformed("missing '|' separator");
  if (line.find('|', pipe + 1) != std::string_view::npos) malformed("more than one '|'");
  return make_route(line.substr(0, pipe), line.substr(pipe + 1), options);
}

std::optional<Route> parse_bgpdump_m(std::string_view line, SkipReason* reason,
                                     const ParseOptions& options) {
  auto skip = [&](SkipReason r) -> std::optional<Route> {
    if (reason) *reason = r;
    return std::nullopt;
  };
  if (reason) *reason = SkipReason::None;

  std::vector<std::string_view> fields;
  std::size_t start = 0;
  line = trim(line);
  while (true) {
    const auto bar = line.find('|', start);
    fields.push_back(line.substr(start, bar == std::string_view::npos ? line.npos : bar - start));
    if (bar == std::string_view::npos) break;
    start = bar + 1;
  }
  if (fields.size() < 3) malformed("expected at least 3 fields, got " + std::to_string(fields.size()));
  const std::string_view type = fields[0];
  if (type.rfind("TABLE_DUMP", 0) != 0 || fields[2] != "B") return skip(SkipReason::NonRoute);
  if (fields.size() < 7) malformed("expected at least 7 fields, got " + std::to_string(fields.size()));
  if (fields[5].find(':') != std::string_view::npos) return skip(SkipReason::Unsupported);
  if (fields[6].find('{') != std::string_view::npos) return skip(SkipReason::AsSet);
  return make_route(fields[6], fields[5], options);
}

IngestResult ingest_stream(std::istream& in, InputFormat format, const ParseOptions& options) {
  using Kind = LineOutcome::Kind;
  IngestResult result;
  IngestReport& rep = result.report;
  std::unordered_set<std::uint64_t> prefixes;
  std::unordered_set<std::uint32_t> asns;
  std::set<std::vector<AsNumber>> paths;

  constexpr std::size_t kBatch = std::size_t{1} << 16;
  const unsigned workers = worker_threads();
  std::vector<std::string> lines;
  std::vector<LineOutcome> outcomes;
  std::string line;
  bool eof = false;
  while (!eof) {
    lines.clear();
    while (lines.size() < kBatch) {
      if (!std::getline(in, line)) {
        eof = true;
        break;
      }
      lines.push_back(line);
    }
    outcomes.assign(lines.size(), LineOutcome{});
    parallel_slices(lines.size(), workers, [&](unsigned, std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) outcomes[i] = classify(lines[i], format, options);
    });

    for (auto& o : outcomes) {
      switch (o.kind) {
        case Kind::Ignored: break;
        case Kind::Skipped: ++rep.skipped_lines; break;
        case Kind::AsSet: ++rep.route_records; ++rep.dropped_as_set; break;
        case Kind::Loop: ++rep.route_records; ++rep.dropped_loop; break;
        case Kind::Malformed: ++rep.route_records; ++rep.dropped_malformed; break;
        case Kind::Route: {
          ++rep.route_records;
          const Route& r = *o.route;
          prefixes.insert(RouteSymbol::prefix(r.prefix()).key());
          std::vector<AsNumber> collapsed;
          for (const auto& s : r.path()) {
            asns.insert(s.as_value().value);
            if (s.prepend_index() == 1) collapsed.push_back(s.as_value());
          }
          if (result.routes.insert(std::move(*o.route))) {
            ++rep.accepted;
            paths.insert(std::move(collapsed));
          } else {
            ++rep.duplicate_routes;
          }
          break;
        }
      }
    }
  }
  if (in.bad()) throw Error(ErrorCode::IoError, "read error");
  rep.distinct_prefixes = prefixes.size();
  rep.distinct_asns = asns.size();
  rep.distinct_paths = paths.size();
  return result;
}

IngestResult ingest_file(const std::string& path, InputFormat format, const ParseOptions& options) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return ingest_stream(in, format, options);
}

void write_simple(std::ostream& out, const RouteSet& routes) {
  for (const auto& r : routes) out << r.to_simple() << '\n';
}

}  // namespace cair
