#pragma once

// Text route corpora -> RouteSet, with sanitization counters.
//
// Simple format, one route per line:   ASN( ASN)*|A.B.C.D/L
// '#' starts a comment line; blank lines are ignored.
//
// bgpdump -m format: pipe-separated, field 6 is the prefix and field 7 the
// space-separated AS path. Only RIB entries (TABLE_DUMP* with type B) are
// consumed; other record types are skipped.

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "cair/frl.hpp"

namespace cair {

enum class InputFormat { Simple, BgpdumpM };

std::optional<InputFormat> parse_input_format(std::string_view name);

struct ParseOptions {
  bool collapse_prepends = false;
};

// Throws Error{Malformed | EmptyPath | LoopDetected}.
Route parse_simple(std::string_view line, const ParseOptions& options = {});

enum class SkipReason {
  None,
  AsSet,        // path holds a {..} AS_SET; counted as dropped_as_set
  NonRoute,     // withdrawal, update, state or unknown record type
  Unsupported,  // address family outside v1 scope (IPv6)
};

// Returns nullopt for skipped lines and sets `reason`. Throws like
// parse_simple on structurally broken lines.
std::optional<Route> parse_bgpdump_m(std::string_view line, SkipReason* reason = nullptr,
                                     const ParseOptions& options = {});

struct IngestReport {
  // accepted + dropped_* + duplicate_routes == route_records
  std::size_t route_records = 0;
  std::size_t accepted = 0;
  std::size_t dropped_as_set = 0;
  std::size_t dropped_loop = 0;
  std::size_t dropped_malformed = 0;
  std::size_t duplicate_routes = 0;
  std::size_t distinct_prefixes = 0;
  std::size_t distinct_asns = 0;
  std::size_t distinct_paths = 0;  // AS paths with prepend runs collapsed
  std::size_t skipped_lines = 0;   // non-route and unsupported records

  friend bool operator==(const IngestReport&, const IngestReport&) = default;
};

struct IngestResult {
  RouteSet routes;
  IngestReport report;
};

IngestResult ingest_stream(std::istream& in, InputFormat format, const ParseOptions& options = {});
// Throws Error{IoError} when the file cannot be read.
IngestResult ingest_file(const std::string& path, InputFormat format,
                         const ParseOptions& options = {});

// Writes routes in the simple format, one per line, in route order.
void write_simple(std::ostream& out, const RouteSet& routes);

}  // namespace cair
