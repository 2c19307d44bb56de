#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "cair/ingest.hpp"
#include "support/oracles.hpp"

using namespace cair;

namespace {

IngestResult ingest_text(const std::string& text, InputFormat f = InputFormat::Simple) {
  std::istringstream in(text);
  return ingest_stream(in, f);
}

void check_conservation(const IngestReport& r) {
  CHECK(r.accepted + r.dropped_as_set + r.dropped_loop + r.dropped_malformed + r.duplicate_routes ==
        r.route_records);
}

std::string bgpdump_line(const std::string& path, const std::string& prefix) {
  return "TABLE_DUMP2|1438387200|B|4.69.184.193|3356|" + prefix + "|" + path + "|IGP|4.69.184.193|0|0||NAG||";
}

}  // namespace

TEST_CASE("parse_simple") {
  const Route r = parse_simple("701 3356 20195|24.120.56.0/22");
  CHECK(r == oracle::route({701, 3356, 20195}, "24.120.56.0/22"));
  const Route p = parse_simple("701 701 20195|24.120.56.0/22");
  CHECK(p.path()[1] == RouteSymbol::as({701}, 2));
  CHECK(parse_simple("701 701 20195|24.120.56.0/22", {true}).path().size() == 2);

  auto code_of = [](const char* line) {
    try {
      parse_simple(line);
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::ContractViolation;
  };
  CHECK(code_of("701 3356|not-a-prefix") == ErrorCode::Malformed);
  CHECK(code_of("701 3356 24.0.0.0/8") == ErrorCode::Malformed);
  CHECK(code_of("701 x3356|24.0.0.0/8") == ErrorCode::Malformed);
  CHECK(code_of("701|24.0.0.0/8|1") == ErrorCode::Malformed);
  CHECK(code_of("|24.0.0.0/8") == ErrorCode::EmptyPath);
  CHECK(code_of("1 2 1|24.0.0.0/8") == ErrorCode::LoopDetected);
}

TEST_CASE("parse_bgpdump_m") {
  SkipReason why = SkipReason::None;
  const auto r = parse_bgpdump_m(bgpdump_line("3356 22822 23005 20195", "24.120.56.0/22"), &why);
  REQUIRE(r);
  CHECK(*r == oracle::route({3356, 22822, 23005, 20195}, "24.120.56.0/22"));
  CHECK(why == SkipReason::None);

  CHECK_FALSE(parse_bgpdump_m(bgpdump_line("3356 {64512,64513}", "24.120.56.0/22"), &why));
  CHECK(why == SkipReason::AsSet);
  CHECK_FALSE(parse_bgpdump_m("BGP4MP|1438387200|W|4.69.184.193|3356|24.120.56.0/22", &why));
  CHECK(why == SkipReason::NonRoute);
  CHECK_FALSE(parse_bgpdump_m(bgpdump_line("3356 20195", "2001:db8::/32"), &why));
  CHECK(why == SkipReason::Unsupported);
  CHECK_THROWS_AS(parse_bgpdump_m("TABLE_DUMP2|1|B|1.2.3.4|3356"), Error);
}

TEST_CASE("simple files: comments, duplicates, empty") {
  const auto r = ingest_text("# header\n701 3356|10.0.0.0/8\n\n701 3356|10.0.0.0/8\n702|11.0.0.0/8\n");
  CHECK(r.routes.size() == 2);
  CHECK(r.report.duplicate_routes == 1);
  CHECK(r.report.route_records == 3);
  check_conservation(r.report);

  const auto empty = ingest_text("");
  CHECK(empty.routes.empty());
  CHECK(empty.report == IngestReport{});
}

TEST_CASE("bgpdump fixture of 1000 lines with 5 AS_SETs") {
  std::ostringstream text;
  for (int i = 0; i < 1000; ++i) {
    const std::string prefix = "10." + std::to_string(i / 256) + "." + std::to_string(i % 256) + ".0/24";
    const std::string path = i % 200 == 7 ? "3356 {64512,64513}" : "3356 " + std::to_string(1000 + i);
    text << bgpdump_line(path, prefix) << '\n';
  }
  const auto r = ingest_text(text.str(), InputFormat::BgpdumpM);
  CHECK(r.report.accepted == 995);
  CHECK(r.report.dropped_as_set == 5);
  CHECK(r.report.distinct_prefixes == 995);
  CHECK(r.report.distinct_asns == 996);
  check_conservation(r.report);
}

TEST_CASE("counter conservation under malformed-line fuzzing") {
  oracle::Rng rng(3);
  oracle::RouteGenerator gen(4);
  const char* junk[] = {"1 2|", "|", "x|1.0.0.0/8", "1 2 1|1.0.0.0/8", "1 2|1.0.0/8", "1|1.2.3.4/40"};
  for (int round = 0; round < 20; ++round) {
    std::ostringstream text;
    std::size_t lines = 0;
    for (int i = 0; i < 300; ++i) {
      if (rng.chance(20)) {
        text << junk[rng.below(6)] << '\n';
      } else {
        text << gen.next().to_simple() << '\n';
      }
      ++lines;
    }
    const auto r = ingest_text(text.str());
    check_conservation(r.report);
    CHECK(r.report.route_records == lines);
  }
}

TEST_CASE("exported simple dump round-trips") {
  oracle::RouteGenerator gen(21);
  const RouteSet s = gen.route_set();
  std::ostringstream out;
  write_simple(out, s);
  const auto back = ingest_text(out.str());
  CHECK(back.routes == s);
  CHECK(back.report.accepted == s.size());
}

TEST_CASE("parallel ingest is deterministic") {
  oracle::RouteGenerator gen(22);
  std::ostringstream text;
  for (int i = 0; i < 5000; ++i) text << gen.next().to_simple() << "\n1 2 1|1.0.0.0/8\n";
  const std::string body = text.str();
  setenv("CAIR_THREADS", "1", 1);
  const auto one = ingest_text(body);
  setenv("CAIR_THREADS", "4", 1);
  const auto four = ingest_text(body);
  unsetenv("CAIR_THREADS");
  CHECK(one.routes == four.routes);
  CHECK(one.report == four.report);
}

TEST_CASE("ingest_file reports unreadable files") {
  CHECK_THROWS_AS(ingest_file("/nonexistent/routes.txt", InputFormat::Simple), Error);
  const auto path = std::filesystem::temp_directory_path() / "cair_ingest_test.txt";
  {
    std::ofstream out(path);
    out << "1 2 3|10.0.1.0/24\n";
  }
  CHECK(ingest_file(path.string(), InputFormat::Simple).routes.size() == 1);
  std::filesystem::remove(path);
}
