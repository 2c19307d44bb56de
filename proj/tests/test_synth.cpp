#include "doctest.h"

#include <sstream>

#include "cair/detect.hpp"
#include "cair/ingest.hpp"
#include "cair/synth.hpp"
#include "support/oracles.hpp"

using namespace cair;
using oracle::pfx;

namespace {

std::string serialized(const RouteSet& s) {
  std::ostringstream out;
  write_simple(out, s);
  return out.str();
}

ErrorCode spec_error(const std::string& text) {
  std::istringstream in(text);
  try {
    ScenarioSpec::parse(in);
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ContractViolation;
}

ScenarioSpec small_spec() {
  ScenarioSpec s;
  s.victim_as = {64500};
  s.victim_prefixes = {pfx("192.0.2.0/24"), pfx("198.51.100.0/24")};
  s.upstreams = {{64501}};
  s.peers = {{64510}, {64511}};
  return s;
}

}  // namespace

TEST_CASE("benign cross product") {
  const auto routes = gen_benign(small_spec());
  CHECK(routes.size() == 4);
  for (const auto& r : routes) CHECK(r.path().size() == 3);
  CHECK(raise_alerts(RouteAutomaton::build(routes)).empty());
}

TEST_CASE("generators are deterministic") {
  CHECK(serialized(gen_benign(defcon_control_spec())) == serialized(gen_benign(defcon_control_spec())));
  CHECK(serialized(gen_interception(defcon_spec()).routes) ==
        serialized(gen_interception(defcon_spec()).routes));
  const auto spec = leak_spec();
  const auto a = gen_leak(spec, gen_benign(spec));
  const auto b = gen_leak(spec, gen_benign(spec));
  CHECK(serialized(a.second) == serialized(b.second));
  auto other = defcon_control_spec();
  other.seed += 1;
  CHECK(serialized(gen_benign(other)) != serialized(gen_benign(defcon_control_spec())));
}

TEST_CASE("generated routes pass domain validation") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    auto spec = leak_spec();
    spec.seed = seed;
    const auto [before, after] = gen_leak(spec, gen_benign(spec));
    for (const auto* set : {&before, &after}) {
      for (const auto& r : *set) {
        CHECK_NOTHROW(Route(r.path(), r.prefix()));
        CHECK(normalize_path(r.raw_path()) == r.path());
      }
    }
  }
}

TEST_CASE("interception validation") {
  auto spec = defcon_spec();
  spec.attack->hijacked_subprefix = pfx("24.120.56.0/22");
  CHECK_THROWS_AS(gen_interception(spec), Error);

  spec = defcon_spec();
  spec.attack->t = spec.attack->s;
  CHECK_THROWS_AS(gen_interception(spec), Error);

  spec = defcon_spec();
  spec.peers = {{22822}};
  CHECK_THROWS_AS(gen_interception(spec), Error);

  spec = defcon_spec();
  spec.attack->hide_attacker = false;
  CHECK_THROWS_AS(gen_interception(spec), Error);

  CHECK_THROWS_AS(gen_interception(defcon_control_spec()), Error);
}

TEST_CASE("forged routes use the backhaul and respect loop prevention") {
  const auto scenario = gen_interception(defcon_spec());
  std::size_t forged = 0;
  for (const auto& r : scenario.routes) {
    if (r.prefix() != pfx("24.120.56.0/24")) continue;
    ++forged;
    const auto raw = r.raw_path();
    REQUIRE(raw.size() == 6);
    CHECK(raw[1].value == 26627);
    CHECK(raw[2].value == 4436);
    CHECK(raw[3].value == 22822);
    CHECK(raw[4].value == 23005);
    CHECK(raw[5].value == 20195);
  }
  CHECK(forged == 6);
}

TEST_CASE("leak splicing") {
  const auto spec = leak_spec();
  const auto base = gen_benign(spec);
  const auto [before, after] = gen_leak(spec, base);
  CHECK(before == base);
  std::size_t through = 0;
  for (const auto& r : after) {
    const auto raw = r.raw_path();
    if (r.prefix() == spec.leak->own_prefix) continue;
    if (raw.size() > 2 && raw[1] == spec.leak->upstream && raw[2] == spec.leak->originator) ++through;
  }
  CHECK(through == spec.leak->routes);

  auto none = spec;
  none.leak->routes = 0;
  const auto same = gen_leak(none, base);
  CHECK(same.first == same.second);

  auto absent = spec;
  absent.leak->originator = {1};
  CHECK_THROWS_AS(gen_leak(absent, gen_benign(small_spec())), Error);

  auto too_many = spec;
  too_many.leak->routes = 10000;
  CHECK_THROWS_AS(gen_leak(too_many, base), Error);
}

TEST_CASE("spec files") {
  const auto spec = defcon_spec();
  std::istringstream in(spec.to_text());
  const auto back = ScenarioSpec::parse(in);
  CHECK(back.to_text() == spec.to_text());
  CHECK(serialized(gen_interception(back).routes) == serialized(gen_interception(spec).routes));

  const auto leak = leak_spec();
  std::istringstream lin(leak.to_text());
  CHECK(ScenarioSpec::parse(lin).to_text() == leak.to_text());

  CHECK(spec_error("victim_as = 1\nbogus = 2\n") == ErrorCode::InvalidSpec);
  CHECK(spec_error("victim_as\n") == ErrorCode::InvalidSpec);
  CHECK(spec_error("seed = x\n") == ErrorCode::InvalidSpec);
  CHECK(spec_error("attack = interception\nattack.s = 1\n") == ErrorCode::InvalidSpec);
  CHECK(spec_error("victim_prefixes = 1.2.3.4/99\n") == ErrorCode::InvalidSpec);
  CHECK(spec_error("seed = 1\nseed = 2\n") == ErrorCode::InvalidSpec);

  std::istringstream commented("# demo\nname = x\n\nvictim_as = 5\n");
  CHECK(ScenarioSpec::parse(commented).victim_as.value == 5);
}
