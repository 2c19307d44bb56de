#pragma once

// Seed-deterministic scenario fixtures: benign redistribution, subprefix
// interception with a backhaul path, and full-table route leaks.
//
// Spec files are plain text, one `key = value` per line, '#' comments:
//
//   name, seed, victim_as, victim_prefixes (space separated), upstreams,
//   peers or peer_count, filler_routes,
//   attack = interception, attack.s, attack.t, attack.attacker,
//   attack.hide_attacker, attack.hijacked_subprefix, attack.backhaul,
//   leak.originator, leak.upstream, leak.routes, leak.own_prefix
//
// Legitimate routes run peer, upstreams..., victim. Forged routes run
// peer, s, [attacker], t, backhaul..., victim and announce only the
// hijacked subprefix. Filler routes peer, transit, origin use ASNs from the
// private 4-byte range and one 10.x.y.0/24 per origin.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cair/frl.hpp"

namespace cair {

struct InterceptionAttack {
  AsNumber s;
  AsNumber t;
  std::optional<AsNumber> attacker;
  bool hide_attacker = true;
  IpPrefix hijacked_subprefix;
  std::optional<std::vector<AsNumber>> backhaul;  // default: upstreams without t
};

struct LeakScenario {
  AsNumber originator;
  AsNumber upstream;
  std::size_t routes = 0;
  IpPrefix own_prefix = IpPrefix::make(0xCB007100u, 24);  // 203.0.113.0/24
};

struct ScenarioSpec {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  AsNumber victim_as;
  std::vector<IpPrefix> victim_prefixes;
  std::vector<AsNumber> upstreams;
  std::vector<AsNumber> peers;  // explicit peers win over peer_count
  std::size_t peer_count = 0;
  std::size_t filler_routes = 0;
  std::optional<InterceptionAttack> attack;
  std::optional<LeakScenario> leak;

  // Throws Error{InvalidSpec} naming the offending line or key.
  static ScenarioSpec parse(std::istream& in);
  static ScenarioSpec load(const std::string& path);
  std::string to_text() const;
};

ScenarioSpec defcon_spec();
ScenarioSpec defcon_control_spec();  // same topology without the attack
ScenarioSpec leak_spec();

struct ExpectedAlert {
  AsNumber victim_as;
  IpPrefix p_v;
  IpPrefix p_prime_v;
  std::optional<AsNumber> s;
  AsNumber t;
};

struct InterceptionScenario {
  RouteSet routes;
  ExpectedAlert expected;
};

// Peers actually used: explicit list or peer_count seeded draws.
std::vector<AsNumber> scenario_peers(const ScenarioSpec& spec);

RouteSet gen_benign(const ScenarioSpec& spec);
InterceptionScenario gen_interception(const ScenarioSpec& spec);
// Re-announces leak.routes seeded routes of `base` as peer, upstream,
// originator, ... with the originator replacing the peer's transit hop.
// Returns (before, after); before is `base`.
std::pair<RouteSet, RouteSet> gen_leak(const ScenarioSpec& spec, const RouteSet& base);

}  // namespace cair
