#include "cair/synth.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <sstream>

namespace cair {

namespace {

constexpr std::uint32_t kPeerBase = 4200000000u;
constexpr std::uint32_t kPeerSpan = 1000000u;
constexpr std::uint32_t kFillerBase = kPeerBase + kPeerSpan;
constexpr std::uint32_t kFillerSpan = 4294967294u - kFillerBase;
constexpr std::size_t kMaxFiller = 65536;

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

AsNumber as_value(const std::string& key, const std::string& text) {
  auto a = parse_asn(text);
  if (!a) invalid(key + ": bad AS number '" + text + "'");
  return *a;
}

std::vector<AsNumber> as_list(const std::string& key, const std::string& text) {
  std::vector<AsNumber> out;
  for (const auto& w : words(text)) out.push_back(as_value(key, w));
  return out;
}

IpPrefix prefix_value(const std::string& key, const std::string& text) {
  auto p = IpPrefix::parse(text);
  if (!p) invalid(key + ": bad prefix '" + text + "'");
  return *p;
}

std::uint64_t uint_value(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  std::uint64_t v = 0;
  try {
    v = std::stoull(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) invalid(key + ": expected an unsigned integer");
  return v;
}

bool bool_value(const std::string& key, const std::string& text) {
  if (text == "true" || text == "yes" || text == "1") return true;
  if (text == "false" || text == "no" || text == "0") return false;
  invalid(key + ": expected true or false");
}

std::string join(const std::vector<AsNumber>& v) {
  std::string out;
  for (const auto& a : v) {
    if (!out.empty()) out += ' ';
    out += std::to_string(a.value);
  }
  return out;
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

 private:
  std::mt19937_64 engine_;
};

std::vector<AsNumber> draw_distinct(Rng& rng, std::size_t count, std::uint32_t base,
                                    std::uint32_t span, std::set<std::uint32_t>& taken) {
  std::vector<AsNumber> out;
  while (out.size() < count) {
    const auto v = static_cast<std::uint32_t>(base + rng.below(span));
    if (taken.insert(v).second) out.push_back({v});
  }
  return out;
}

std::set<std::uint32_t> topology_asns(const ScenarioSpec& spec) {
  std::set<std::uint32_t> s{spec.victim_as.value};
  for (auto a : spec.upstreams) s.insert(a.value);
  for (auto a : spec.peers) s.insert(a.value);
  if (spec.attack) {
    s.insert(spec.attack->s.value);
    s.insert(spec.attack->t.value);
    if (spec.attack->attacker) s.insert(spec.attack->attacker->value);
    if (spec.attack->backhaul) {
      for (auto a : *spec.attack->backhaul) s.insert(a.value);
    }
  }
  if (spec.leak) {
    s.insert(spec.leak->originator.value);
    s.insert(spec.leak->upstream.value);
  }
  return s;
}

void validate_topology(const ScenarioSpec& spec, const std::vector<AsNumber>& peers) {
  if (spec.victim_as.value == 0) invalid("victim_as is required");
  if (spec.victim_prefixes.empty()) invalid("victim_prefixes is required");
  if (peers.empty()) invalid("at least one peer is required");
  std::set<AsNumber> path_members{spec.victim_as};
  for (auto u : spec.upstreams) {
    if (!path_members.insert(u).second) invalid("upstreams repeat an AS or contain the victim");
  }
  for (auto p : peers) {
    if (path_members.count(p)) invalid("peer " + std::to_string(p.value) + " is on the victim path");
  }
  if (spec.filler_routes > kMaxFiller) invalid("filler_routes exceeds 65536");
}

std::vector<AsNumber> backhaul_of(const InterceptionAttack& attack, const ScenarioSpec& spec) {
  if (attack.backhaul) return *attack.backhaul;
  std::vector<AsNumber> out;
  for (auto u : spec.upstreams) {
    if (u != attack.t) out.push_back(u);
  }
  return out;
}

}  // namespace

ScenarioSpec ScenarioSpec::parse(std::istream& in) {
  ScenarioSpec spec;
  std::map<std::string, std::string> kv;
  std::string line;
  for (std::size_t n = 1; std::getline(in, line); ++n) {
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) invalid("line " + std::to_string(n) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!kv.emplace(key, trim(line.substr(eq + 1))).second) invalid("duplicate key " + key);
  }

  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  if (auto v = take("name")) spec.name = *v;
  if (auto v = take("seed")) spec.seed = uint_value("seed", *v);
  if (auto v = take("victim_as")) spec.victim_as = as_value("victim_as", *v);
  if (auto v = take("victim_prefixes")) {
    for (const auto& w : words(*v)) spec.victim_prefixes.push_back(prefix_value("victim_prefixes", w));
  }
  if (auto v = take("upstreams")) spec.upstreams = as_list("upstreams", *v);
  if (auto v = take("peers")) spec.peers = as_list("peers", *v);
  if (auto v = take("peer_count")) spec.peer_count = uint_value("peer_count", *v);
  if (auto v = take("filler_routes")) spec.filler_routes = uint_value("filler_routes", *v);

  const auto kind = take("attack");
  if (kind && *kind != "interception" && *kind != "none") invalid("attack: unknown type " + *kind);
  if (kind && *kind == "interception") {
    InterceptionAttack a;
    auto need = [&](const std::string& key) {
      auto v = take(key);
      if (!v) invalid(key + " is required for an interception attack");
      return *v;
    };
    a.s = as_value("attack.s", need("attack.s"));
    a.t = as_value("attack.t", need("attack.t"));
    a.hijacked_subprefix = prefix_value("attack.hijacked_subprefix", need("attack.hijacked_subprefix"));
    if (auto v = take("attack.attacker")) a.attacker = as_value("attack.attacker", *v);
    if (auto v = take("attack.hide_attacker")) a.hide_attacker = bool_value("attack.hide_attacker", *v);
    if (auto v = take("attack.backhaul")) a.backhaul = as_list("attack.backhaul", *v);
    spec.attack = a;
  }

  if (auto o = take("leak.originator")) {
    LeakScenario l;
    l.originator = as_value("leak.originator", *o);
    auto u = take("leak.upstream");
    if (!u) invalid("leak.upstream is required with leak.originator");
    l.upstream = as_value("leak.upstream", *u);
    if (auto v = take("leak.routes")) l.routes = uint_value("leak.routes", *v);
    if (auto v = take("leak.own_prefix")) l.own_prefix = prefix_value("leak.own_prefix", *v);
    spec.leak = l;
  }

  if (!kv.empty()) invalid("unknown key " + kv.begin()->first);
  return spec;
}

ScenarioSpec ScenarioSpec::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return parse(in);
}

std::string ScenarioSpec::to_text() const {
  std::ostringstream out;
  out << "name = " << name << "\nseed = " << seed << "\nvictim_as = " << victim_as.value
      << "\nvictim_prefixes =";
  for (const auto& p : victim_prefixes) out << ' ' << p.to_string();
  out << "\nupstreams = " << join(upstreams) << '\n';
  if (!peers.empty()) out << "peers = " << join(peers) << '\n';
  if (peer_count) out << "peer_count = " << peer_count << '\n';
  out << "filler_routes = " << filler_routes << '\n';
  if (attack) {
    out << "attack = interception\nattack.s = " << attack->s.value << "\nattack.t = " << attack->t.value
        << "\nattack.hide_attacker = " << (attack->hide_attacker ? "true" : "false")
        << "\nattack.hijacked_subprefix = " << attack->hijacked_subprefix.to_string() << '\n';
    if (attack->attacker) out << "attack.attacker = " << attack->attacker->value << '\n';
    if (attack->backhaul) out << "attack.backhaul = " << join(*attack->backhaul) << '\n';
  }
  if (leak) {
    out << "leak.originator = " << leak->originator.value << "\nleak.upstream = " << leak->upstream.value
        << "\nleak.routes = " << leak->routes << "\nleak.own_prefix = " << leak->own_prefix.to_string()
        << '\n';
  }
  return out.str();
}

ScenarioSpec defcon_control_spec() {
  ScenarioSpec s;
  s.name = "defcon-control";
  s.seed = 2008;
  s.victim_as = {20195};
  s.victim_prefixes = {*IpPrefix::parse("24.120.56.0/22"), *IpPrefix::parse("24.120.60.0/22"),
                       *IpPrefix::parse("24.120.64.0/22"), *IpPrefix::parse("24.120.68.0/22")};
  s.upstreams = {{4436}, {22822}, {23005}};
  s.peer_count = 6;
  s.filler_routes = 20;
  return s;
}

ScenarioSpec defcon_spec() {
  ScenarioSpec s = defcon_control_spec();
  s.name = "defcon";
  InterceptionAttack a;
  a.s = {26627};
  a.t = {4436};
  a.hide_attacker = true;
  a.hijacked_subprefix = *IpPrefix::parse("24.120.56.0/24");
  s.attack = a;
  return s;
}

ScenarioSpec leak_spec() {
  ScenarioSpec s;
  s.name = "leak";
  s.seed = 2015;
  s.victim_as = {64600};
  s.victim_prefixes = {*IpPrefix::parse("198.51.100.0/24")};
  s.upstreams = {{64601}};
  s.peer_count = 4;
  s.filler_routes = 192;
  LeakScenario l;
  l.originator = {64700};
  l.upstream = {64701};
  l.routes = 150;
  s.leak = l;
  return s;
}

std::vector<AsNumber> scenario_peers(const ScenarioSpec& spec) {
  if (!spec.peers.empty()) return spec.peers;
  Rng rng(spec.seed);
  auto taken = topology_asns(spec);
  return draw_distinct(rng, spec.peer_count, kPeerBase, kPeerSpan, taken);
}

RouteSet gen_benign(const ScenarioSpec& spec) {
  const auto peers = scenario_peers(spec);
  validate_topology(spec, peers);

  RouteSet routes;
  for (auto peer : peers) {
    std::vector<AsNumber> path{peer};
    path.insert(path.end(), spec.upstreams.begin(), spec.upstreams.end());
    path.push_back(spec.victim_as);
    for (const auto& p : spec.victim_prefixes) routes.insert(Route::from_asns(path, p));
    if (spec.leak) {
      const AsNumber own[] = {peer, spec.leak->upstream, spec.leak->originator};
      routes.insert(Route::from_asns(own, spec.leak->own_prefix));
    }
  }

  if (spec.filler_routes > 0) {
    // A separate stream keeps peer draws independent of the filler size.
    Rng rng(spec.seed ^ 0x5deece66dULL);
    auto taken = topology_asns(spec);
    for (auto p : peers) taken.insert(p.value);
    const std::size_t transit_count = std::max<std::size_t>(1, spec.filler_routes / 5);
    const auto transits = draw_distinct(rng, transit_count, kFillerBase, kFillerSpan, taken);
    const auto origins = draw_distinct(rng, spec.filler_routes, kFillerBase, kFillerSpan, taken);
    for (std::size_t i = 0; i < spec.filler_routes; ++i) {
      const AsNumber path[] = {peers[rng.below(peers.size())], transits[rng.below(transits.size())],
                               origins[i]};
      const auto base = 0x0A000000u | (static_cast<std::uint32_t>(i) << 8);
      routes.insert(Route::from_asns(path, IpPrefix::make(base, 24)));
    }
  }
  return routes;
}

InterceptionScenario gen_interception(const ScenarioSpec& spec) {
  if (!spec.attack) invalid("scenario has no attack");
  const auto& atk = *spec.attack;
  const auto peers = scenario_peers(spec);
  validate_topology(spec, peers);

  if (atk.s == atk.t) invalid("attack.s and attack.t must differ");
  if (!atk.hide_attacker && !atk.attacker) invalid("attack.attacker is required when not hidden");
  const auto covering = std::find_if(spec.victim_prefixes.begin(), spec.victim_prefixes.end(),
                                     [&](const IpPrefix& p) { return is_strict_subprefix(atk.hijacked_subprefix, p); });
  if (covering == spec.victim_prefixes.end()) {
    invalid("attack.hijacked_subprefix must be strictly inside a victim prefix");
  }

  std::vector<AsNumber> tail{atk.s};
  if (!atk.hide_attacker) tail.push_back(*atk.attacker);
  tail.push_back(atk.t);
  const auto backhaul = backhaul_of(atk, spec);
  tail.insert(tail.end(), backhaul.begin(), backhaul.end());
  tail.push_back(spec.victim_as);
  if (std::set<AsNumber>(tail.begin(), tail.end()).size() != tail.size()) {
    invalid("forged path repeats an AS");
  }
  for (auto p : peers) {
    if (std::find(tail.begin(), tail.end(), p) != tail.end()) {
      invalid("peer " + std::to_string(p.value) + " would drop the forged route by loop prevention");
    }
  }

  InterceptionScenario out;
  out.routes = gen_benign(spec);
  for (auto peer : peers) {
    std::vector<AsNumber> path{peer};
    path.insert(path.end(), tail.begin(), tail.end());
    out.routes.insert(Route::from_asns(path, atk.hijacked_subprefix));
  }
  out.expected.victim_as = spec.victim_as;
  out.expected.p_v = *covering;
  out.expected.p_prime_v = atk.hijacked_subprefix;
  out.expected.s = atk.s;
  out.expected.t = atk.hide_attacker ? atk.t : *atk.attacker;
  return out;
}

std::pair<RouteSet, RouteSet> gen_leak(const ScenarioSpec& spec, const RouteSet& base) {
  if (!spec.leak) invalid("scenario has no leak");
  const auto& leak = *spec.leak;
  if (leak.originator == leak.upstream) invalid("leak.originator and leak.upstream must differ");

  const auto mentions = [](const Route& r, AsNumber a) {
    return std::any_of(r.path().begin(), r.path().end(),
                       [&](RouteSymbol s) { return s.as_value() == a; });
  };
  bool present = false;
  std::vector<const Route*> eligible;
  for (const auto& r : base) {
    present = present || mentions(r, leak.originator);
    if (r.path().size() >= 2 && !mentions(r, leak.originator) && !mentions(r, leak.upstream)) {
      eligible.push_back(&r);
    }
  }
  if (!present) invalid("leak.originator does not appear in the base routes");
  if (eligible.size() < leak.routes) {
    invalid("only " + std::to_string(eligible.size()) + " routes can be leaked");
  }

  Rng rng(spec.seed ^ 0x1ea4ULL);
  for (std::size_t i = 0; i < leak.routes; ++i) {
    std::swap(eligible[i], eligible[i + rng.below(eligible.size() - i)]);
  }

  RouteSet after = base;
  for (std::size_t i = 0; i < leak.routes; ++i) {
    const Route& r = *eligible[i];
    auto raw = r.raw_path();
    auto run_end = [&](std::size_t i) {
      std::size_t j = i + 1;
      while (j < raw.size() && raw[j] == raw[i]) ++j;
      return j;
    };
    const std::size_t head = run_end(0);
    // The originator takes over from the peer's transit unless that is the origin itself.
    const std::size_t transit_end = run_end(head);
    if (transit_end < raw.size()) {
      raw.erase(raw.begin() + static_cast<std::ptrdiff_t>(head),
                raw.begin() + static_cast<std::ptrdiff_t>(transit_end));
    }
    raw.insert(raw.begin() + static_cast<std::ptrdiff_t>(head), {leak.upstream, leak.originator});
    after.erase(r);
    after.insert(Route::from_asns(raw, r.prefix()));
  }
  return {base, std::move(after)};
}

}  // namespace cair
