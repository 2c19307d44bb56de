// Snapshot (de)serialization and DOT rendering for RouteAutomaton.
//
// Snapshot layout, all integers little-endian:
//
//   offset  size  field
//   0       4     magic "CAIR"
//   4       2     version (1)
//   6       2     reserved, 0
//   8       4     state count N
//   12      4     start state (always 0)
//   16      4     accepting state (always N-1)
//   20      8     transition count T
//   28      8     route count
//   36      17*T  records {from u32, tag u8, payload 8 bytes, to u32}
//   36+17T  8     FNV-1a 64 checksum over every preceding byte
//
// Payload for tag 0 (AS): asn u32, prepend index u16, 0 u16.
// Payload for tag 1 (IPv4 prefix): base u32, length u8, family u8, 0 u16.
// States are numbered canonically, records sorted by (from, symbol).

#include <fstream>
#include <sstream>

#include "cair/automaton.hpp"

namespace cair {

namespace {

constexpr char kMagic[4] = {'C', 'A', 'I', 'R'};
constexpr std::size_t kHeaderSize = 36;
constexpr std::size_t kRecordSize = 17;

std::uint64_t fnv1a(const std::string& bytes, std::size_t n) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= static_cast<unsigned char>(bytes[i]);
    h *= 0x100000001b3ULL;
  }
  return h;
}

void put(std::string& out, std::uint64_t value, int bytes) {
  for (int i = 0; i < bytes; ++i) out.push_back(static_cast<char>((value >> (8 * i)) & 0xff));
}

std::uint64_t get(const std::string& in, std::size_t offset, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    v |= std::uint64_t{static_cast<unsigned char>(in[offset + i])} << (8 * i);
  }
  return v;
}

[[noreturn]] void corrupt(const std::string& what) {
  throw Error(ErrorCode::CorruptFile, "corrupt snapshot: " + what);
}

}  // namespace

void RouteAutomaton::save(std::ostream& out) const {
  const auto order = canonical_order();
  std::vector<std::uint32_t> number(states_.size(), 0);
  for (std::uint32_t i = 0; i < order.size(); ++i) number[order[i]] = i;

  std::string buf;
  buf.reserve(kHeaderSize + kRecordSize * transition_count_ + 8);
  buf.append(kMagic, 4);
  put(buf, kFormatVersion, 2);
  put(buf, 0, 2);
  put(buf, order.size(), 4);
  put(buf, number[start_], 4);
  put(buf, number[final_], 4);
  put(buf, transition_count_, 8);
  put(buf, route_count_, 8);
  for (StateId q : order) {
    for (const auto& t : states_[q].out) {
      put(buf, number[q], 4);
      if (t.symbol.is_as()) {
        put(buf, 0, 1);
        put(buf, t.symbol.as_value().value, 4);
        put(buf, t.symbol.prepend_index(), 2);
        put(buf, 0, 2);
      } else {
        const IpPrefix p = t.symbol.prefix_value();
        put(buf, 1, 1);
        put(buf, p.base, 4);
        put(buf, p.length, 1);
        put(buf, static_cast<std::uint8_t>(p.family), 1);
        put(buf, 0, 2);
      }
      put(buf, number[t.target], 4);
    }
  }
  put(buf, fnv1a(buf, buf.size()), 8);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw Error(ErrorCode::IoError, "failed to write snapshot");
}

void RouteAutomaton::save(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
  save(out);
}

RouteAutomaton RouteAutomaton::load(std::istream& in) {
  std::string buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  if (in.bad()) throw Error(ErrorCode::IoError, "failed to read snapshot");

  if (buf.size() < 6 || buf.compare(0, 4, kMagic, 4) != 0) corrupt("bad magic");
  const auto version = static_cast<std::uint16_t>(get(buf, 4, 2));
  if (version != kFormatVersion) {
    throw Error(ErrorCode::VersionMismatch,
                "snapshot version " + std::to_string(version) + " not supported (expected " +
                    std::to_string(kFormatVersion) + ")");
  }
  if (buf.size() < kHeaderSize + 8) corrupt("truncated header");
  const std::uint64_t n_states = get(buf, 8, 4);
  const std::uint64_t start = get(buf, 12, 4);
  const std::uint64_t accepting = get(buf, 16, 4);
  const std::uint64_t n_trans = get(buf, 20, 8);
  const std::uint64_t n_routes = get(buf, 28, 8);
  if (n_trans > (buf.size() - kHeaderSize - 8) / kRecordSize ||
      buf.size() != kHeaderSize + kRecordSize * n_trans + 8) {
    corrupt("size does not match header");
  }
  if (get(buf, buf.size() - 8, 8) != fnv1a(buf, buf.size() - 8)) corrupt("checksum mismatch");
  if (n_states < 2 || start != 0 || accepting != n_states - 1) corrupt("bad state header");

  RouteAutomaton m;
  m.states_.assign(n_states, State{});
  m.free_.clear();
  m.register_.clear();
  for (auto& s : m.states_) s.live = true;
  m.live_count_ = n_states;
  m.start_ = static_cast<StateId>(start);
  m.final_ = static_cast<StateId>(accepting);

  std::size_t off = kHeaderSize;
  for (std::uint64_t i = 0; i < n_trans; ++i, off += kRecordSize) {
    const std::uint64_t from = get(buf, off, 4);
    const std::uint64_t tag = get(buf, off + 4, 1);
    const std::uint64_t to = get(buf, off + 13, 4);
    if (from >= n_states || to >= n_states) corrupt("state id out of range");
    RouteSymbol symbol;
    if (tag == 0) {
      const auto asn = static_cast<std::uint32_t>(get(buf, off + 5, 4));
      const auto idx = static_cast<std::uint16_t>(get(buf, off + 9, 2));
      if (asn == 0 || idx == 0) corrupt("invalid AS symbol");
      symbol = RouteSymbol::as(AsNumber{asn}, idx);
    } else if (tag == 1) {
      const auto len = get(buf, off + 9, 1);
      const auto family = get(buf, off + 10, 1);
      if (len > 32 || family != 0) corrupt("invalid prefix symbol");
      const IpPrefix p = IpPrefix::make(static_cast<std::uint32_t>(get(buf, off + 5, 4)),
                                        static_cast<std::uint8_t>(len));
      if (p.base != get(buf, off + 5, 4)) corrupt("prefix host bits set");
      symbol = RouteSymbol::prefix(p);
    } else {
      corrupt("unknown symbol tag");
    }
    auto& out = m.states_[from].out;
    if (!out.empty() && !(out.back().symbol < symbol)) corrupt("records not sorted");
    m.set_target(static_cast<StateId>(from), symbol, static_cast<StateId>(to));
  }
  m.route_count_ = n_routes;
  for (StateId q = 0; q < n_states; ++q) {
    if (q != m.start_ && q != m.final_) m.register_state(q);
  }
  try {
    m.check_invariants();
  } catch (const Error& e) {
    corrupt(e.what());
  }
  return m;
}

RouteAutomaton RouteAutomaton::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return load(in);
}

std::string RouteAutomaton::export_dot(const DotFilter& filter) const {
  const auto order = canonical_order();
  std::vector<std::uint32_t> number(states_.size(), 0);
  for (std::uint32_t i = 0; i < order.size(); ++i) number[order[i]] = i;

  const RouteSymbol wanted_prefix =
      filter.prefix ? RouteSymbol::prefix(*filter.prefix) : RouteSymbol{};
  auto is_wanted_as = [&](RouteSymbol s) {
    return filter.asn && s.is_as() && s.as_value() == *filter.asn;
  };
  // Does the empty-or-not suffix starting with edge (x -> target) end well?
  auto last_ok = [&](RouteSymbol x) { return !filter.prefix || x == wanted_prefix; };

  // fwd_as[q]: some q0 -> q path uses the wanted AS.
  // bwd[q]: some q -> q_f path ends with the wanted prefix.
  // bwd_as[q]: same, and also uses the wanted AS.
  std::vector<char> fwd_as(states_.size(), 0), bwd(states_.size(), 0), bwd_as(states_.size(), 0);
  for (StateId q : order) {
    for (const auto& t : states_[q].out) {
      if (fwd_as[q] || is_wanted_as(t.symbol)) fwd_as[t.target] = 1;
    }
  }
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const StateId q = *it;
    for (const auto& t : states_[q].out) {
      const bool to_final = t.target == final_;
      const bool sfx = to_final ? last_ok(t.symbol) : bwd[t.target];
      const bool sfx_as = to_final ? false : bwd_as[t.target];
      bwd[q] |= sfx;
      bwd_as[q] |= sfx_as || (is_wanted_as(t.symbol) && sfx);
    }
  }

  std::vector<char> keep_node(states_.size(), 0);
  keep_node[start_] = keep_node[final_] = 1;
  std::ostringstream edges;
  for (StateId q : order) {
    for (const auto& t : states_[q].out) {
      const bool to_final = t.target == final_;
      const bool sfx = to_final ? last_ok(t.symbol) : bwd[t.target];
      const bool sfx_as = to_final ? false : bwd_as[t.target];
      bool keep = sfx;
      if (filter.asn) keep = ((fwd_as[q] || is_wanted_as(t.symbol)) && sfx) || sfx_as;
      if (!keep) continue;
      keep_node[q] = keep_node[t.target] = 1;
      edges << "  q" << number[q] << " -> q" << number[t.target] << " [label=\""
            << t.symbol.to_string() << "\"];\n";
    }
  }

  std::ostringstream dot;
  dot << "digraph route_automaton {\n  rankdir=LR;\n  node [shape=circle];\n";
  for (StateId q : order) {
    if (!keep_node[q]) continue;
    dot << "  q" << number[q];
    if (q == final_) {
      dot << " [label=\"qf\", shape=doublecircle];\n";
    } else {
      dot << " [label=\"q" << number[q] << "\"];\n";
    }
  }
  dot << edges.str() << "}\n";
  return dot.str();
}

}  // namespace cair
