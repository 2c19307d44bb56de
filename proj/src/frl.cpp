#include "cair/frl.hpp"

#include <algorithm>
#include <charconv>
#include <unordered_set>

namespace cair {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptyPath: return "EmptyPath";
    case ErrorCode::LoopDetected: return "LoopDetected";
    case ErrorCode::Malformed: return "Malformed";
    case ErrorCode::IoError: return "IoError";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptFile: return "CorruptFile";
    case ErrorCode::UnknownState: return "UnknownState";
    case ErrorCode::InvalidSpec: return "InvalidSpec";
    case ErrorCode::ContractViolation: return "ContractViolation";
  }
  return "Unknown";
}

namespace {

template <typename T>
std::optional<T> parse_uint(std::string_view text) {
  if (text.empty()) return std::nullopt;
  T value{};
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) return std::nullopt;
  return value;
}

constexpr std::uint64_t kPrefixBit = 1ULL << 63;

}  // namespace

std::optional<AsNumber> parse_asn(std::string_view text) {
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    auto high = parse_uint<std::uint16_t>(text.substr(0, dot));
    auto low = parse_uint<std::uint16_t>(text.substr(dot + 1));
    if (!high || !low) return std::nullopt;
    std::uint32_t v = (std::uint32_t{*high} << 16) | *low;
    if (v == 0) return std::nullopt;
    return AsNumber{v};
  }
  auto v = parse_uint<std::uint32_t>(text);
  if (!v || *v == 0) return std::nullopt;
  return AsNumber{*v};
}

// ---------------------------------------------------------------------------
// IpPrefix

IpPrefix IpPrefix::make(std::uint32_t base, std::uint8_t length) {
  if (length > 32) throw Error(ErrorCode::Malformed, "prefix length above 32");
  std::uint32_t mask = length == 0 ? 0 : ~std::uint32_t{0} << (32 - length);
  return IpPrefix{base & mask, length, AddressFamily::IPv4};
}

std::optional<IpPrefix> IpPrefix::parse(std::string_view text) {
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return std::nullopt;
  auto len = parse_uint<std::uint8_t>(text.substr(slash + 1));
  if (!len || *len > 32) return std::nullopt;

  std::string_view addr = text.substr(0, slash);
  std::uint32_t base = 0;
  for (int octet = 0; octet < 4; ++octet) {
    auto dot = addr.find('.');
    if ((octet < 3) == (dot == std::string_view::npos)) return std::nullopt;
    auto part = parse_uint<std::uint16_t>(addr.substr(0, dot));
    if (!part || *part > 255) return std::nullopt;
    base = (base << 8) | *part;
    addr = octet < 3 ? addr.substr(dot + 1) : std::string_view{};
  }
  return make(base, *len);
}

bool IpPrefix::covers(std::uint32_t address) const noexcept {
  if (length == 0) return true;
  std::uint32_t mask = ~std::uint32_t{0} << (32 - length);
  return (address & mask) == base;
}

std::string IpPrefix::to_string() const {
  return std::to_string(base >> 24) + '.' + std::to_string((base >> 16) & 0xff) + '.' +
         std::to_string((base >> 8) & 0xff) + '.' + std::to_string(base & 0xff) + '/' +
         std::to_string(length);
}

bool is_strict_subprefix(const IpPrefix& p_small, const IpPrefix& p_big) noexcept {
  return p_small.family == p_big.family && p_small.length > p_big.length &&
         p_big.covers(p_small.base);
}

// ---------------------------------------------------------------------------
// RouteSymbol

RouteSymbol RouteSymbol::as(AsNumber asn, std::uint16_t prepend_index) {
  if (prepend_index == 0) throw Error(ErrorCode::ContractViolation, "prepend index starts at 1");
  return RouteSymbol((std::uint64_t{asn.value} << 16) | prepend_index);
}

RouteSymbol RouteSymbol::prefix(const IpPrefix& p) {
  return RouteSymbol(kPrefixBit | (std::uint64_t(p.family) << 56) |
                     (std::uint64_t{p.base} << 8) | p.length);
}

AsNumber RouteSymbol::as_value() const noexcept {
  return AsNumber{static_cast<std::uint32_t>(key_ >> 16)};
}

std::uint16_t RouteSymbol::prepend_index() const noexcept {
  return static_cast<std::uint16_t>(key_ & 0xffff);
}

IpPrefix RouteSymbol::prefix_value() const noexcept {
  return IpPrefix{static_cast<std::uint32_t>(key_ >> 8), static_cast<std::uint8_t>(key_ & 0xff),
                  static_cast<AddressFamily>((key_ >> 56) & 0x7f)};
}

std::string RouteSymbol::to_string() const {
  if (is_prefix()) return prefix_value().to_string();
  std::string out = "AS" + std::to_string(as_value().value);
  if (prepend_index() > 1) out += "#" + std::to_string(prepend_index());
  return out;
}

// ---------------------------------------------------------------------------
// Paths and routes

std::vector<RouteSymbol> normalize_path(std::span<const AsNumber> raw_asns,
                                        bool collapse_prepends) {
  if (raw_asns.empty()) throw Error(ErrorCode::EmptyPath, "empty AS path");

  std::vector<RouteSymbol> out;
  out.reserve(raw_asns.size());
  std::unordered_set<std::uint32_t> seen;
  std::uint16_t run = 0;
  for (std::size_t i = 0; i < raw_asns.size(); ++i) {
    const AsNumber asn = raw_asns[i];
    if (i > 0 && raw_asns[i - 1] == asn) {
      if (collapse_prepends) continue;
      if (run == 0xffff) throw Error(ErrorCode::Malformed, "prepend run too long");
      out.push_back(RouteSymbol::as(asn, ++run));
      continue;
    }
    if (!seen.insert(asn.value).second) {
      throw Error(ErrorCode::LoopDetected, "AS" + std::to_string(asn.value) + " reappears in path",
                  asn.value);
    }
    run = 1;
    out.push_back(RouteSymbol::as(asn, 1));
  }
  return out;
}

Route::Route(std::vector<RouteSymbol> path, IpPrefix prefix)
    : path_(std::move(path)), prefix_(prefix) {
  if (path_.empty()) throw Error(ErrorCode::EmptyPath, "route without AS path");
  std::vector<std::uint64_t> keys;
  keys.reserve(path_.size());
  for (const auto& s : path_) {
    if (!s.is_as()) throw Error(ErrorCode::ContractViolation, "prefix symbol inside AS path");
    keys.push_back(s.key());
  }
  std::sort(keys.begin(), keys.end());
  if (std::adjacent_find(keys.begin(), keys.end()) != keys.end()) {
    throw Error(ErrorCode::ContractViolation, "route word repeats a symbol");
  }
}

Route Route::from_asns(std::span<const AsNumber> asns, IpPrefix prefix, bool collapse_prepends) {
  return Route(normalize_path(asns, collapse_prepends), prefix);
}

Route Route::from_asns(std::initializer_list<std::uint32_t> asns, IpPrefix prefix) {
  std::vector<AsNumber> raw;
  for (auto a : asns) raw.push_back(AsNumber{a});
  return from_asns(raw, prefix);
}

std::vector<RouteSymbol> Route::word() const {
  std::vector<RouteSymbol> w = path_;
  w.push_back(RouteSymbol::prefix(prefix_));
  return w;
}

std::vector<AsNumber> Route::raw_path() const {
  std::vector<AsNumber> out;
  out.reserve(path_.size());
  for (const auto& s : path_) out.push_back(s.as_value());
  return out;
}

std::string Route::to_simple() const {
  std::string out;
  for (std::size_t i = 0; i < path_.size(); ++i) {
    if (i) out += ' ';
    out += std::to_string(path_[i].as_value().value);
  }
  out += '|';
  out += prefix_.to_string();
  return out;
}

std::strong_ordering operator<=>(const Route& a, const Route& b) {
  const std::size_t n = std::min(a.path_.size(), b.path_.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.path_[i] <=> b.path_[i]; c != 0) return c;
  }
  // At index n one word continues with an AS symbol, the other with its
  // prefix; AS symbols order first.
  if (a.path_.size() != b.path_.size()) {
    return a.path_.size() > b.path_.size() ? std::strong_ordering::less
                                           : std::strong_ordering::greater;
  }
  return RouteSymbol::prefix(a.prefix_) <=> RouteSymbol::prefix(b.prefix_);
}

// ---------------------------------------------------------------------------
// RouteSet

RouteSet::RouteSet(std::initializer_list<Route> routes) {
  for (const auto& r : routes) routes_.insert(r);
}

bool RouteSet::insert(Route route) { return routes_.insert(std::move(route)).second; }
bool RouteSet::erase(const Route& route) { return routes_.erase(route) > 0; }
bool RouteSet::contains(const Route& route) const { return routes_.count(route) > 0; }

}  // namespace cair
