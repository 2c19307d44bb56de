#pragma once

// Finite route language domain types: AS numbers, IPv4 prefixes, the
// symbol alphabet shared by both, routes (words) and route sets.

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "cair/error.hpp"

namespace cair {

struct AsNumber {
  std::uint32_t value = 0;

  constexpr auto operator<=>(const AsNumber&) const = default;
};

// Parses a decimal ASN (plain or "asdot" high.low). Zero is reserved and
// rejected.
std::optional<AsNumber> parse_asn(std::string_view text);

enum class AddressFamily : std::uint8_t { IPv4 = 0 };

struct IpPrefix {
  std::uint32_t base = 0;  // host order; host bits are zero once normalized
  std::uint8_t length = 0;
  AddressFamily family = AddressFamily::IPv4;

  constexpr auto operator<=>(const IpPrefix&) const = default;

  static IpPrefix make(std::uint32_t base, std::uint8_t length);
  static std::optional<IpPrefix> parse(std::string_view text);

  bool covers(std::uint32_t address) const noexcept;
  std::string to_string() const;
};

// p_small is strictly more specific than p_big and inside it.
bool is_strict_subprefix(const IpPrefix& p_small, const IpPrefix& p_big) noexcept;

// One alphabet element. Packed into a 64-bit key whose integer order is the
// canonical symbol order: AS symbols by (asn, prepend index), then prefixes
// by (base, length).
class RouteSymbol {
 public:
  enum class Kind : std::uint8_t { As, Prefix };

  constexpr RouteSymbol() = default;

  static RouteSymbol as(AsNumber asn, std::uint16_t prepend_index = 1);
  static RouteSymbol prefix(const IpPrefix& p);
  static constexpr RouteSymbol from_key(std::uint64_t key) { return RouteSymbol(key); }

  Kind kind() const noexcept { return (key_ >> 63) ? Kind::Prefix : Kind::As; }
  bool is_as() const noexcept { return kind() == Kind::As; }
  bool is_prefix() const noexcept { return kind() == Kind::Prefix; }

  AsNumber as_value() const noexcept;
  std::uint16_t prepend_index() const noexcept;
  IpPrefix prefix_value() const noexcept;

  std::uint64_t key() const noexcept { return key_; }
  std::string to_string() const;

  constexpr auto operator<=>(const RouteSymbol&) const = default;

 private:
  constexpr explicit RouteSymbol(std::uint64_t key) : key_(key) {}
  std::uint64_t key_ = 0;
};

// Turns a raw AS path into prepend-indexed symbols. Consecutive repeats become
// o1, o2, ...; with `collapse_prepends` a run is reduced to a single o1.
// Throws Error{EmptyPath} or Error{LoopDetected} (asn() holds the AS).
std::vector<RouteSymbol> normalize_path(std::span<const AsNumber> raw_asns,
                                        bool collapse_prepends = false);

class Route {
 public:
  Route() = default;
  // Validates: non-empty AS-only path, no repeated symbol.
  Route(std::vector<RouteSymbol> path, IpPrefix prefix);

  static Route from_asns(std::span<const AsNumber> asns, IpPrefix prefix,
                         bool collapse_prepends = false);
  static Route from_asns(std::initializer_list<std::uint32_t> asns, IpPrefix prefix);

  const std::vector<RouteSymbol>& path() const noexcept { return path_; }
  const IpPrefix& prefix() const noexcept { return prefix_; }
  AsNumber origin() const noexcept { return path_.back().as_value(); }

  // Path symbols followed by the prefix symbol.
  std::vector<RouteSymbol> word() const;
  std::size_t word_length() const noexcept { return path_.size() + 1; }

  // Raw AS numbers with prepends written out, e.g. "701 701 20195".
  std::vector<AsNumber> raw_path() const;

  // Simple text format: "ASN ASN ...|A.B.C.D/L".
  std::string to_simple() const;

  // Word order (symbol-wise lexicographic).
  friend std::strong_ordering operator<=>(const Route& a, const Route& b);
  friend bool operator==(const Route& a, const Route& b) = default;

 private:
  std::vector<RouteSymbol> path_;
  IpPrefix prefix_;
};

class RouteSet {
 public:
  using const_iterator = std::set<Route>::const_iterator;

  RouteSet() = default;
  RouteSet(std::initializer_list<Route> routes);
  template <typename It>
  RouteSet(It first, It last) : routes_(first, last) {}

  // Returns false when the route was already present.
  bool insert(Route route);
  bool erase(const Route& route);
  bool contains(const Route& route) const;

  std::size_t size() const noexcept { return routes_.size(); }
  bool empty() const noexcept { return routes_.empty(); }
  const_iterator begin() const noexcept { return routes_.begin(); }
  const_iterator end() const noexcept { return routes_.end(); }

  std::vector<Route> to_vector() const { return {routes_.begin(), routes_.end()}; }

  friend bool operator==(const RouteSet&, const RouteSet&) = default;

 private:
  std::set<Route> routes_;
};

}  // namespace cair

template <>
struct std::hash<cair::RouteSymbol> {
  std::size_t operator()(const cair::RouteSymbol& s) const noexcept {
    std::uint64_t x = s.key() + 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return static_cast<std::size_t>(x ^ (x >> 31));
  }
};
