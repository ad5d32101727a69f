#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace kripkesec {

using Int = std::int64_t;

// A runtime value. Ordinary program variables hold scalars; the channel
// variables O and I hold lists (head first) and the endorsement set E holds
// a sorted list of endorsement-token ids.
struct Value {
  enum class Kind : std::uint8_t { kScalar, kList, kTagSet };

  Kind kind = Kind::kScalar;
  Int scalar = 0;
  std::vector<Int> items;

  static Value of(Int v) { return Value{Kind::kScalar, v, {}}; }
  static Value list(std::vector<Int> xs) { return Value{Kind::kList, 0, std::move(xs)}; }
  static Value tags(std::vector<Int> xs) { return Value{Kind::kTagSet, 0, std::move(xs)}; }

  bool is_scalar() const { return kind == Kind::kScalar; }

  friend auto operator<=>(const Value&, const Value&) = default;
  friend bool operator==(const Value&, const Value&) = default;
};

std::string to_string(const Value& v);

// Indexed by variable id, in declaration order.
using Store = std::vector<Value>;

struct ValueHash {
  std::size_t operator()(const Value& v) const noexcept;
};

struct StoreHash {
  std::size_t operator()(const Store& s) const noexcept;
};

inline void hash_combine(std::size_t& seed, std::size_t h) {
  seed ^= h + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2);
}

}  // namespace kripkesec
