#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace kripkesec {

// Fixed-universe bitset over world indices.
class WorldSet {
 public:
  WorldSet() = default;
  explicit WorldSet(std::size_t n, bool full = false) : n_(n), words_((n + 63) / 64, 0) {
    if (full) fill();
  }

  std::size_t universe() const { return n_; }

  bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }
  void set(std::size_t i) { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
  void reset(std::size_t i) { words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63)); }
  void assign(std::size_t i, bool v) { v ? set(i) : reset(i); }

  void clear() {
    for (auto& w : words_) w = 0;
  }
  void fill() {
    for (auto& w : words_) w = ~std::uint64_t{0};
    trim();
  }

  bool any() const {
    for (auto w : words_)
      if (w) return true;
    return false;
  }
  bool none() const { return !any(); }
  std::size_t count() const {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    return c;
  }
  bool all() const { return count() == n_; }

  WorldSet& operator&=(const WorldSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
    return *this;
  }
  WorldSet& operator|=(const WorldSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
    return *this;
  }
  WorldSet& subtract(const WorldSet& o) {
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
    return *this;
  }
  void flip() {
    for (auto& w : words_) w = ~w;
    trim();
  }
  bool subset_of(const WorldSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & ~o.words_[i]) return false;
    return true;
  }
  bool intersects(const WorldSet& o) const {
    for (std::size_t i = 0; i < words_.size(); ++i)
      if (words_[i] & o.words_[i]) return true;
    return false;
  }

  // dst = a op b without allocation; all operands share the universe
  static void and_of(WorldSet& dst, const WorldSet& a, const WorldSet& b) {
    for (std::size_t i = 0; i < dst.words_.size(); ++i) dst.words_[i] = a.words_[i] & b.words_[i];
  }
  static void or_of(WorldSet& dst, const WorldSet& a, const WorldSet& b) {
    for (std::size_t i = 0; i < dst.words_.size(); ++i) dst.words_[i] = a.words_[i] | b.words_[i];
  }
  static void implies_of(WorldSet& dst, const WorldSet& a, const WorldSet& b) {
    for (std::size_t i = 0; i < dst.words_.size(); ++i) dst.words_[i] = ~a.words_[i] | b.words_[i];
    dst.trim();
  }
  static void not_of(WorldSet& dst, const WorldSet& a) {
    for (std::size_t i = 0; i < dst.words_.size(); ++i) dst.words_[i] = ~a.words_[i];
    dst.trim();
  }

  template <class F>
  void for_each(F&& f) const {
    for (std::size_t i = 0; i < words_.size(); ++i) {
      std::uint64_t w = words_[i];
      while (w) {
        f(i * 64 + static_cast<std::size_t>(std::countr_zero(w)));
        w &= w - 1;
      }
    }
  }

  std::vector<std::size_t> elements() const {
    std::vector<std::size_t> out;
    for_each([&](std::size_t i) { out.push_back(i); });
    return out;
  }

  friend bool operator==(const WorldSet&, const WorldSet&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<std::uint64_t> words_;

  void trim() {
    if (n_ % 64 && !words_.empty()) words_.back() &= (std::uint64_t{1} << (n_ % 64)) - 1;
  }
};

}  // namespace kripkesec
