#include "kripkesec/value.hpp"

namespace kripkesec {

std::string to_string(const Value& v) {
  if (v.kind == Value::Kind::kScalar) return std::to_string(v.scalar);
  std::string out = v.kind == Value::Kind::kList ? "[" : "{";
  for (std::size_t i = 0; i < v.items.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(v.items[i]);
  }
  out += v.kind == Value::Kind::kList ? "]" : "}";
  return out;
}

std::size_t ValueHash::operator()(const Value& v) const noexcept {
  std::size_t h = std::hash<Int>{}(v.scalar) ^ (static_cast<std::size_t>(v.kind) << 1);
  for (Int x : v.items) hash_combine(h, std::hash<Int>{}(x));
  return h;
}

std::size_t StoreHash::operator()(const Store& s) const noexcept {
  std::size_t h = s.size();
  ValueHash vh;
  for (const auto& v : s) hash_combine(h, vh(v));
  return h;
}

}  // namespace kripkesec
