#include <random>

#include "kripkesec/oracle.hpp"

namespace kripkesec {

namespace {

class Gen {
 public:
  Gen(std::uint64_t seed, const GenBounds& b) : rng_(seed), b_(b) {
    for (std::size_t i = 0; i < b_.vars; ++i) vars_.push_back(std::string(1, static_cast<char>('a' + i)));
  }

  std::size_t pick(std::size_t n) { return static_cast<std::size_t>(rng_() % n); }

  const std::string& var() { return vars_[pick(vars_.size())]; }

  std::string expr() {
    switch (pick(7)) {
      case 0: return std::to_string(pick(2));
      case 1: return var();
      case 2: return "not " + var();
      case 3: return var() + " and " + var();
      case 4: return var() + " or " + var();
      case 5: return var() + " xor " + var();
      default: return var();
    }
  }

  // `budget` counts leaf statements still to place.
  std::string stmt(std::size_t& budget) {
    if (budget == 0) return "skip";
    std::size_t k = pick(10);
    if (budget >= 2 && k < 3) {
      --budget;
      std::string th = stmt(budget);
      std::string el = budget > 0 && pick(2) ? stmt(budget) : "";
      return "if " + expr() + " then (" + th + ")" + (el.empty() ? "" : " else (" + el + ")");
    }
    if (budget >= 2 && k < 5) {
      std::string a = stmt(budget);
      std::string b = stmt(budget);
      return a + "; " + b;
    }
    --budget;
    if (k == 5) return "skip";
    if (k == 6) return "loop";
    return var() + " := " + expr();
  }

  Generated run() {
    Generated g;
    std::size_t budget = 1 + pick(b_.stmts);
    std::string body = stmt(budget);
    g.source = "var ";
    for (std::size_t i = 0; i < vars_.size(); ++i) g.source += (i ? ", " : "") + vars_[i];
    g.source += " in {0,1}\n" + body + "\n";

    Policy& p = g.policy;
    p.agents = {"A"};
    auto& r = p.read["A"];
    auto& w = p.write["A"];
    for (const auto& v : vars_) {
      bool read = pick(2) == 0;
      bool write = pick(3) == 0;
      if (b_.write_within_read && write) read = true;
      if (read) r.push_back(v);
      if (write) w.push_back(v);
    }
    p.signals_termination = pick(4) != 0;
    g.program = parse_program(g.source);
    g.ctx = bind_policy(p, g.program);
    return g;
  }

 private:
  std::mt19937_64 rng_;
  GenBounds b_;
  std::vector<std::string> vars_;
};

}  // namespace

Generated gen_program(std::uint64_t seed, const GenBounds& bounds) {
  GenBounds b = bounds;
  if (b.vars == 0) b.vars = 1;
  if (b.vars > 26) b.vars = 26;
  if (b.stmts == 0) b.stmts = 1;
  return Gen(seed, b).run();
}

}  // namespace kripkesec
