#include <cctype>
#include <charconv>

#include "kripkesec/errors.hpp"
#include "kripkesec/mlogic.hpp"

namespace kripkesec {

namespace {

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view s) : s_(s) {}

  Formula parse() {
    Formula f = implication();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected '" + std::string(1, s_[pos_]) + "'");
    return f;
  }

 private:
  std::string_view s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError(what, 1, static_cast<int>(pos_) + 1);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool eat(std::string_view tok) {
    skip_ws();
    if (s_.substr(pos_, tok.size()) != tok) return false;
    // keywords must not run into an identifier
    if (std::isalpha(static_cast<unsigned char>(tok.back())) && pos_ + tok.size() < s_.size()) {
      char c = s_[pos_ + tok.size()];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_') return false;
    }
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!eat(tok)) fail("expected '" + std::string(tok) + "'");
  }

  std::string ident() {
    skip_ws();
    std::size_t b = pos_;
    while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
    if (b == pos_) fail("expected identifier");
    return std::string(s_.substr(b, pos_ - b));
  }

  Int integer() {
    skip_ws();
    std::size_t b = pos_;
    if (pos_ < s_.size() && s_[pos_] == '-') ++pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    Int v = 0;
    auto [p, ec] = std::from_chars(s_.data() + b, s_.data() + pos_, v);
    if (ec != std::errc() || p != s_.data() + pos_) {
      pos_ = b;
      fail("expected integer");
    }
    return v;
  }

  Formula implication() {
    Formula a = disjunction();
    if (eat("->")) return fm::implies(a, implication());
    return a;
  }

  Formula disjunction() {
    Formula a = conjunction();
    while (eat("or") || eat("||")) a = fm::disj(a, conjunction());
    return a;
  }

  Formula conjunction() {
    Formula a = unary();
    while (eat("and") || eat("&&")) a = fm::conj(a, unary());
    return a;
  }

  RelRef relation() {
    expect("(");
    skip_ws();
    RelRef r;
    if (eat("T")) {
      r.rel = Rel::kT;
    } else {
      if (eat("KC")) r.rel = Rel::kKC;
      else if (eat("KP")) r.rel = Rel::kKP;
      else if (eat("WC")) r.rel = Rel::kWC;
      else if (eat("WP")) r.rel = Rel::kWP;
      else if (eat("K#")) r.rel = Rel::kCount;
      else fail("expected relation T, KC[A], KP[A], WC[A], WP[A] or K#[A]");
      expect("[");
      r.agent = ident();
      expect("]");
    }
    expect(")");
    return r;
  }

  Formula unary() {
    if (eat("not") || eat("!")) return fm::neg(unary());
    if (eat("always")) return fm::always(unary());
    if (eat("eventually")) return fm::eventually(unary());
    if (eat("box")) {
      RelRef r = relation();
      return fm::box(r.rel, r.agent, unary());
    }
    if (eat("dia")) {
      RelRef r = relation();
      return fm::dia(r.rel, r.agent, unary());
    }
    return primary();
  }

  Formula primary() {
    if (eat("(")) {
      Formula f = implication();
      expect(")");
      return f;
    }
    if (eat("true")) return fm::top();
    if (eat("false")) return fm::bottom();
    if (eat("halted")) return fm::halted();
    if (eat("S")) return fm::placeholder();
    if (eat("set")) {
      expect("(");
      TSProperty p;
      if (!eat(")")) {
        do {
          if (eat("-")) {
            p.cuts.push_back(kNone);
          } else {
            Int c = integer();
            if (c < 0) fail("negative cut");
            p.cuts.push_back(static_cast<std::uint32_t>(c));
          }
        } while (eat(","));
        expect(")");
      }
      return fm::set(std::move(p));
    }
    std::string v = ident();
    expect("@");
    Int tau = integer();
    if (tau < 0) fail("negative time index");
    expect("=");
    Int value = integer();
    return fm::atom(std::move(v), static_cast<std::uint32_t>(tau), value);
  }
};

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

}  // namespace kripkesec
