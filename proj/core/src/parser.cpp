#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/errors.hpp"
#include "kripkesec/lang.hpp"

namespace kripkesec {

namespace {

enum class Tok { kIdent, kInt, kSym, kNewline, kEof };

struct Token {
  Tok kind;
  std::string text;
  Int value = 0;
  std::size_t line = 1;
  std::size_t col = 1;
};

// Multi-byte operators are normalised to their ASCII spelling.
struct Spelling {
  std::string_view from;
  std::string_view to;
};

constexpr Spelling kSymbols[] = {
    {"¬", "!"},   {"∧", "&&"}, {"∨", "||"}, {"⊕", "^"},   {"≠", "!="},
    {"≤", "<="},  {"≥", ">="}, {"∪", "union"}, {"−", "-"}, {"≔", ":="},
    {":=", ":="}, {"::", "::"}, {"..", ".."}, {"!=", "!="}, {"<=", "<="},
    {">=", ">="}, {"&&", "&&"}, {"||", "||"}, {"==", "="}, {"=", "="},
    {"<", "<"},   {">", ">"},  {"+", "+"},  {"-", "-"},   {"*", "*"},
    {"(", "("},   {")", ")"},  {"{", "{"},  {"}", "}"},   {"[", "["},
    {"]", "]"},   {",", ","},  {";", ";"},  {"!", "!"},   {"~", "!"},
    {"&", "&&"},  {"|", "||"}, {"^", "^"},
};

std::vector<Token> lex(std::string_view src) {
  std::vector<Token> out;
  std::size_t i = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t k = 0; k < n; ++k) {
      // count columns in code points
      if ((static_cast<unsigned char>(src[i]) & 0xC0) != 0x80) ++col;
      ++i;
    }
  };
  while (i < src.size()) {
    char c = src[i];
    if (c == '\n') {
      out.push_back({Tok::kNewline, "\n", 0, line, col});
      ++i;
      ++line;
      col = 1;
      continue;
    }
    if (c == ' ' || c == '\t' || c == '\r') {
      advance(1);
      continue;
    }
    if (c == '#') {
      while (i < src.size() && src[i] != '\n') ++i;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      std::size_t j = i;
      Int v = 0;
      while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j]))) {
        if (__builtin_mul_overflow(v, 10, &v) || __builtin_add_overflow(v, src[j] - '0', &v))
          throw ParseError("integer literal too large", line, col);
        ++j;
      }
      out.push_back({Tok::kInt, std::string(src.substr(i, j - i)), v, line, col});
      advance(j - i);
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < src.size() &&
             (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_' || src[j] == '\''))
        ++j;
      out.push_back({Tok::kIdent, std::string(src.substr(i, j - i)), 0, line, col});
      advance(j - i);
      continue;
    }
    bool matched = false;
    for (const auto& s : kSymbols) {
      if (src.substr(i, s.from.size()) == s.from) {
        out.push_back({Tok::kSym, std::string(s.to), 0, line, col});
        advance(s.from.size());
        matched = true;
        break;
      }
    }
    if (!matched) throw ParseError("unexpected character", line, col);
  }
  out.push_back({Tok::kEof, "", 0, line, col});
  return out;
}

bool is_reserved_name(std::string_view n) { return n == "O" || n == "I" || n == "E"; }

const char* type_name(VarType t) {
  switch (t) {
    case VarType::kScalar: return "scalar";
    case VarType::kList: return "list";
    case VarType::kTagSet: return "set";
  }
  return "?";
}

class Parser {
 public:
  Parser(std::vector<Token> toks, SymbolTable& syms, Ast& ast, bool implicit)
      : toks_(std::move(toks)), syms_(syms), ast_(ast), implicit_(implicit) {}

  StmtId program() {
    std::vector<StmtId> items;
    skip_separators();
    while (!at(Tok::kEof)) {
      if (is_word("var")) {
        declaration();
      } else {
        items.push_back(statement());
      }
      if (!at(Tok::kEof)) {
        if (!at_separator()) fail("expected ';' or newline");
        skip_separators();
      }
    }
    return make_seq(std::move(items));
  }

  ExprId standalone_expression() {
    skip_newlines();
    ExprId e = expression();
    skip_newlines();
    if (!at(Tok::kEof)) fail("unexpected trailing input");
    return e;
  }

  static Value literal_value(const std::vector<Token>& toks, std::size_t& pos);

 private:
  std::vector<Token> toks_;
  std::size_t pos_ = 0;
  SymbolTable& syms_;
  Ast& ast_;
  bool implicit_;

  const Token& cur() const { return toks_[pos_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool is_sym(std::string_view s) const { return cur().kind == Tok::kSym && cur().text == s; }
  bool is_word(std::string_view s) const { return cur().kind == Tok::kIdent && cur().text == s; }
  bool at_separator() const { return at(Tok::kNewline) || is_sym(";"); }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(msg, t.line, t.col);
  }

  void skip_newlines() {
    while (at(Tok::kNewline)) ++pos_;
  }
  void skip_separators() {
    while (at_separator()) ++pos_;
  }

  // Looks past newlines for a keyword; consumes them only on a match.
  bool peek_word_past_newlines(std::string_view w) {
    std::size_t p = pos_;
    while (toks_[p].kind == Tok::kNewline) ++p;
    if (toks_[p].kind == Tok::kIdent && toks_[p].text == w) {
      pos_ = p;
      return true;
    }
    return false;
  }

  void expect_sym(std::string_view s) {
    if (!is_sym(s)) fail("expected '" + std::string(s) + "'");
    ++pos_;
  }
  void expect_word(std::string_view w) {
    skip_newlines();
    if (!is_word(w)) fail("expected '" + std::string(w) + "'");
    ++pos_;
  }
  std::string ident() {
    if (!at(Tok::kIdent) || is_keyword(cur().text)) fail("expected identifier");
    return toks_[pos_++].text;
  }

  static bool is_keyword(std::string_view w) {
    static constexpr std::string_view kw[] = {
        "skip", "if", "then", "else", "while", "do", "for", "loop", "endorse",
        "output", "input", "var", "in", "true", "false", "begin", "end", "head",
        "tail", "and", "or", "not", "xor", "union"};
    for (auto k : kw)
      if (k == w) return true;
    return false;
  }

  VarId ensure_reserved(std::string_view name) {
    if (auto id = syms_.find(name)) return *id;
    Variable v;
    v.name = std::string(name);
    v.reserved = true;
    if (name == "E") {
      v.type = VarType::kTagSet;
      v.domain = {Value::tags({})};
    } else {
      v.type = VarType::kList;
      v.domain = {Value::list({})};
    }
    syms_.vars.push_back(std::move(v));
    VarId id = static_cast<VarId>(syms_.vars.size() - 1);
    if (name == "O") syms_.out = id;
    if (name == "I") syms_.in = id;
    if (name == "E") syms_.endorsed = id;
    return id;
  }

  VarId lookup(const Token& at_tok, const std::string& name) {
    if (is_reserved_name(name)) return ensure_reserved(name);
    if (auto id = syms_.find(name)) return *id;
    if (!implicit_) fail_at(at_tok, "undeclared variable '" + name + "'");
    Variable v;
    v.name = name;
    v.domain = {Value::of(0), Value::of(1)};
    syms_.vars.push_back(std::move(v));
    return static_cast<VarId>(syms_.vars.size() - 1);
  }

  VarId variable() {
    const Token t = cur();
    std::string name = ident();
    return lookup(t, name);
  }

  void declaration() {
    ++pos_;  // var
    std::vector<Token> names;
    do {
      if (!names.empty()) ++pos_;  // ','
      names.push_back(cur());
      ident();
    } while (is_sym(","));
    if (!is_word("in")) fail("expected 'in'");
    ++pos_;
    std::vector<Value> dom = domain();
    for (const auto& n : names) {
      if (n.text == "E") fail_at(n, "reserved variable collision: 'E'");
      if (is_reserved_name(n.text)) {
        for (const auto& v : dom)
          if (v.kind != Value::Kind::kList)
            fail_at(n, "reserved variable collision: '" + n.text + "' holds lists");
        VarId id = ensure_reserved(n.text);
        syms_.vars[id].domain = dom;
        continue;
      }
      if (syms_.find(n.text)) fail_at(n, "duplicate declaration of '" + n.text + "'");
      for (const auto& v : dom)
        if (v.kind != Value::Kind::kScalar) fail_at(n, "scalar variable with list domain");
      Variable v;
      v.name = n.text;
      v.domain = dom;
      syms_.vars.push_back(std::move(v));
    }
  }

  std::vector<Value> domain() {
    std::vector<Value> out;
    if (is_word("bool")) {
      ++pos_;
      return {Value::of(0), Value::of(1)};
    }
    if (is_sym("{")) {
      ++pos_;
      while (!is_sym("}")) {
        if (!out.empty()) expect_sym(",");
        Value v = literal_value(toks_, pos_);
        bool dup = false;
        for (const auto& x : out) dup = dup || x == v;
        if (!dup) out.push_back(v);
      }
      ++pos_;
    } else {
      Int lo = signed_int();
      expect_sym("..");
      Int hi = signed_int();
      if (hi < lo) fail("empty range");
      if (hi - lo > 4096) fail("range too large");
      for (Int x = lo; x <= hi; ++x) out.push_back(Value::of(x));
    }
    if (out.empty()) fail("empty domain");
    return out;
  }

  Int signed_int() {
    bool neg = false;
    if (is_sym("-")) {
      neg = true;
      ++pos_;
    }
    if (!at(Tok::kInt)) fail("expected integer");
    Int v = toks_[pos_++].value;
    return neg ? -v : v;
  }

  StmtId make_seq(std::vector<StmtId> items) {
    if (items.empty()) return ast_.add(Stmt{StmtKind::kSkip});
    if (items.size() == 1) return items[0];
    Stmt s{StmtKind::kSeq};
    s.children = std::move(items);
    return ast_.add(std::move(s));
  }

  StmtId block(std::string_view close) {
    std::vector<StmtId> items;
    skip_separators();
    while (!(close == "end" ? is_word("end") : is_sym(close))) {
      if (at(Tok::kEof)) fail("unterminated block");
      items.push_back(statement());
      if (!(close == "end" ? is_word("end") : is_sym(close))) {
        if (!at_separator()) fail("expected ';' or newline");
        skip_separators();
      }
    }
    ++pos_;
    return make_seq(std::move(items));
  }

  StmtId statement() {
    skip_newlines();
    const Token t = cur();
    if (is_sym("(")) {
      ++pos_;
      return block(")");
    }
    if (is_sym("{")) {
      ++pos_;
      return block("}");
    }
    if (t.kind != Tok::kIdent) fail("expected statement");
    if (is_word("begin")) {
      ++pos_;
      return block("end");
    }
    if (is_word("skip")) {
      ++pos_;
      return ast_.add(Stmt{StmtKind::kSkip});
    }
    if (is_word("loop")) {
      ++pos_;
      return ast_.add(Stmt{StmtKind::kLoop});
    }
    if (is_word("if")) {
      ++pos_;
      ExprId c = scalar_expression();
      expect_word("then");
      StmtId th = statement();
      StmtId el;
      if (peek_word_past_newlines("else")) {
        ++pos_;
        el = statement();
      } else {
        el = ast_.add(Stmt{StmtKind::kSkip});
      }
      Stmt s{StmtKind::kIf};
      s.e1 = c;
      s.children = {th, el};
      return ast_.add(std::move(s));
    }
    if (is_word("while")) {
      ++pos_;
      ExprId c = scalar_expression();
      expect_word("do");
      StmtId body = statement();
      Stmt s{StmtKind::kWhile};
      s.e1 = c;
      s.children = {body};
      return ast_.add(std::move(s));
    }
    if (is_word("for")) {
      ++pos_;
      VarId v = scalar_variable();
      if (is_sym("=") || is_sym(":=")) {
        ++pos_;
      } else {
        fail("expected '='");
      }
      ExprId lo = scalar_expression();
      expect_sym("..");
      ExprId hi = scalar_expression();
      expect_word("do");
      StmtId body = statement();
      Stmt s{StmtKind::kFor};
      s.var = v;
      s.e1 = lo;
      s.e2 = hi;
      s.children = {body};
      return ast_.add(std::move(s));
    }
    if (is_word("endorse")) {
      ++pos_;
      expect_sym("(");
      if (!at(Tok::kIdent)) fail("expected agent name");
      std::string agent = toks_[pos_++].text;
      expect_sym(",");
      VarId v = variable();
      expect_sym(")");
      ensure_reserved("E");
      Stmt s{StmtKind::kEndorse};
      s.var = v;
      s.token = syms_.intern_token(agent, v);
      return ast_.add(std::move(s));
    }
    if (is_word("output")) {
      ++pos_;
      expect_sym("(");
      ExprId e = scalar_expression();
      expect_sym(")");
      ensure_reserved("O");
      Stmt s{StmtKind::kOutput};
      s.e1 = e;
      return ast_.add(std::move(s));
    }
    if (is_word("input")) {
      ++pos_;
      expect_sym("(");
      VarId v = scalar_variable();
      expect_sym(")");
      ensure_reserved("I");
      Stmt s{StmtKind::kInput};
      s.var = v;
      return ast_.add(std::move(s));
    }
    VarId v = variable();
    if (!is_sym(":=")) fail("expected ':='");
    ++pos_;
    const Token et = cur();
    ExprId e = expression();
    VarType want = syms_.vars[v].type;
    VarType got = type_of(e);
    if (want != got)
      fail_at(et, std::string("cannot assign ") + type_name(got) + " to " + type_name(want) +
                      " variable '" + syms_.vars[v].name + "'");
    Stmt s{StmtKind::kAssign};
    s.var = v;
    s.e1 = e;
    return ast_.add(std::move(s));
  }

  VarId scalar_variable() {
    const Token t = cur();
    VarId v = variable();
    if (syms_.vars[v].type != VarType::kScalar) fail_at(t, "expected scalar variable");
    return v;
  }

  VarType type_of(ExprId e) const {
    const Expr& x = ast_.exprs[e];
    switch (x.op) {
      case Op::kVar: return syms_.vars[x.var].type;
      case Op::kNil:
      case Op::kCons:
      case Op::kTail: return VarType::kList;
      case Op::kTagInsert: return VarType::kTagSet;
      default: return VarType::kScalar;
    }
  }

  ExprId scalar_expression() {
    const Token t = cur();
    ExprId e = expression();
    if (type_of(e) != VarType::kScalar) fail_at(t, "expected scalar expression");
    return e;
  }

  ExprId binary(Op op, ExprId l, ExprId r, const Token& t) {
    VarType lt = type_of(l), rt = type_of(r);
    if (op == Op::kEq || op == Op::kNe) {
      if (lt != rt) fail_at(t, "comparison of mismatched types");
    } else if (op == Op::kCons) {
      if (lt != VarType::kScalar || rt != VarType::kList) fail_at(t, "'::' expects scalar :: list");
    } else if (lt != VarType::kScalar || rt != VarType::kScalar) {
      fail_at(t, "operator expects scalar operands");
    }
    Expr x;
    x.op = op;
    x.lhs = l;
    x.rhs = r;
    return ast_.add(x);
  }

  ExprId expression() { return disjunction(); }

  ExprId disjunction() {
    ExprId l = exclusive();
    while (is_sym("||") || is_word("or")) {
      Token t = toks_[pos_++];
      l = binary(Op::kOr, l, exclusive(), t);
    }
    return l;
  }
  ExprId exclusive() {
    ExprId l = conjunction();
    while (is_sym("^") || is_word("xor")) {
      Token t = toks_[pos_++];
      l = binary(Op::kXor, l, conjunction(), t);
    }
    return l;
  }
  ExprId conjunction() {
    ExprId l = comparison();
    while (is_sym("&&") || is_word("and")) {
      Token t = toks_[pos_++];
      l = binary(Op::kAnd, l, comparison(), t);
    }
    return l;
  }
  ExprId comparison() {
    ExprId l = cons();
    struct M {
      std::string_view s;
      Op op;
    };
    static constexpr M ms[] = {{"=", Op::kEq},  {"!=", Op::kNe}, {"<", Op::kLt},
                               {"<=", Op::kLe}, {">", Op::kGt},  {">=", Op::kGe}};
    for (const auto& m : ms) {
      if (is_sym(m.s)) {
        Token t = toks_[pos_++];
        return binary(m.op, l, cons(), t);
      }
    }
    return l;
  }
  ExprId cons() {
    ExprId l = additive();
    if (is_sym("::")) {
      Token t = toks_[pos_++];
      return binary(Op::kCons, l, cons(), t);
    }
    return l;
  }
  ExprId additive() {
    ExprId l = multiplicative();
    while (is_sym("+") || is_sym("-")) {
      Token t = toks_[pos_++];
      l = binary(t.text == "+" ? Op::kAdd : Op::kSub, l, multiplicative(), t);
    }
    return l;
  }
  ExprId multiplicative() {
    ExprId l = unary();
    while (is_sym("*")) {
      Token t = toks_[pos_++];
      l = binary(Op::kMul, l, unary(), t);
    }
    return l;
  }
  ExprId unary() {
    if (is_sym("!") || is_word("not") || is_sym("-")) {
      Token t = toks_[pos_++];
      ExprId e = unary();
      if (type_of(e) != VarType::kScalar) fail_at(t, "operator expects scalar operand");
      Expr x;
      x.op = t.text == "-" ? Op::kNeg : Op::kNot;
      x.lhs = e;
      return ast_.add(x);
    }
    return primary();
  }
  ExprId primary() {
    const Token t = cur();
    if (at(Tok::kInt)) {
      ++pos_;
      Expr x;
      x.value = t.value;
      return ast_.add(x);
    }
    if (is_word("true") || is_word("false")) {
      ++pos_;
      Expr x;
      x.value = t.text == "true" ? 1 : 0;
      return ast_.add(x);
    }
    if (is_sym("(")) {
      ++pos_;
      ExprId e = expression();
      expect_sym(")");
      return e;
    }
    if (is_sym("[")) {
      ++pos_;
      std::vector<ExprId> elems;
      while (!is_sym("]")) {
        if (!elems.empty()) expect_sym(",");
        elems.push_back(scalar_expression());
      }
      ++pos_;
      Expr nil;
      nil.op = Op::kNil;
      ExprId acc = ast_.add(nil);
      for (auto it = elems.rbegin(); it != elems.rend(); ++it) acc = binary(Op::kCons, *it, acc, t);
      return acc;
    }
    if (is_word("head") || is_word("tail")) {
      bool head = t.text == "head";
      ++pos_;
      expect_sym("(");
      ExprId e = expression();
      expect_sym(")");
      if (type_of(e) != VarType::kList) fail_at(t, "head/tail expect a list");
      Expr x;
      x.op = head ? Op::kHead : Op::kTail;
      x.lhs = e;
      return ast_.add(x);
    }
    if (at(Tok::kIdent) && !is_keyword(t.text)) {
      Expr x;
      x.op = Op::kVar;
      x.var = variable();
      return ast_.add(x);
    }
    fail("expected expression");
  }
};

Value Parser::literal_value(const std::vector<Token>& toks, std::size_t& pos) {
  auto sint = [&]() -> Int {
    bool neg = false;
    if (toks[pos].kind == Tok::kSym && toks[pos].text == "-") {
      neg = true;
      ++pos;
    }
    if (toks[pos].kind != Tok::kInt) throw ParseError("expected integer", toks[pos].line, toks[pos].col);
    Int v = toks[pos++].value;
    return neg ? -v : v;
  };
  if (toks[pos].kind == Tok::kSym && toks[pos].text == "[") {
    ++pos;
    std::vector<Int> items;
    while (!(toks[pos].kind == Tok::kSym && toks[pos].text == "]")) {
      if (!items.empty()) {
        if (!(toks[pos].kind == Tok::kSym && toks[pos].text == ","))
          throw ParseError("expected ','", toks[pos].line, toks[pos].col);
        ++pos;
      }
      items.push_back(sint());
    }
    ++pos;
    return Value::list(std::move(items));
  }
  if (toks[pos].kind == Tok::kIdent && (toks[pos].text == "true" || toks[pos].text == "false"))
    return Value::of(toks[pos++].text == "true" ? 1 : 0);
  return Value::of(sint());
}

bool declares_variables(const std::vector<Token>& toks) {
  bool line_start = true;
  for (const auto& t : toks) {
    if (line_start && t.kind == Tok::kIdent && t.text == "var") return true;
    line_start = t.kind == Tok::kNewline || (t.kind == Tok::kSym && t.text == ";");
  }
  return false;
}

}  // namespace

std::optional<VarId> SymbolTable::find(std::string_view name) const {
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (vars[i].name == name) return static_cast<VarId>(i);
  return std::nullopt;
}

VarId SymbolTable::require(std::string_view name) const {
  if (auto id = find(name)) return *id;
  throw Error("unknown variable '" + std::string(name) + "'");
}

std::uint32_t SymbolTable::intern_token(const std::string& agent, VarId var) {
  for (std::size_t i = 0; i < tokens.size(); ++i)
    if (tokens[i].agent == agent && tokens[i].var == var) return static_cast<std::uint32_t>(i);
  tokens.push_back({agent, var});
  return static_cast<std::uint32_t>(tokens.size() - 1);
}

std::string SymbolTable::token_name(std::uint32_t token) const {
  return "(" + tokens.at(token).agent + "," + vars.at(tokens.at(token).var).name + ")";
}

Program parse_program(std::string_view text) {
  Program p;
  p.text = std::string(text);
  auto toks = lex(text);
  bool implicit = !declares_variables(toks);
  Parser parser(std::move(toks), p.syms, p.ast, implicit);
  p.ast.root = parser.program();
  p.core = desugar(p.ast, p.syms);
  return p;
}

Ast parse_expression(std::string_view text, const SymbolTable& syms, ExprId* root) {
  Ast ast;
  SymbolTable copy = syms;
  Parser parser(lex(text), copy, ast, false);
  *root = parser.standalone_expression();
  return ast;
}

Value parse_value(std::string_view text) {
  auto toks = lex(text);
  std::size_t pos = 0;
  Value v = Parser::literal_value(toks, pos);
  if (toks[pos].kind != Tok::kEof) throw ParseError("trailing input", toks[pos].line, toks[pos].col);
  return v;
}

}  // namespace kripkesec
