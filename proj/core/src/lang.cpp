#include "kripkesec/lang.hpp"

#include <algorithm>

namespace kripkesec {

namespace {

class Desugarer {
 public:
  Desugarer(const Ast& in, const SymbolTable& syms) : in_(in), syms_(syms) {
    out_.exprs = in.exprs;
  }

  Ast run() {
    out_.root = in_.root == kNone ? kNone : lower(in_.root);
    return std::move(out_);
  }

 private:
  const Ast& in_;
  const SymbolTable& syms_;
  Ast out_;

  ExprId var(VarId v) {
    Expr e;
    e.op = Op::kVar;
    e.var = v;
    return out_.add(e);
  }
  ExprId node(Op op, ExprId l, ExprId r = kNone) {
    Expr e;
    e.op = op;
    e.lhs = l;
    e.rhs = r;
    return out_.add(e);
  }
  ExprId lit(Int v) {
    Expr e;
    e.value = v;
    return out_.add(e);
  }
  StmtId assign(VarId v, ExprId e) {
    Stmt s{StmtKind::kAssign};
    s.var = v;
    s.e1 = e;
    return out_.add(std::move(s));
  }
  StmtId seq(std::vector<StmtId> xs) {
    Stmt s{StmtKind::kSeq};
    s.children = std::move(xs);
    return out_.add(std::move(s));
  }
  StmtId loop_while(ExprId c, StmtId body) {
    Stmt s{StmtKind::kWhile};
    s.e1 = c;
    s.children = {body};
    return out_.add(std::move(s));
  }

  StmtId lower(StmtId id) {
    const Stmt& s = in_.stmts[id];
    switch (s.kind) {
      case StmtKind::kSkip:
      case StmtKind::kAssign: return out_.add(Stmt(s));
      case StmtKind::kSeq: {
        std::vector<StmtId> xs;
        for (StmtId c : s.children) xs.push_back(lower(c));
        return seq(std::move(xs));
      }
      case StmtKind::kIf: {
        Stmt t{StmtKind::kIf};
        t.e1 = s.e1;
        StmtId a = lower(s.children[0]);
        StmtId b = lower(s.children[1]);
        t.children = {a, b};
        return out_.add(std::move(t));
      }
      case StmtKind::kWhile: {
        StmtId body = lower(s.children[0]);
        return loop_while(s.e1, body);
      }
      case StmtKind::kLoop: {
        StmtId body = out_.add(Stmt{StmtKind::kSkip});
        return loop_while(lit(1), body);
      }
      case StmtKind::kFor: {
        StmtId init = assign(s.var, s.e1);
        StmtId body = lower(s.children[0]);
        StmtId incr = assign(s.var, node(Op::kAdd, var(s.var), lit(1)));
        StmtId w = loop_while(node(Op::kLe, var(s.var), s.e2), seq({body, incr}));
        return seq({init, w});
      }
      case StmtKind::kOutput:
        return assign(syms_.out, node(Op::kCons, s.e1, var(syms_.out)));
      case StmtKind::kInput: {
        StmtId a = assign(s.var, node(Op::kHead, var(syms_.in)));
        StmtId b = assign(syms_.in, node(Op::kTail, var(syms_.in)));
        return seq({a, b});
      }
      case StmtKind::kEndorse: {
        Expr e;
        e.op = Op::kTagInsert;
        e.lhs = var(syms_.endorsed);
        e.value = s.token;
        return assign(syms_.endorsed, out_.add(e));
      }
    }
    return kNone;
  }
};

int precedence(Op op) {
  switch (op) {
    case Op::kOr: return 1;
    case Op::kXor: return 2;
    case Op::kAnd: return 3;
    case Op::kEq:
    case Op::kNe:
    case Op::kLt:
    case Op::kLe:
    case Op::kGt:
    case Op::kGe: return 4;
    case Op::kCons: return 5;
    case Op::kAdd:
    case Op::kSub: return 6;
    case Op::kMul: return 7;
    default: return 9;
  }
}

const char* op_text(Op op) {
  switch (op) {
    case Op::kOr: return " ∨ ";
    case Op::kXor: return " ⊕ ";
    case Op::kAnd: return " ∧ ";
    case Op::kEq: return "=";
    case Op::kNe: return "≠";
    case Op::kLt: return "<";
    case Op::kLe: return "≤";
    case Op::kGt: return ">";
    case Op::kGe: return "≥";
    case Op::kCons: return " :: ";
    case Op::kAdd: return "+";
    case Op::kSub: return "-";
    case Op::kMul: return "*";
    default: return "?";
  }
}

void print_expr(const Ast& ast, const SymbolTable& syms, ExprId id, int ctx, std::string& out) {
  const Expr& e = ast.exprs[id];
  switch (e.op) {
    case Op::kConst: out += std::to_string(e.value); return;
    case Op::kVar: out += syms.vars[e.var].name; return;
    case Op::kNil: out += "[]"; return;
    case Op::kNot:
    case Op::kNeg:
      out += e.op == Op::kNot ? "¬" : "-";
      print_expr(ast, syms, e.lhs, 9, out);
      return;
    case Op::kHead:
    case Op::kTail:
      out += e.op == Op::kHead ? "head(" : "tail(";
      print_expr(ast, syms, e.lhs, 0, out);
      out += ")";
      return;
    case Op::kTagInsert:
      print_expr(ast, syms, e.lhs, 9, out);
      out += " ∪ {" + syms.token_name(static_cast<std::uint32_t>(e.value)) + "}";
      return;
    default: break;
  }
  int p = precedence(e.op);
  bool paren = p < ctx || (p == 4 && ctx == 4);
  if (paren) out += "(";
  // cons is right-associative, the rest left-associative
  int lp = e.op == Op::kCons ? p + 1 : p;
  int rp = e.op == Op::kCons ? p : p + 1;
  print_expr(ast, syms, e.lhs, lp, out);
  out += op_text(e.op);
  print_expr(ast, syms, e.rhs, rp, out);
  if (paren) out += ")";
}

void print_stmt(const Ast& ast, const SymbolTable& syms, StmtId id, bool nested, std::string& out) {
  const Stmt& s = ast.stmts[id];
  switch (s.kind) {
    case StmtKind::kSkip: out += "skip"; return;
    case StmtKind::kLoop: out += "loop"; return;
    case StmtKind::kAssign:
      out += syms.vars[s.var].name + " := ";
      print_expr(ast, syms, s.e1, 0, out);
      return;
    case StmtKind::kSeq:
      if (nested) out += "(";
      for (std::size_t i = 0; i < s.children.size(); ++i) {
        if (i) out += "; ";
        print_stmt(ast, syms, s.children[i], true, out);
      }
      if (nested) out += ")";
      return;
    case StmtKind::kIf: {
      out += "if ";
      print_expr(ast, syms, s.e1, 0, out);
      out += " then ";
      print_stmt(ast, syms, s.children[0], true, out);
      if (ast.stmts[s.children[1]].kind != StmtKind::kSkip) {
        out += " else ";
        print_stmt(ast, syms, s.children[1], true, out);
      }
      return;
    }
    case StmtKind::kWhile:
      out += "while ";
      print_expr(ast, syms, s.e1, 0, out);
      out += " do ";
      print_stmt(ast, syms, s.children[0], true, out);
      return;
    case StmtKind::kFor:
      out += "for " + syms.vars[s.var].name + "=";
      print_expr(ast, syms, s.e1, 5, out);
      out += "..";
      print_expr(ast, syms, s.e2, 5, out);
      out += " do ";
      print_stmt(ast, syms, s.children[0], true, out);
      return;
    case StmtKind::kEndorse:
      out += "endorse(" + syms.tokens[s.token].agent + "," + syms.vars[s.var].name + ")";
      return;
    case StmtKind::kOutput:
      out += "output(";
      print_expr(ast, syms, s.e1, 0, out);
      out += ")";
      return;
    case StmtKind::kInput: out += "input(" + syms.vars[s.var].name + ")"; return;
  }
}

Int checked(bool overflow, const Int& v) {
  if (overflow) throw EvalError("integer overflow");
  return v;
}

Int scalar_of(const Ast& ast, ExprId e, const Store& s) {
  Value v = eval_expr(ast, e, s);
  return v.scalar;
}

// Structural resolution bound; exceeding it means the residual spins
// through guards forever without an atomic step.
constexpr std::size_t kResolveLimit = 1u << 16;

enum class Resolve { kAtomic, kEmpty, kSpin };

Resolve resolve(const Ast& ast, std::vector<StmtId>& cont, const Store& store) {
  for (std::size_t n = 0; n < kResolveLimit; ++n) {
    if (cont.empty()) return Resolve::kEmpty;
    const Stmt& s = ast.stmts[cont.back()];
    switch (s.kind) {
      case StmtKind::kSeq:
        cont.pop_back();
        for (auto it = s.children.rbegin(); it != s.children.rend(); ++it) cont.push_back(*it);
        break;
      case StmtKind::kIf: {
        bool c = scalar_of(ast, s.e1, store) != 0;
        cont.pop_back();
        cont.push_back(s.children[c ? 0 : 1]);
        break;
      }
      case StmtKind::kWhile:
        if (scalar_of(ast, s.e1, store) != 0) {
          cont.push_back(s.children[0]);
        } else {
          cont.pop_back();
        }
        break;
      case StmtKind::kSkip:
      case StmtKind::kAssign: return Resolve::kAtomic;
      default: throw Error("step: program contains unexpanded sugar");
    }
  }
  return Resolve::kSpin;
}

}  // namespace

Ast desugar(const Ast& ast, const SymbolTable& syms) { return Desugarer(ast, syms).run(); }

std::string to_source(const Ast& ast, const SymbolTable& syms) {
  std::string out;
  if (ast.root != kNone) print_stmt(ast, syms, ast.root, false, out);
  return out;
}

std::string to_source(const Ast& ast, const SymbolTable& syms, ExprId e) {
  std::string out;
  print_expr(ast, syms, e, 0, out);
  return out;
}

Value eval_expr(const Ast& ast, ExprId id, const Store& s) {
  const Expr& e = ast.exprs[id];
  Int r = 0;
  switch (e.op) {
    case Op::kConst: return Value::of(e.value);
    case Op::kVar: return s[e.var];
    case Op::kNil: return Value::list({});
    case Op::kNot: return Value::of(scalar_of(ast, e.lhs, s) == 0 ? 1 : 0);
    case Op::kNeg: {
      Int a = scalar_of(ast, e.lhs, s);
      return Value::of(checked(__builtin_sub_overflow(Int{0}, a, &r), r));
    }
    case Op::kHead: {
      Value l = eval_expr(ast, e.lhs, s);
      if (l.items.empty()) throw EvalError("head of empty list");
      return Value::of(l.items.front());
    }
    case Op::kTail: {
      Value l = eval_expr(ast, e.lhs, s);
      if (l.items.empty()) throw EvalError("tail of empty list");
      l.items.erase(l.items.begin());
      return l;
    }
    case Op::kCons: {
      Int a = scalar_of(ast, e.lhs, s);
      Value l = eval_expr(ast, e.rhs, s);
      l.items.insert(l.items.begin(), a);
      return l;
    }
    case Op::kTagInsert: {
      Value t = eval_expr(ast, e.lhs, s);
      auto it = std::lower_bound(t.items.begin(), t.items.end(), e.value);
      if (it == t.items.end() || *it != e.value) t.items.insert(it, e.value);
      return t;
    }
    case Op::kEq:
    case Op::kNe: {
      bool eq = eval_expr(ast, e.lhs, s) == eval_expr(ast, e.rhs, s);
      return Value::of((e.op == Op::kEq) == eq ? 1 : 0);
    }
    default: break;
  }
  Int a = scalar_of(ast, e.lhs, s);
  Int b = scalar_of(ast, e.rhs, s);
  switch (e.op) {
    case Op::kAdd: return Value::of(checked(__builtin_add_overflow(a, b, &r), r));
    case Op::kSub: return Value::of(checked(__builtin_sub_overflow(a, b, &r), r));
    case Op::kMul: return Value::of(checked(__builtin_mul_overflow(a, b, &r), r));
    case Op::kLt: return Value::of(a < b);
    case Op::kLe: return Value::of(a <= b);
    case Op::kGt: return Value::of(a > b);
    case Op::kGe: return Value::of(a >= b);
    case Op::kAnd: return Value::of(a != 0 && b != 0);
    case Op::kOr: return Value::of(a != 0 || b != 0);
    case Op::kXor: return Value::of(a ^ b);
    default: break;
  }
  throw Error("eval: malformed expression");
}

std::size_t ConfigHash::operator()(const Config& c) const noexcept {
  std::size_t h = StoreHash{}(c.store);
  hash_combine(h, c.halted ? 1 : 2);
  for (StmtId x : c.cont) hash_combine(h, x);
  return h;
}

Config initial_config(const Program& p, Store init) {
  Config c;
  c.cont = {p.core.root};
  c.store = std::move(init);
  return c;
}

StepResult step(const Program& p, const Config& c) {
  if (c.halted) throw Error("step: configuration has halted");
  StepResult r;
  r.next.cont = c.cont;
  r.next.store = c.store;
  Resolve res;
  try {
    res = resolve(p.core, r.next.cont, r.next.store);
    if (res == Resolve::kAtomic) {
      const Stmt& s = p.core.stmts[r.next.cont.back()];
      if (s.kind == StmtKind::kAssign) {
        Value v = eval_expr(p.core, s.e1, r.next.store);
        r.next.store[s.var] = std::move(v);
      }
      r.next.cont.pop_back();
    }
  } catch (const EvalError& e) {
    r.next.cont.clear();
    r.next.store = c.store;
    r.next.halted = true;
    r.stuck = true;
    r.error = e.what();
    return r;
  }
  if (res == Resolve::kSpin) {
    // no atomic action is ever reached: the program stutters in place
    r.next.cont = c.cont;
    return r;
  }
  if (res == Resolve::kEmpty) {
    r.next.cont.clear();
    r.next.halted = true;
    return r;
  }
  // A fully reduced residual becomes the stop program within the same step.
  std::vector<StmtId> probe = r.next.cont;
  try {
    if (resolve(p.core, probe, r.next.store) == Resolve::kEmpty) {
      r.next.cont.clear();
      r.next.halted = true;
    }
  } catch (const EvalError&) {
    // surfaces on the next step
  }
  return r;
}

}  // namespace kripkesec
