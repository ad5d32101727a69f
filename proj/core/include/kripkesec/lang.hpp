#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/errors.hpp"
#include "kripkesec/value.hpp"

namespace kripkesec {

using ExprId = std::uint32_t;
using StmtId = std::uint32_t;
using VarId = std::uint32_t;

inline constexpr std::uint32_t kNone = 0xffffffffu;

enum class Op : std::uint8_t {
  kConst,
  kVar,
  kNil,        // the empty list
  kNot,
  kNeg,
  kAdd,
  kSub,
  kMul,
  kEq,
  kNe,
  kLt,
  kLe,
  kGt,
  kGe,
  kAnd,
  kOr,
  kXor,
  kCons,       // lhs :: rhs
  kHead,
  kTail,
  kTagInsert,  // lhs ∪ {token}
};

struct Expr {
  Op op = Op::kConst;
  Int value = 0;        // literal, or endorsement token for kTagInsert
  VarId var = kNone;
  ExprId lhs = kNone;
  ExprId rhs = kNone;
};

enum class StmtKind : std::uint8_t {
  kSkip,
  kAssign,
  kSeq,
  kIf,
  kWhile,
  // sugar, removed by desugar()
  kFor,
  kLoop,
  kEndorse,
  kOutput,
  kInput,
};

// Field use by kind:
//   kAssign  var := e1
//   kSeq     children
//   kIf      if e1 then children[0] else children[1]
//   kWhile   while e1 do children[0]
//   kFor     for var = e1..e2 do children[0]
//   kEndorse endorse(agent, var), token names the (agent, var) pair
//   kOutput  output(e1)
//   kInput   input(var)
struct Stmt {
  StmtKind kind = StmtKind::kSkip;
  VarId var = kNone;
  ExprId e1 = kNone;
  ExprId e2 = kNone;
  std::uint32_t token = kNone;
  std::vector<StmtId> children;
};

struct Ast {
  std::vector<Expr> exprs;
  std::vector<Stmt> stmts;
  StmtId root = kNone;

  ExprId add(Expr e) {
    exprs.push_back(e);
    return static_cast<ExprId>(exprs.size() - 1);
  }
  StmtId add(Stmt s) {
    stmts.push_back(std::move(s));
    return static_cast<StmtId>(stmts.size() - 1);
  }
};

enum class VarType : std::uint8_t { kScalar, kList, kTagSet };

struct Variable {
  std::string name;
  VarType type = VarType::kScalar;
  std::vector<Value> domain;  // initial values, nonempty
  bool reserved = false;
};

struct EndorseToken {
  std::string agent;
  VarId var = kNone;
};

struct SymbolTable {
  std::vector<Variable> vars;
  std::vector<EndorseToken> tokens;
  VarId out = kNone;      // O
  VarId in = kNone;       // I
  VarId endorsed = kNone; // E

  std::optional<VarId> find(std::string_view name) const;
  VarId require(std::string_view name) const;  // throws Error
  std::uint32_t intern_token(const std::string& agent, VarId var);
  std::string token_name(std::uint32_t token) const;
};

struct Program {
  std::string text;
  SymbolTable syms;
  Ast ast;   // as parsed, may contain sugar
  Ast core;  // desugar(ast)

  std::size_t var_count() const { return syms.vars.size(); }
  const std::string& var_name(VarId v) const { return syms.vars[v].name; }
};

// Parses and desugars. Throws ParseError on syntax errors and on references
// to undeclared variables (when the program declares any variables).
Program parse_program(std::string_view text);

// Replaces output/input/endorse/loop/for by core constructs. Pure and
// idempotent. Reserved variables must already be present in syms; the
// parser declares them on first use.
Ast desugar(const Ast& ast, const SymbolTable& syms);

std::string to_source(const Ast& ast, const SymbolTable& syms);
std::string to_source(const Ast& ast, const SymbolTable& syms, ExprId e);

// Execution state. The residual program is a continuation stack of core
// statements (top at back); `halted` marks the stop program.
struct Config {
  std::vector<StmtId> cont;
  Store store;
  bool halted = false;

  friend bool operator==(const Config&, const Config&) = default;
};

struct ConfigHash {
  std::size_t operator()(const Config& c) const noexcept;
};

Config initial_config(const Program& p, Store init);

struct StepResult {
  Config next;
  bool stuck = false;  // evaluation failed; next is a halt with the old store
  std::string error;
};

// One small step on the core program. Sequencing and guard evaluation take
// no time; skip and assignment take one step. Throws Error when called on a
// halted configuration.
StepResult step(const Program& p, const Config& c);

class EvalError : public Error {
 public:
  using Error::Error;
};

// Evaluates a core expression; throws EvalError on empty-list access or
// integer overflow.
Value eval_expr(const Ast& ast, ExprId e, const Store& s);

// Parses a standalone expression against an existing symbol table (used
// for declassification predicates).
Ast parse_expression(std::string_view text, const SymbolTable& syms, ExprId* root);

Value parse_value(std::string_view text);

}  // namespace kripkesec
