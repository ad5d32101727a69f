#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/frame.hpp"
#include "kripkesec/world_set.hpp"

namespace kripkesec {

// A temporally sound world set: run r contributes its worlds with index
// >= cuts[r]; cuts[r] == size of run r means none of them.
struct TSProperty {
  std::vector<std::uint32_t> cuts;

  static TSProperty none(const SecurityFrame& f);
  static TSProperty all(const SecurityFrame& f);
  // Throws Error when the set is not closed under T-successors.
  static TSProperty from_set(const SecurityFrame& f, const WorldSet& s);

  WorldSet to_set(const SecurityFrame& f) const;
  void to_set(const SecurityFrame& f, WorldSet& out) const;
  bool is_none(const SecurityFrame& f, std::size_t run) const;
  std::string to_string(const SecurityFrame& f) const;  // e.g. "(0,-,2)"

  friend auto operator<=>(const TSProperty&, const TSProperty&) = default;
  friend bool operator==(const TSProperty&, const TSProperty&) = default;
};

bool is_temporally_sound(const SecurityFrame& f, const WorldSet& s);

struct RelRef {
  Rel rel = Rel::kT;
  std::string agent;
};

enum class FKind : std::uint8_t {
  kTrue,
  kFalse,
  kSet,
  kPlaceholder,  // the quantified φ of a property template
  kAtom,         // v@τ=i
  kHalted,       // ⇓
  kNot,
  kAnd,
  kOr,
  kImplies,
  kBox,
  kDia,
};

struct FormulaNode;
using Formula = std::shared_ptr<const FormulaNode>;

struct FormulaNode {
  FKind kind = FKind::kTrue;
  RelRef rel;
  TSProperty set;
  std::string var;
  std::uint32_t tau = 0;
  Int value = 0;
  Formula a, b;
};

namespace fm {
Formula top();
Formula bottom();
Formula placeholder();
Formula set(TSProperty s);
Formula atom(std::string var, std::uint32_t tau, Int value);
Formula halted();
Formula neg(Formula a);
Formula conj(Formula a, Formula b);
Formula disj(Formula a, Formula b);
Formula implies(Formula a, Formula b);
Formula box(Rel r, const std::string& agent, Formula a);
Formula dia(Rel r, const std::string& agent, Formula a);
Formula always(Formula a);
Formula eventually(Formula a);
}  // namespace fm

std::string to_string(const Formula& f);

// Query syntax: atoms `v@t=i`, `halted`, `true`, `false`, `S` (placeholder),
// `set(c0,c1,...)` with `-` for an empty run; `not`, `and`, `or`, `->`;
// `box(R) f`, `dia(R) f`, `always f`, `eventually f` with R one of T,
// KC[A], KP[A], WC[A], WP[A], K#[A].
Formula parse_formula(std::string_view text);

// Compiles a formula against a frame. Subformulae that do not mention the
// placeholder are evaluated once, at construction.
class CompiledFormula {
 public:
  CompiledFormula(const SecurityFrame& f, const Formula& formula);

  // Extension of the formula with the placeholder bound to `phi`.
  const WorldSet& evaluate(const WorldSet& phi);
  const WorldSet& evaluate();  // placeholder-free formulas only

  bool uses_placeholder() const { return has_placeholder_; }

 private:
  enum class Code : std::uint8_t { kNot, kAnd, kOr, kImplies, kBoxT, kDiaT, kBoxR, kDiaR };
  struct Instr {
    Code code;
    std::uint32_t dst, a, b;
    const Partition* part;
  };

  const SecurityFrame& frame_;
  std::vector<WorldSet> regs_;
  std::vector<Instr> code_;
  std::size_t dynamic_from_ = 0;
  std::uint32_t result_ = 0;
  std::uint32_t placeholder_reg_ = kNone;
  bool has_placeholder_ = false;

  std::uint32_t compile(const Formula& f, bool& dynamic, std::vector<Instr>& stat, std::vector<Instr>& dyn);
  std::uint32_t fresh();
  void exec(const Instr& in);
};

WorldSet extension(const SecurityFrame& f, const Formula& formula);
WorldSet extension(const SecurityFrame& f, const Formula& formula, const WorldSet& phi);
bool eval(const SecurityFrame& f, std::size_t world, const Formula& formula);
bool eval(const SecurityFrame& f, std::size_t world, const Formula& formula, const WorldSet& phi);

// Extension of v@τ=i; throws UnsupportedError when τ lies beyond the
// stabilization point of a diverging run.
WorldSet atom_set(const SecurityFrame& f, const std::string& var, std::uint32_t tau, Int value);
WorldSet halted_set(const SecurityFrame& f);

// Cut vector of a placeholder-free formula; throws Error when its
// extension is not temporally sound.
TSProperty atom_extension(const SecurityFrame& f, const Formula& formula);

// ◇-closure of S: the union of runs that S touches.
WorldSet diamond_closure(const SecurityFrame& f, const WorldSet& s);
bool is_write_stable(const SecurityFrame& f, std::size_t agent, const WorldSet& s);
bool is_read_stable(const SecurityFrame& f, std::size_t agent, const WorldSet& s);

struct SearchMode {
  enum Kind { kExhaustive, kRunset } kind = kRunset;
  unsigned k = 2;

  static SearchMode exhaustive() { return {kExhaustive, 0}; }
  static SearchMode runset(unsigned k) { return {kRunset, k}; }
  static SearchMode parse(std::string_view s);  // "exhaustive" | "runset:K"
  std::string to_string() const;
};

inline constexpr std::uint64_t kDefaultExhaustiveBound = 10'000'000;

// Number of cut vectors EXHAUSTIVE would visit, saturating at UINT64_MAX.
std::uint64_t exhaustive_count(const SecurityFrame& f);
std::uint64_t runset_count(const SecurityFrame& f, unsigned k);

// Restricts which runs may be touched by S: runs in one class must all be
// touched or all be untouched (used for write/read stability).
struct RunClasses {
  std::vector<std::uint32_t> cls;  // per run
  std::uint32_t count = 0;
};

RunClasses run_classes(const SecurityFrame& f, const Partition& rel);

// Visits cut vectors in lexicographic order (run 0 most significant, each
// cut ordered 0 < 1 < ... < NONE). The callback returns false to stop.
// Throws BoundError if EXHAUSTIVE exceeds `bound`.
using TSVisitor = std::function<bool(const TSProperty&, const WorldSet&)>;
void enumerate_ts(const SecurityFrame& f, SearchMode mode, const TSVisitor& visit,
                  const RunClasses* closed = nullptr, std::uint64_t bound = kDefaultExhaustiveBound);

}  // namespace kripkesec
