#include "kripkesec/mlogic.hpp"

#include <algorithm>
#include <limits>

namespace kripkesec {

TSProperty TSProperty::none(const SecurityFrame& f) {
  TSProperty p;
  for (const auto& r : f.runs) p.cuts.push_back(r.size);
  return p;
}

TSProperty TSProperty::all(const SecurityFrame& f) {
  TSProperty p;
  p.cuts.assign(f.runs.size(), 0);
  return p;
}

TSProperty TSProperty::from_set(const SecurityFrame& f, const WorldSet& s) {
  if (!is_temporally_sound(f, s)) throw Error("world set is not temporally sound");
  TSProperty p;
  for (const auto& r : f.runs) {
    std::uint32_t c = r.size;
    while (c > 0 && s.test(r.first + c - 1)) --c;
    p.cuts.push_back(c);
  }
  return p;
}

void TSProperty::to_set(const SecurityFrame& f, WorldSet& out) const {
  out.clear();
  for (std::size_t r = 0; r < f.runs.size(); ++r)
    for (std::uint32_t i = cuts[r]; i < f.runs[r].size; ++i) out.set(f.runs[r].first + i);
}

WorldSet TSProperty::to_set(const SecurityFrame& f) const {
  WorldSet s(f.size());
  to_set(f, s);
  return s;
}

bool TSProperty::is_none(const SecurityFrame& f, std::size_t run) const {
  return cuts[run] >= f.runs[run].size;
}

std::string TSProperty::to_string(const SecurityFrame& f) const {
  std::string s = "(";
  for (std::size_t r = 0; r < cuts.size(); ++r) {
    if (r) s += ",";
    s += is_none(f, r) ? "-" : std::to_string(cuts[r]);
  }
  return s + ")";
}

bool is_temporally_sound(const SecurityFrame& f, const WorldSet& s) {
  for (const auto& r : f.runs)
    for (std::uint32_t i = 0; i + 1 < r.size; ++i)
      if (s.test(r.first + i) && !s.test(r.first + i + 1)) return false;
  return true;
}

namespace fm {

namespace {
Formula make(FormulaNode n) { return std::make_shared<const FormulaNode>(std::move(n)); }
FormulaNode kind(FKind k) {
  FormulaNode n;
  n.kind = k;
  return n;
}
}  // namespace

Formula top() { return make(kind(FKind::kTrue)); }
Formula bottom() { return make(kind(FKind::kFalse)); }
Formula placeholder() { return make(kind(FKind::kPlaceholder)); }
Formula set(TSProperty s) {
  FormulaNode n = kind(FKind::kSet);
  n.set = std::move(s);
  return make(std::move(n));
}
Formula atom(std::string var, std::uint32_t tau, Int value) {
  FormulaNode n = kind(FKind::kAtom);
  n.var = std::move(var);
  n.tau = tau;
  n.value = value;
  return make(std::move(n));
}
Formula halted() { return make(kind(FKind::kHalted)); }
Formula neg(Formula a) {
  FormulaNode n = kind(FKind::kNot);
  n.a = std::move(a);
  return make(std::move(n));
}
namespace {
Formula binary(FKind k, Formula a, Formula b) {
  FormulaNode n = kind(k);
  n.a = std::move(a);
  n.b = std::move(b);
  return make(std::move(n));
}
Formula modal(FKind k, Rel r, const std::string& agent, Formula a) {
  FormulaNode n = kind(k);
  n.rel = {r, r == Rel::kT ? std::string() : agent};
  n.a = std::move(a);
  return make(std::move(n));
}
}  // namespace
Formula conj(Formula a, Formula b) { return binary(FKind::kAnd, std::move(a), std::move(b)); }
Formula disj(Formula a, Formula b) { return binary(FKind::kOr, std::move(a), std::move(b)); }
Formula implies(Formula a, Formula b) { return binary(FKind::kImplies, std::move(a), std::move(b)); }
Formula box(Rel r, const std::string& agent, Formula a) { return modal(FKind::kBox, r, agent, std::move(a)); }
Formula dia(Rel r, const std::string& agent, Formula a) { return modal(FKind::kDia, r, agent, std::move(a)); }
Formula always(Formula a) { return box(Rel::kT, "", std::move(a)); }
Formula eventually(Formula a) { return dia(Rel::kT, "", std::move(a)); }

}  // namespace fm

namespace {

std::string rel_text(const RelRef& r) {
  switch (r.rel) {
    case Rel::kT: return "T";
    case Rel::kKC: return "K^C_" + r.agent;
    case Rel::kKP: return "K^P_" + r.agent;
    case Rel::kWC: return "W^C_" + r.agent;
    case Rel::kWP: return "W^P_" + r.agent;
    case Rel::kCount: return "K_" + r.agent + "#";
  }
  return "?";
}

int prec(FKind k) {
  switch (k) {
    case FKind::kImplies: return 1;
    case FKind::kOr: return 2;
    case FKind::kAnd: return 3;
    default: return 4;
  }
}

void print(const Formula& f, int ctx, std::string& out) {
  switch (f->kind) {
    case FKind::kTrue: out += "⊤"; return;
    case FKind::kFalse: out += "⊥"; return;
    case FKind::kPlaceholder: out += "φ"; return;
    case FKind::kSet:
      out += "set(";
      for (std::size_t i = 0; i < f->set.cuts.size(); ++i) {
        if (i) out += ",";
        out += f->set.cuts[i] == kNone ? "-" : std::to_string(f->set.cuts[i]);
      }
      out += ")";
      return;
    case FKind::kAtom:
      out += f->var + "@" + std::to_string(f->tau) + "=" + std::to_string(f->value);
      return;
    case FKind::kHalted: out += "⇓"; return;
    case FKind::kNot:
      out += "¬";
      print(f->a, 4, out);
      return;
    case FKind::kBox:
    case FKind::kDia:
      if (f->rel.rel == Rel::kT) {
        out += f->kind == FKind::kBox ? "□" : "◇";
      } else {
        out += f->kind == FKind::kBox ? "[" : "⟨";
        out += rel_text(f->rel);
        out += f->kind == FKind::kBox ? "]" : "⟩";
      }
      print(f->a, 4, out);
      return;
    default: break;
  }
  int p = prec(f->kind);
  bool paren = p < ctx || (p == ctx && f->kind == FKind::kImplies);
  if (paren) out += "(";
  const char* op = f->kind == FKind::kAnd ? " ∧ " : f->kind == FKind::kOr ? " ∨ " : " ⇒ ";
  print(f->a, f->kind == FKind::kImplies ? p + 1 : p, out);
  out += op;
  print(f->b, p, out);
  if (paren) out += ")";
}

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, 0, out);
  return out;
}

WorldSet atom_set(const SecurityFrame& f, const std::string& var, std::uint32_t tau, Int value) {
  auto it = std::find(f.var_names.begin(), f.var_names.end(), var);
  if (it == f.var_names.end()) throw Error("unknown variable '" + var + "' in atom");
  std::size_t v = static_cast<std::size_t>(it - f.var_names.begin());
  WorldSet s(f.size());
  for (std::size_t r = 0; r < f.runs.size(); ++r) {
    const RunInfo& run = f.runs[r];
    if (tau >= run.size) {
      if (run.diverges())
        throw UnsupportedError("atom " + var + "@" + std::to_string(tau) + " lies beyond the stabilization of run " +
                               std::to_string(r));
      continue;
    }
    const Value& x = f.stores[run.first + tau][v];
    if (!(x.is_scalar() && x.scalar == value)) continue;
    for (std::uint32_t i = tau; i < run.size; ++i) s.set(run.first + i);
  }
  return s;
}

WorldSet halted_set(const SecurityFrame& f) {
  WorldSet s(f.size());
  for (std::size_t w = 0; w < f.size(); ++w)
    if (f.halted[w]) s.set(w);
  return s;
}

CompiledFormula::CompiledFormula(const SecurityFrame& f, const Formula& formula) : frame_(f) {
  std::vector<Instr> stat, dyn;
  bool dynamic = false;
  result_ = compile(formula, dynamic, stat, dyn);
  for (const auto& in : stat) exec(in);
  code_ = std::move(stat);
  dynamic_from_ = code_.size();
  code_.insert(code_.end(), dyn.begin(), dyn.end());
}

std::uint32_t CompiledFormula::fresh() {
  regs_.emplace_back(frame_.size());
  return static_cast<std::uint32_t>(regs_.size() - 1);
}

std::uint32_t CompiledFormula::compile(const Formula& f, bool& dynamic, std::vector<Instr>& stat,
                                       std::vector<Instr>& dyn) {
  dynamic = false;
  switch (f->kind) {
    case FKind::kTrue: {
      auto r = fresh();
      regs_[r].fill();
      return r;
    }
    case FKind::kFalse: return fresh();
    case FKind::kSet: {
      if (f->set.cuts.size() != frame_.runs.size()) throw Error("set(...) needs one cut per run");
      // kNone stands for an untouched run
      TSProperty s = f->set;
      for (std::size_t i = 0; i < frame_.runs.size(); ++i) {
        if (s.cuts[i] == kNone) s.cuts[i] = frame_.runs[i].size;
        if (s.cuts[i] > frame_.runs[i].size) throw Error("set(...) cut out of range");
      }
      auto r = fresh();
      s.to_set(frame_, regs_[r]);
      return r;
    }
    case FKind::kPlaceholder:
      dynamic = true;
      if (placeholder_reg_ == kNone) placeholder_reg_ = fresh();
      has_placeholder_ = true;
      return placeholder_reg_;
    case FKind::kAtom: {
      WorldSet s = atom_set(frame_, f->var, f->tau, f->value);
      auto r = fresh();
      regs_[r] = std::move(s);
      return r;
    }
    case FKind::kHalted: {
      auto r = fresh();
      regs_[r] = halted_set(frame_);
      return r;
    }
    default: break;
  }
  bool da = false, db = false;
  std::uint32_t a = compile(f->a, da, stat, dyn);
  std::uint32_t b = f->b ? compile(f->b, db, stat, dyn) : kNone;
  dynamic = da || db;
  Instr in{Code::kNot, fresh(), a, b, nullptr};
  switch (f->kind) {
    case FKind::kNot: in.code = Code::kNot; break;
    case FKind::kAnd: in.code = Code::kAnd; break;
    case FKind::kOr: in.code = Code::kOr; break;
    case FKind::kImplies: in.code = Code::kImplies; break;
    case FKind::kBox:
    case FKind::kDia: {
      bool box = f->kind == FKind::kBox;
      if (f->rel.rel == Rel::kT) {
        in.code = box ? Code::kBoxT : Code::kDiaT;
      } else {
        in.code = box ? Code::kBoxR : Code::kDiaR;
        in.part = &frame_.relation(f->rel.rel, frame_.agent_index(f->rel.agent));
      }
      break;
    }
    default: throw Error("malformed formula");
  }
  (dynamic ? dyn : stat).push_back(in);
  return in.dst;
}

void CompiledFormula::exec(const Instr& in) {
  WorldSet& d = regs_[in.dst];
  const WorldSet& x = regs_[in.a];
  switch (in.code) {
    case Code::kNot: WorldSet::not_of(d, x); return;
    case Code::kAnd: WorldSet::and_of(d, x, regs_[in.b]); return;
    case Code::kOr: WorldSet::or_of(d, x, regs_[in.b]); return;
    case Code::kImplies: WorldSet::implies_of(d, x, regs_[in.b]); return;
    case Code::kBoxT:
    case Code::kDiaT: {
      bool box = in.code == Code::kBoxT;
      for (const auto& r : frame_.runs) {
        bool acc = box;
        for (std::uint32_t i = r.size; i-- > 0;) {
          std::size_t w = r.first + i;
          acc = box ? (acc && x.test(w)) : (acc || x.test(w));
          d.assign(w, acc);
        }
      }
      return;
    }
    case Code::kBoxR:
    case Code::kDiaR: {
      bool box = in.code == Code::kBoxR;
      for (const auto& cls : in.part->members) {
        bool v = box;
        for (auto w : cls) {
          if (x.test(w) != box) {
            v = !box;
            break;
          }
        }
        for (auto w : cls) d.assign(w, v);
      }
      return;
    }
  }
}

const WorldSet& CompiledFormula::evaluate(const WorldSet& phi) {
  if (placeholder_reg_ != kNone) regs_[placeholder_reg_] = phi;
  for (std::size_t i = dynamic_from_; i < code_.size(); ++i) exec(code_[i]);
  return regs_[result_];
}

const WorldSet& CompiledFormula::evaluate() {
  if (has_placeholder_) throw Error("formula mentions the placeholder but none was supplied");
  return regs_[result_];
}

WorldSet extension(const SecurityFrame& f, const Formula& formula) {
  CompiledFormula c(f, formula);
  return c.evaluate();
}

WorldSet extension(const SecurityFrame& f, const Formula& formula, const WorldSet& phi) {
  CompiledFormula c(f, formula);
  return c.evaluate(phi);
}

bool eval(const SecurityFrame& f, std::size_t world, const Formula& formula) {
  return extension(f, formula).test(world);
}

bool eval(const SecurityFrame& f, std::size_t world, const Formula& formula, const WorldSet& phi) {
  return extension(f, formula, phi).test(world);
}

TSProperty atom_extension(const SecurityFrame& f, const Formula& formula) {
  WorldSet s = extension(f, formula);
  if (!is_temporally_sound(f, s)) throw Error("'" + to_string(formula) + "' is not temporally sound");
  return TSProperty::from_set(f, s);
}

WorldSet diamond_closure(const SecurityFrame& f, const WorldSet& s) {
  WorldSet d(f.size());
  for (std::size_t r = 0; r < f.runs.size(); ++r) {
    const RunInfo& run = f.runs[r];
    bool hit = false;
    for (std::uint32_t i = 0; i < run.size && !hit; ++i) hit = s.test(run.first + i);
    if (hit)
      for (std::uint32_t i = 0; i < run.size; ++i) d.set(run.first + i);
  }
  return d;
}

namespace {

bool closed_under(const Partition& p, const WorldSet& d) {
  for (const auto& cls : p.members) {
    bool in = d.test(cls.front());
    for (auto w : cls)
      if (d.test(w) != in) return false;
  }
  return true;
}

}  // namespace

bool is_write_stable(const SecurityFrame& f, std::size_t agent, const WorldSet& s) {
  return closed_under(f.agents[agent].wc, diamond_closure(f, s));
}

bool is_read_stable(const SecurityFrame& f, std::size_t agent, const WorldSet& s) {
  return closed_under(f.agents[agent].kc, diamond_closure(f, s));
}

SearchMode SearchMode::parse(std::string_view s) {
  if (s == "exhaustive") return exhaustive();
  if (s.substr(0, 7) == "runset:" && s.size() > 7) {
    unsigned k = 0;
    for (char c : s.substr(7)) {
      if (c < '0' || c > '9') throw Error("bad search mode '" + std::string(s) + "'");
      k = k * 10 + static_cast<unsigned>(c - '0');
    }
    return runset(k);
  }
  throw Error("bad search mode '" + std::string(s) + "' (expected exhaustive or runset:K)");
}

std::string SearchMode::to_string() const {
  return kind == kExhaustive ? "exhaustive" : "runset:" + std::to_string(k);
}

std::uint64_t exhaustive_count(const SecurityFrame& f) {
  std::uint64_t n = 1;
  for (const auto& r : f.runs) {
    std::uint64_t m = r.size + 1;
    if (n > std::numeric_limits<std::uint64_t>::max() / m) return std::numeric_limits<std::uint64_t>::max();
    n *= m;
  }
  return n;
}

std::uint64_t runset_count(const SecurityFrame& f, unsigned k) {
  // dp[j]: vectors over the runs so far with j partial cuts
  std::vector<double> dp(k + 1, 0.0);
  dp[0] = 1;
  for (const auto& r : f.runs) {
    std::vector<double> nx(k + 1, 0.0);
    double partial = r.size > 1 ? r.size - 1 : 0;
    for (unsigned j = 0; j <= k; ++j) {
      nx[j] += dp[j] * 2;
      if (j + 1 <= k) nx[j + 1] += dp[j] * partial;
    }
    dp = nx;
  }
  double total = 0;
  for (double x : dp) total += x;
  return total > 1.8e19 ? std::numeric_limits<std::uint64_t>::max() : static_cast<std::uint64_t>(total);
}

RunClasses run_classes(const SecurityFrame& f, const Partition& rel) {
  // union-find over runs linked by the relation
  std::vector<std::uint32_t> parent(f.runs.size());
  for (std::uint32_t i = 0; i < parent.size(); ++i) parent[i] = i;
  auto find = [&](std::uint32_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const auto& cls : rel.members)
    for (auto w : cls) {
      auto a = find(f.worlds[cls.front()].run), b = find(f.worlds[w].run);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  RunClasses rc;
  rc.cls.resize(f.runs.size());
  std::vector<std::uint32_t> ids(f.runs.size(), kNone);
  for (std::uint32_t r = 0; r < f.runs.size(); ++r) {
    auto root = find(r);
    if (ids[root] == kNone) ids[root] = rc.count++;
    rc.cls[r] = ids[root];
  }
  return rc;
}

namespace {

class Enumerator {
 public:
  Enumerator(const SecurityFrame& f, SearchMode mode, const TSVisitor& visit, const RunClasses* closed)
      : f_(f), mode_(mode), visit_(visit), closed_(closed), set_(f.size()) {
    prop_.cuts.assign(f.runs.size(), 0);
    if (closed_) state_.assign(closed_->count, 0);
  }

  void run() { go(0, 0); }

 private:
  const SecurityFrame& f_;
  SearchMode mode_;
  const TSVisitor& visit_;
  const RunClasses* closed_;
  WorldSet set_;
  TSProperty prop_;
  std::vector<std::uint8_t> state_;  // 0 free, 1 touched, 2 untouched
  bool stop_ = false;

  bool go(std::size_t r, unsigned partial) {
    if (r == f_.runs.size()) {
      if (!visit_(prop_, set_)) stop_ = true;
      return !stop_;
    }
    const RunInfo& run = f_.runs[r];
    std::uint8_t* st = closed_ ? &state_[closed_->cls[r]] : nullptr;
    std::uint8_t saved = st ? *st : 0;
    for (std::uint32_t i = 0; i < run.size; ++i) set_.set(run.first + i);
    for (std::uint32_t c = 0; c <= run.size; ++c) {
      if (c > 0) set_.reset(run.first + c - 1);
      bool none = c == run.size;
      bool is_partial = c > 0 && !none;
      if (is_partial && mode_.kind == SearchMode::kRunset && partial + 1 > mode_.k) {
        // skip straight to NONE
        for (std::uint32_t i = c; i < run.size; ++i) set_.reset(run.first + i);
        c = run.size;
        none = true;
        is_partial = false;
      }
      if (st) {
        std::uint8_t want = none ? 2 : 1;
        if (saved != 0 && saved != want) continue;
        *st = want;
      }
      prop_.cuts[r] = c;
      if (!go(r + 1, partial + (is_partial ? 1 : 0))) return false;
    }
    if (st) *st = saved;
    prop_.cuts[r] = 0;
    return true;
  }
};

}  // namespace

void enumerate_ts(const SecurityFrame& f, SearchMode mode, const TSVisitor& visit, const RunClasses* closed,
                  std::uint64_t bound) {
  if (mode.kind == SearchMode::kExhaustive && exhaustive_count(f) > bound)
    throw BoundError("exhaustive search needs " +
                     (exhaustive_count(f) == std::numeric_limits<std::uint64_t>::max()
                          ? std::string("more than 2^64")
                          : std::to_string(exhaustive_count(f))) +
                     " cut vectors, above the bound of " + std::to_string(bound));
  Enumerator(f, mode, visit, closed).run();
}

}  // namespace kripkesec
