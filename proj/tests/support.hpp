#pragma once

#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kripkesec/corpus.hpp"
#include "kripkesec/frame.hpp"
#include "kripkesec/mlogic.hpp"
#include "kripkesec/oracle.hpp"
#include "kripkesec/secprops.hpp"

namespace kst {

using namespace kripkesec;

inline const std::string kRdDecl = "var u, s, h in {0,1}; var p in {0}\n";

inline std::string policy_json(const std::vector<std::string>& read, const std::vector<std::string>& write,
                               bool signals = true, const std::string& extra = "") {
  auto list = [](const std::vector<std::string>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? ", \"" : "\"") + xs[i] + "\"";
    return out + "]";
  };
  return "{\"agents\": [\"A\"], \"read\": {\"A\": " + list(read) + "}, \"write\": {\"A\": " + list(write) +
         "}, \"flags\": {\"signals_termination\": " + (signals ? "true" : "false") + "}" + extra + "}";
}

struct Built {
  Program program;
  SecurityContext ctx;
  SecurityFrame frame;
};

inline Built build(const std::string& src, const std::string& policy) {
  Program p = parse_program(src);
  SecurityContext ctx = bind_policy(parse_policy(policy), p);
  SecurityFrame f = build_frame(p, ctx);
  return {std::move(p), std::move(ctx), std::move(f)};
}

inline Status status_of(const SecurityFrame& f, PropertyId id, CheckOptions opt = {}) {
  return combined_status(check(f, id, {}, opt));
}

inline Verdict verdict_of(const SecurityFrame& f, PropertyId id, CheckOptions opt = {}) {
  return check(f, id, {}, opt).front();
}

inline std::filesystem::path corpus_dir() { return KRIPKESEC_CORPUS_DIR; }

inline std::vector<CorpusMember> named_corpus() {
  std::vector<CorpusMember> out;
  for (const auto& e : load_manifest(corpus_dir() / "manifest.json"))
    if (!e.seed) out.push_back(realize(e));
  return out;
}

// Position of world w inside its run.
inline std::uint32_t offset(const SecurityFrame& f, std::size_t w) {
  return static_cast<std::uint32_t>(w - f.runs[f.worlds[w].run].first);
}

// Direct recursive reading of the satisfaction clauses, one world at a time.
inline bool naive_holds(const SecurityFrame& f, std::size_t w, const Formula& phi, const WorldSet& ph) {
  const auto& n = *phi;
  auto run_of = [&](std::size_t x) { return f.worlds[x].run; };
  auto successors = [&](std::size_t x) {
    std::vector<std::size_t> out;
    if (n.rel.rel == Rel::kT) {
      const auto& r = f.runs[run_of(x)];
      for (std::size_t y = x; y < r.first + r.size; ++y) out.push_back(y);
    } else {
      const auto& rel = f.relation(n.rel.rel, f.agent_index(n.rel.agent));
      for (std::size_t y = 0; y < f.size(); ++y)
        if (rel.related(x, y)) out.push_back(y);
    }
    return out;
  };
  switch (n.kind) {
    case FKind::kTrue: return true;
    case FKind::kFalse: return false;
    case FKind::kSet: return offset(f, w) >= n.set.cuts[run_of(w)];
    case FKind::kPlaceholder: return ph.test(w);
    case FKind::kAtom: {
      // at least τ steps made; halted and LIMIT worlds stand for all later steps
      const auto& r = f.runs[run_of(w)];
      if (f.worlds[w].depth < n.tau && !f.worlds[w].limit && !f.halted[w]) return false;
      std::uint32_t at = std::min<std::uint32_t>(n.tau, r.size - 1);
      std::size_t v = 0;
      while (f.var_names[v] != n.var) ++v;
      const Value& x = f.stores[r.first + at][v];
      return x.is_scalar() && x.scalar == n.value;
    }
    case FKind::kHalted: return f.halted[w];
    case FKind::kNot: return !naive_holds(f, w, n.a, ph);
    case FKind::kAnd: return naive_holds(f, w, n.a, ph) && naive_holds(f, w, n.b, ph);
    case FKind::kOr: return naive_holds(f, w, n.a, ph) || naive_holds(f, w, n.b, ph);
    case FKind::kImplies: return !naive_holds(f, w, n.a, ph) || naive_holds(f, w, n.b, ph);
    case FKind::kBox:
      for (auto y : successors(w))
        if (!naive_holds(f, y, n.a, ph)) return false;
      return true;
    case FKind::kDia:
      for (auto y : successors(w))
        if (naive_holds(f, y, n.a, ph)) return true;
      return false;
  }
  return false;
}

inline TSProperty random_ts(const SecurityFrame& f, std::mt19937_64& rng) {
  TSProperty s;
  for (const auto& r : f.runs) s.cuts.push_back(static_cast<std::uint32_t>(rng() % (r.size + 1)));
  return s;
}

inline Formula random_formula(const SecurityFrame& f, std::mt19937_64& rng, int depth) {
  static const Rel rels[] = {Rel::kT, Rel::kKC, Rel::kKP, Rel::kWC, Rel::kWP};
  const std::string& agent = f.agents.front().name;
  if (depth == 0 || rng() % 4 == 0) {
    switch (rng() % 5) {
      case 0: return fm::placeholder();
      case 1: return fm::halted();
      case 2: return fm::set(random_ts(f, rng));
      default: return fm::atom(f.var_names[rng() % f.var_names.size()], rng() % 2, static_cast<Int>(rng() % 2));
    }
  }
  switch (rng() % 6) {
    case 0: return fm::neg(random_formula(f, rng, depth - 1));
    case 1: return fm::conj(random_formula(f, rng, depth - 1), random_formula(f, rng, depth - 1));
    case 2: return fm::disj(random_formula(f, rng, depth - 1), random_formula(f, rng, depth - 1));
    case 3: return fm::implies(random_formula(f, rng, depth - 1), random_formula(f, rng, depth - 1));
    case 4: return fm::box(rels[rng() % 5], agent, random_formula(f, rng, depth - 1));
    default: return fm::dia(rels[rng() % 5], agent, random_formula(f, rng, depth - 1));
  }
}

}  // namespace kst
