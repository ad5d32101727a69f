#include "kripkesec/secprops.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "kripkesec/errors.hpp"

namespace kripkesec {

namespace {

constexpr std::array<std::string_view, kPropertyCount> kNames = {
    "CONF",  "TI_CONF",  "TI_CONF_INTERMEDIATE", "PI_CONF",  "INTEG",    "TI_INTEG",
    "CAUSE_INTEG", "TI_CAUSE_INTEG", "RD", "RD_SIMPLIFIED", "TI_RD",    "RD_VAR_A",
    "RD_VAR_B", "RD_ALT", "TE", "TI_TE", "TE_ALT",
};

}  // namespace

const std::array<PropertyId, kPropertyCount>& all_properties() {
  static const std::array<PropertyId, kPropertyCount> ids = [] {
    std::array<PropertyId, kPropertyCount> a{};
    for (std::size_t i = 0; i < kPropertyCount; ++i) a[i] = static_cast<PropertyId>(i);
    return a;
  }();
  return ids;
}

std::string_view to_string(PropertyId id) { return kNames[static_cast<std::size_t>(id)]; }

std::optional<PropertyId> parse_property_id(std::string_view s) {
  std::string up;
  for (char c : s) up += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kPropertyCount; ++i)
    if (kNames[i] == up) return static_cast<PropertyId>(i);
  return std::nullopt;
}

Admissibility admissibility(PropertyId id) {
  switch (id) {
    case PropertyId::kRd:
    case PropertyId::kRdSimplified:
    case PropertyId::kTiRd:
    case PropertyId::kRdVarA:
    case PropertyId::kRdVarB:
    case PropertyId::kRdAlt:
      return Admissibility::kWriteStable;
    case PropertyId::kTe:
    case PropertyId::kTiTe:
    case PropertyId::kTeAlt:
      return Admissibility::kReadStable;
    default:
      return Admissibility::kAny;
  }
}

Formula property_template(PropertyId id, const std::string& a) {
  using namespace fm;
  auto S = placeholder();
  auto h = halted();
  auto KC = [&](Formula x) { return box(Rel::kKC, a, std::move(x)); };
  auto KP = [&](Formula x) { return box(Rel::kKP, a, std::move(x)); };
  auto Kn = [&](Formula x) { return box(Rel::kCount, a, std::move(x)); };
  auto WC = [&](Formula x) { return box(Rel::kWC, a, std::move(x)); };
  auto WP = [&](Formula x) { return box(Rel::kWP, a, std::move(x)); };
  auto dWC = [&](Formula x) { return dia(Rel::kWC, a, std::move(x)); };
  auto dWP = [&](Formula x) { return dia(Rel::kWP, a, std::move(x)); };
  auto dKC = [&](Formula x) { return dia(Rel::kKC, a, std::move(x)); };
  auto ev = [](Formula x) { return eventually(std::move(x)); };
  auto diverges = always(neg(h));      // □¬⇓
  auto halts = ev(h);                  // ◇⇓
  auto ti_S = disj(diverges, ev(S));   // □¬⇓ ∨ ◇φ
  auto ev_KC_S = ev(KC(S));
  auto ev_WP_S = ev(WP(S));

  switch (id) {
    case PropertyId::kConf:
      return implies(ev_KC_S, KP(ev(S)));
    case PropertyId::kTiConf:
      return implies(conj(halts, ev_KC_S), KP(ti_S));
    case PropertyId::kTiConfIntermediate:
      return implies(conj(halts, ev_KC_S), KP(ev(S)));
    case PropertyId::kPiConf:
      return implies(ev(conj(KC(S), neg(Kn(S)))), KP(ev(S)));
    case PropertyId::kInteg:
      return implies(dWC(ev(S)), ev(dWP(S)));
    case PropertyId::kTiInteg:
      return implies(dWC(conj(halts, ev(S))), disj(diverges, ev(dWP(S))));
    case PropertyId::kCauseInteg:
      return implies(ev_WP_S, WC(ev(S)));
    case PropertyId::kTiCauseInteg:
      return implies(conj(halts, ev_WP_S), WC(ti_S));
    case PropertyId::kRd: {
      auto leak = conj(ev_KC_S, neg(KP(ev(S))));
      return implies(dWC(leak), leak);
    }
    case PropertyId::kRdSimplified:
      return implies(dWC(ev_KC_S), ev_KC_S);
    case PropertyId::kTiRd: {
      auto leak = conj(ev_KC_S, neg(KP(ti_S)));
      auto frame = KC(implies(always(neg(S)), halts));
      // The conclusion drops ¬[K^P](□¬⇓ ∨ ◇φ): with it, programs whose only
      // excuse is a diverging run (Fig. 1 (v)) are rejected although no
      // quadruple of terminating runs separates them.
      return implies(dWC(conj(halts, conj(leak, frame))), disj(diverges, ev_KC_S));
    }
    case PropertyId::kRdVarA:
      return implies(dWC(conj(halts, ev_KC_S)), disj(diverges, ev_KC_S));
    case PropertyId::kRdVarB: {
      auto leak = conj(ev_KC_S, neg(KP(ti_S)));
      return implies(dWC(conj(halts, leak)), disj(diverges, ev_KC_S));
    }
    case PropertyId::kRdAlt: {
      auto leak = conj(halts, conj(ev_KC_S, neg(KP(ti_S))));
      return implies(dWC(leak), leak);
    }
    case PropertyId::kTe: {
      auto flow = conj(ev_WP_S, neg(WC(ev(S))));
      return implies(dKC(flow), flow);
    }
    case PropertyId::kTiTe: {
      auto flow = conj(ev_WP_S, neg(WC(ti_S)));
      auto frame = WP(implies(always(neg(S)), halts));
      // Dual of the TI_RD conclusion: a diverging W^C partner must not
      // excuse the flow at w.
      return implies(dKC(conj(halts, conj(flow, frame))), disj(diverges, ev_WP_S));
    }
    case PropertyId::kTeAlt: {
      auto flow = conj(dWC(ev(S)), neg(ev(dWP(S))));
      return implies(flow, KC(flow));
    }
  }
  throw Error("unknown property");
}

namespace {

const Partition* stability_relation(const SecurityFrame& f, PropertyId id, std::size_t agent) {
  switch (admissibility(id)) {
    case Admissibility::kWriteStable: return &f.agents[agent].wc;
    case Admissibility::kReadStable: return &f.agents[agent].kc;
    case Admissibility::kAny: return nullptr;
  }
  return nullptr;
}

}  // namespace

bool admissible(const SecurityFrame& f, PropertyId id, std::size_t agent, const WorldSet& s) {
  if (!is_temporally_sound(f, s)) return false;
  switch (admissibility(id)) {
    case Admissibility::kWriteStable: return is_write_stable(f, agent, s);
    case Admissibility::kReadStable: return is_read_stable(f, agent, s);
    case Admissibility::kAny: return true;
  }
  return true;
}

const char* to_string(Status s) {
  switch (s) {
    case Status::kSatisfied: return "SATISFIED";
    case Status::kViolated: return "VIOLATED";
    case Status::kUnsupported: return "UNSUPPORTED";
  }
  return "?";
}

Status combined_status(const std::vector<Verdict>& vs) {
  Status s = Status::kSatisfied;
  for (const auto& v : vs) {
    if (v.status == Status::kUnsupported) return Status::kUnsupported;
    if (v.status == Status::kViolated) s = Status::kViolated;
  }
  return s;
}

namespace {

struct Candidate {
  std::string text;
  WorldSet set;
};

// Time-0 atoms and their pairwise conjunctions/disjunctions, in rendering
// preference order.
std::vector<Candidate> dictionary(const SecurityFrame& f) {
  struct Atom {
    std::string var;
    Int value;
    WorldSet set;
  };
  std::vector<std::size_t> order(f.var_names.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto a, auto b) { return f.var_names[a] < f.var_names[b]; });

  std::vector<Atom> atoms;
  for (auto v : order) {
    std::set<Int> values;
    for (const auto& r : f.runs) {
      const Value& x = f.stores[r.first][v];
      if (x.is_scalar()) values.insert(x.scalar);
    }
    for (Int i : values) {
      Atom a{f.var_names[v], i, WorldSet(f.size())};
      for (const auto& r : f.runs) {
        const Value& x = f.stores[r.first][v];
        if (x.is_scalar() && x.scalar == i)
          for (std::uint32_t k = 0; k < r.size; ++k) a.set.set(r.first + k);
      }
      atoms.push_back(std::move(a));
    }
  }
  constexpr std::size_t kMaxAtoms = 48;
  if (atoms.size() > kMaxAtoms) atoms.resize(kMaxAtoms);

  auto text = [](const Atom& a) { return a.var + "@0=" + std::to_string(a.value); };
  std::vector<Candidate> out;
  for (const auto& a : atoms) out.push_back({text(a), a.set});
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].var == atoms[j].var) continue;
      WorldSet s(f.size());
      WorldSet::and_of(s, atoms[i].set, atoms[j].set);
      out.push_back({text(atoms[i]) + " ∧ " + text(atoms[j]), std::move(s)});
    }
  for (std::size_t i = 0; i < atoms.size(); ++i)
    for (std::size_t j = i + 1; j < atoms.size(); ++j) {
      if (atoms[i].var == atoms[j].var) continue;
      WorldSet s(f.size());
      WorldSet::or_of(s, atoms[i].set, atoms[j].set);
      out.push_back({text(atoms[i]) + " ∨ " + text(atoms[j]), std::move(s)});
    }
  return out;
}

std::string describe_run(const SecurityFrame& f, std::size_t run) {
  std::string s = "init(";
  const Store& st = f.stores[f.runs[run].first];
  for (std::size_t v = 0; v < f.var_names.size(); ++v) {
    if (v) s += ",";
    s += f.var_names[v] + "=" + kripkesec::to_string(st[v]);
  }
  return s + ")";
}

std::string suffix_description(const SecurityFrame& f, const TSProperty& p) {
  std::string out;
  for (std::size_t r = 0; r < f.runs.size(); ++r) {
    if (p.is_none(f, r)) continue;
    if (!out.empty()) out += " ∨ ";
    out += describe_run(f, r);
    if (p.cuts[r] > 0) out += "+depth≥" + std::to_string(p.cuts[r]);
  }
  return out.empty() ? "⊥" : out;
}

bool supported_frame(const SecurityFrame& f, std::string* why) {
  for (std::size_t r = 0; r < f.runs.size(); ++r)
    if (!f.runs[r].halts() && !f.runs[r].diverges()) {
      *why = "run " + std::to_string(r) + " is " + to_string(f.runs[r].status);
      return false;
    }
  return true;
}

Verdict check_agent(const SecurityFrame& f, PropertyId id, std::size_t agent, const CheckOptions& opt,
                    std::vector<Candidate>* dict) {
  Verdict v;
  v.property = id;
  v.agent = f.agents[agent].name;
  v.mode = opt.mode;
  std::string why;
  if (!supported_frame(f, &why)) {
    v.status = Status::kUnsupported;
    v.error = why;
    return v;
  }

  const std::string& name = f.agents[agent].name;
  CompiledFormula cf(f, property_template(id, name));
  const Partition* stab = stability_relation(f, id, agent);
  std::optional<RunClasses> classes;
  if (stab) classes = run_classes(f, *stab);

  const std::size_t n = f.size();
  WorldSet violated(n), fresh(n);
  std::map<std::size_t, TSProperty> first;  // smallest violated worlds
  try {
    enumerate_ts(
        f, opt.mode,
        [&](const TSProperty& p, const WorldSet& s) {
          const WorldSet& ext = cf.evaluate(s);
          WorldSet::not_of(fresh, ext);
          fresh.subtract(violated);
          if (fresh.none()) return true;
          violated |= fresh;
          fresh.for_each([&](std::size_t w) {
            if (first.size() < opt.max_witnesses) {
              first.emplace(w, p);
            } else if (opt.max_witnesses > 0 && w < first.rbegin()->first) {
              first.erase(std::prev(first.end()));
              first.emplace(w, p);
            }
          });
          return !violated.all();
        },
        classes ? &*classes : nullptr, opt.exhaustive_bound);
  } catch (const BoundError& e) {
    v.status = Status::kUnsupported;
    v.error = e.what();
    return v;
  }

  violated.for_each([&](std::size_t w) { v.violating.push_back(static_cast<std::uint32_t>(w)); });
  if (violated.none()) return v;
  v.status = Status::kViolated;

  if (opt.render && dict && dict->empty()) *dict = dictionary(f);
  for (const auto& [w, p] : first) {
    Witness wit{w, name, p, ""};
    bool found = false;
    if (opt.render && dict) {
      for (const auto& c : *dict) {
        if (stab && !admissible(f, id, agent, c.set)) continue;
        if (cf.evaluate(c.set).test(w)) continue;
        wit.phi = TSProperty::from_set(f, c.set);
        wit.rendered = c.text;
        found = true;
        break;
      }
    }
    if (!found) wit.rendered = suffix_description(f, p);
    v.witnesses.push_back(std::move(wit));
  }
  return v;
}

}  // namespace

std::vector<Verdict> check(const SecurityFrame& f, PropertyId id, const std::vector<std::string>& agents,
                           const CheckOptions& opt) {
  std::vector<std::size_t> which;
  if (agents.empty()) {
    for (std::size_t a = 0; a < f.agents.size(); ++a) which.push_back(a);
  } else {
    for (const auto& name : agents) which.push_back(f.agent_index(name));
    std::sort(which.begin(), which.end());
    which.erase(std::unique(which.begin(), which.end()), which.end());
  }
  std::vector<Candidate> dict;
  std::vector<Verdict> out;
  for (auto a : which) out.push_back(check_agent(f, id, a, opt, &dict));
  return out;
}

bool recheck(const SecurityFrame& f, PropertyId id, const Witness& w) {
  std::size_t agent = f.agent_index(w.agent);
  WorldSet s = w.phi.to_set(f);
  if (!admissible(f, id, agent, s)) return false;
  return !eval(f, w.world, property_template(id, w.agent), s);
}

std::string render_set(const SecurityFrame& f, const TSProperty& p) {
  WorldSet s = p.to_set(f);
  if (s.none()) return "⊥";
  if (s.all()) return "⊤";
  for (const auto& c : dictionary(f))
    if (c.set == s) return c.text;
  return suffix_description(f, p);
}

bool check_rd_equivalence(const SecurityFrame& f, const CheckOptions& opt) {
  if (f.has_declassification())
    throw UnsupportedError("RD simplification needs K^C = K^P, but the frame declassifies");
  CheckOptions o = opt;
  o.render = false;
  auto a = check(f, PropertyId::kRd, {}, o);
  auto b = check(f, PropertyId::kRdSimplified, {}, o);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].status != b[i].status || a[i].violating != b[i].violating) return false;
    for (const auto& w : a[i].witnesses)
      if (!recheck(f, PropertyId::kRd, w)) return false;
    for (const auto& w : b[i].witnesses)
      if (!recheck(f, PropertyId::kRdSimplified, w)) return false;
  }
  return true;
}

std::vector<std::string> audit_theorem_assumptions(const SecurityFrame& f, const SecurityContext& ctx,
                                                   PropertyId id) {
  std::vector<std::string> out;
  bool rd_te = id == PropertyId::kTiRd || id == PropertyId::kTiTe || id == PropertyId::kRd || id == PropertyId::kTe;
  if (!rd_te) return out;
  if (!ctx.signals_termination) {
    bool all_halt = std::all_of(f.runs.begin(), f.runs.end(), [](const RunInfo& r) { return r.halts(); });
    out.push_back(all_halt ? "termination is not signalled (benign here: every run halts)"
                           : "termination is not signalled");
  }
  if (ctx.synchronous) out.push_back("context is synchronous");
  for (std::size_t a = 0; a < ctx.agents.size(); ++a) {
    if (ctx.write_within_read(a)) continue;
    std::string vars;
    const auto& ag = ctx.agents[a];
    for (std::size_t v = 0; v < ag.write.size() && v < f.var_names.size(); ++v)
      if (ag.write[v] && !(v < ag.read.size() && ag.read[v])) vars += (vars.empty() ? "" : ",") + f.var_names[v];
    out.push_back("W(" + ag.name + ") ⊄ R(" + ag.name + "): " + vars + " writable but not readable");
  }
  return out;
}

}  // namespace kripkesec
