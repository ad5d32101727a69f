#include "kripkesec/oracle.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "kripkesec/errors.hpp"

namespace kripkesec {

namespace {

constexpr std::array<std::string_view, kTraceCount> kTraceNames = {
    "TRACE_CONF", "TI_TRACE_CONF", "TI_TRACE_INTEG", "TRACE_RD", "TRACE_TE"};

bool is_ti(TraceId id) { return id == TraceId::kTiTraceConf || id == TraceId::kTiTraceInteg; }
bool uses_fix(TraceId id) { return id == TraceId::kTiTraceInteg || id == TraceId::kTraceTe; }

std::vector<bool> var_set(const std::vector<bool>& mask, bool complement) {
  std::vector<bool> out(mask.size());
  for (std::size_t i = 0; i < mask.size(); ++i) out[i] = mask[i] != complement;
  return out;
}

// X (and Y for quadruples) as masks over variables.
std::pair<std::vector<bool>, std::vector<bool>> quantified_masks(const SecurityContext& ctx, TraceId id,
                                                                 std::size_t agent) {
  const auto& a = ctx.agents[agent];
  std::vector<bool> secret = var_set(a.read, true);  // V ∖ R(A)
  std::vector<bool> writable = a.write;               // W(A)
  switch (id) {
    case TraceId::kTraceConf:
    case TraceId::kTiTraceConf: return {secret, {}};
    case TraceId::kTiTraceInteg: return {writable, {}};
    case TraceId::kTraceRd: return {secret, writable};
    case TraceId::kTraceTe: return {writable, secret};
  }
  return {};
}

Store project_store(const Store& s, const std::vector<bool>& mask) {
  Store out;
  for (std::size_t i = 0; i < s.size(); ++i)
    if (mask[i]) out.push_back(s[i]);
  return out;
}

std::string store_text(const SymbolTable& syms, const Store& s) {
  std::string out = "(";
  for (std::size_t v = 0; v < s.size(); ++v) {
    if (v) out += ",";
    out += syms.vars[v].name + "=" + to_string(s[v]);
  }
  return out + ")";
}

struct Runs {
  std::vector<Store> stores;
  std::vector<Run> runs;
};

// Interns observation sequences so equality is an integer compare.
class ObsTable {
 public:
  std::uint32_t intern(const ObsSeq& s) {
    auto key = to_string(s) + (s.ticking ? "~" : "");
    auto [it, fresh] = ids_.emplace(key, static_cast<std::uint32_t>(text_.size()));
    if (fresh) text_.push_back(key);
    return it->second;
  }
  const std::string& text(std::uint32_t id) const { return text_[id]; }

 private:
  std::unordered_map<std::string, std::uint32_t> ids_;
  std::vector<std::string> text_;
};

}  // namespace

const std::array<TraceId, kTraceCount>& all_trace_ids() {
  static const std::array<TraceId, kTraceCount> ids = {TraceId::kTraceConf, TraceId::kTiTraceConf,
                                                       TraceId::kTiTraceInteg, TraceId::kTraceRd,
                                                       TraceId::kTraceTe};
  return ids;
}

std::string_view to_string(TraceId id) { return kTraceNames[static_cast<std::size_t>(id)]; }

std::optional<TraceId> parse_trace_id(std::string_view s) {
  std::string up;
  for (char c : s) up += c == '-' ? '_' : static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (std::size_t i = 0; i < kTraceCount; ++i)
    if (kTraceNames[i] == up) return static_cast<TraceId>(i);
  return std::nullopt;
}

std::vector<VarId> quantified_vars(const SecurityContext& ctx, TraceId id, std::size_t agent) {
  auto [x, y] = quantified_masks(ctx, id, agent);
  std::vector<VarId> out;
  for (std::size_t v = 0; v < x.size(); ++v)
    if (x[v] || (!y.empty() && y[v])) out.push_back(static_cast<VarId>(v));
  return out;
}

TraceVerdict trace_check(const Program& p, const SecurityContext& ctx, TraceId id, const OracleOptions& opt) {
  TraceVerdict tv;
  tv.id = id;
  Runs rs;
  rs.stores = enumerate_initial_stores(p, ctx, opt.store_bound);
  for (const auto& s : rs.stores) {
    rs.runs.push_back(unfold_run(p, s, opt.budget));
    const Run& r = rs.runs.back();
    if (!r.supported()) {
      tv.status = Status::kUnsupported;
      tv.error = "run from " + store_text(p.syms, s) + " is " + to_string(r.status) +
                 (r.note.empty() ? "" : ": " + r.note);
      return tv;
    }
  }
  const std::size_t n = rs.runs.size();
  const bool fix_obs = uses_fix(id);
  const bool escape = !opt.strict_termination;

  for (std::size_t a = 0; a < ctx.agents.size(); ++a) {
    ObsTable table;
    std::vector<std::uint32_t> obs(n);
    for (std::size_t r = 0; r < n; ++r)
      obs[r] = table.intern(fix_obs ? maximal_fix(ctx, a, rs.runs[r]) : maximal_view(ctx, a, rs.runs[r]));
    auto [x, y] = quantified_masks(ctx, id, a);
    const std::string& agent = ctx.agents[a].name;
    std::optional<TraceWitness> wit;

    if (id == TraceId::kTraceRd || id == TraceId::kTraceTe) {
      // t^{ij} from σ[X↦v_i][Y↦w_j]; Y wins where the two overlap
      std::vector<bool> xo(x.size()), rest(x.size());
      for (std::size_t v = 0; v < x.size(); ++v) {
        xo[v] = x[v] && !y[v];
        rest[v] = !x[v] && !y[v];
      }
      struct Group {
        std::map<Store, std::size_t> xs, ys;
        std::map<std::pair<std::size_t, std::size_t>, std::size_t> run;
      };
      std::map<Store, Group> groups;
      std::vector<Store> order;
      for (std::size_t r = 0; r < n; ++r) {
        Store z = project_store(rs.stores[r], rest);
        auto [it, fresh] = groups.try_emplace(z);
        if (fresh) order.push_back(z);
        Group& g = it->second;
        auto xi = g.xs.try_emplace(project_store(rs.stores[r], xo), g.xs.size()).first->second;
        auto yi = g.ys.try_emplace(project_store(rs.stores[r], y), g.ys.size()).first->second;
        g.run.emplace(std::make_pair(xi, yi), r);
      }
      for (const auto& z : order) {
        const Group& g = groups.at(z);
        std::size_t nx = g.xs.size(), ny = g.ys.size();
        auto at = [&](std::size_t i, std::size_t j) { return g.run.at({i, j}); };
        for (std::size_t i1 = 0; i1 < nx && !wit; ++i1)
          for (std::size_t i2 = i1 + 1; i2 < nx && !wit; ++i2)
            for (std::size_t j1 = 0; j1 < ny && !wit; ++j1)
              for (std::size_t j2 = j1 + 1; j2 < ny && !wit; ++j2) {
                std::size_t t11 = at(i1, j1), t21 = at(i2, j1), t12 = at(i1, j2), t22 = at(i2, j2);
                bool all_halt = rs.runs[t11].halts() && rs.runs[t21].halts() && rs.runs[t12].halts() &&
                                rs.runs[t22].halts();
                if (escape && !all_halt) continue;
                bool e1 = obs[t11] == obs[t21], e2 = obs[t12] == obs[t22];
                if (e1 == e2) continue;
                TraceWitness w;
                w.agent = agent;
                for (auto t : {t11, t12, t21, t22}) {
                  w.stores.push_back(rs.stores[t]);
                  w.observations.push_back(table.text(obs[t]));
                }
                const char* what = fix_obs ? "fix" : "view";
                w.detail = std::string(what) + "(t11)" + (e1 ? "=" : "≠") + what + "(t21) but " + what + "(t12)" +
                           (e2 ? "=" : "≠") + what + "(t22)";
                wit = std::move(w);
              }
        if (wit) break;
      }
    } else {
      // pairs σ[X↦v1], σ[X↦v2]: stores agreeing outside X
      std::vector<bool> rest = var_set(x, true);
      std::map<Store, std::size_t> rep;  // first eligible run per class
      for (std::size_t r = 0; r < n && !wit; ++r) {
        if (is_ti(id) && escape && !rs.runs[r].halts()) continue;
        auto [it, fresh] = rep.try_emplace(project_store(rs.stores[r], rest), r);
        if (fresh || obs[it->second] == obs[r]) continue;
        TraceWitness w;
        w.agent = agent;
        for (auto t : {it->second, r}) {
          w.stores.push_back(rs.stores[t]);
          w.observations.push_back(table.text(obs[t]));
        }
        w.detail = fix_obs ? "fix(t1)≠fix(t2)" : "view(t1)≠view(t2)";
        if (is_ti(id)) w.detail += ", both halt";
        wit = std::move(w);
      }
    }
    if (wit) {
      tv.status = Status::kViolated;
      tv.witnesses.push_back(std::move(*wit));
    }
  }
  return tv;
}

const std::array<Pairing, kPairingCount>& all_pairings() {
  static const std::array<Pairing, kPairingCount> ps = {Pairing::kConf,         Pairing::kTiConf,
                                                        Pairing::kTiInteg,      Pairing::kTiCauseInteg,
                                                        Pairing::kRd,           Pairing::kTe};
  return ps;
}

TraceId trace_side(Pairing p) {
  switch (p) {
    case Pairing::kConf: return TraceId::kTraceConf;
    case Pairing::kTiConf: return TraceId::kTiTraceConf;
    case Pairing::kTiInteg:
    case Pairing::kTiCauseInteg: return TraceId::kTiTraceInteg;
    case Pairing::kRd: return TraceId::kTraceRd;
    case Pairing::kTe: return TraceId::kTraceTe;
  }
  return TraceId::kTraceConf;
}

PropertyId modal_side(Pairing p) {
  switch (p) {
    case Pairing::kConf: return PropertyId::kConf;
    case Pairing::kTiConf: return PropertyId::kTiConf;
    case Pairing::kTiInteg: return PropertyId::kTiInteg;
    case Pairing::kTiCauseInteg: return PropertyId::kTiCauseInteg;
    case Pairing::kRd: return PropertyId::kTiRd;
    case Pairing::kTe: return PropertyId::kTiTe;
  }
  return PropertyId::kConf;
}

std::string pairing_name(Pairing p) {
  return std::string(to_string(trace_side(p))) + "<->" + std::string(to_string(modal_side(p)));
}

const char* to_string(Agreement a) {
  switch (a) {
    case Agreement::kAgree: return "AGREE";
    case Agreement::kDisagree: return "DISAGREE";
    case Agreement::kSkipped: return "SKIPPED";
  }
  return "?";
}

std::vector<DiffResult> differential(const Program& p, const SecurityContext& ctx,
                                     const std::vector<Pairing>& pairings, const DiffOptions& opt) {
  std::vector<Pairing> which(pairings);
  if (which.empty()) which.assign(all_pairings().begin(), all_pairings().end());

  std::vector<std::string> global;
  bool refined = ctx.endorse_mode != EndorseMode::kNone;
  for (const auto& a : ctx.agents) refined = refined || a.declass.has_value();
  if (refined) global.push_back("policy refinements (declassification/endorsement) are outside the theorems");
  if (ctx.synchronous) global.push_back("synchronous contexts are outside the theorems");

  std::optional<SecurityFrame> frame;
  std::string build_error;
  if (global.empty()) {
    try {
      frame = build_frame(p, ctx, opt.build);
    } catch (const Error& e) {
      build_error = e.what();
    }
  }

  std::vector<DiffResult> out;
  for (Pairing pr : which) {
    DiffResult d;
    d.pairing = pr;
    d.notes = global;
    if (d.notes.empty() && !frame) d.notes.push_back("frame unavailable: " + build_error);
    if (frame) {
      auto warnings = audit_theorem_assumptions(*frame, ctx, modal_side(pr));
      d.notes.insert(d.notes.end(), warnings.begin(), warnings.end());
    }
    if (!d.notes.empty()) {
      d.agreement = Agreement::kSkipped;
      out.push_back(std::move(d));
      continue;
    }
    OracleOptions oo;
    oo.budget = opt.build.budget;
    oo.store_bound = opt.build.store_bound;
    d.trace = trace_check(p, ctx, trace_side(pr), oo);
    CheckOptions co;
    co.mode = opt.mode;
    d.modal = check(*frame, modal_side(pr), {}, co);
    d.trace_status = d.trace.status;
    d.modal_status = combined_status(d.modal);
    if (d.trace_status == Status::kUnsupported || d.modal_status == Status::kUnsupported) {
      d.agreement = Agreement::kSkipped;
      d.notes.push_back("unsupported: " + (d.trace.error.empty() ? std::string("modal search bound") : d.trace.error));
    } else {
      d.agreement = d.trace_status == d.modal_status ? Agreement::kAgree : Agreement::kDisagree;
    }
    out.push_back(std::move(d));
  }
  return out;
}

const std::vector<Arrow>& implication_arrows() {
  using P = PropertyId;
  static const std::vector<Arrow> arrows = {
      // confidentiality diagram
      {P::kConf, P::kTiConf},
      {P::kConf, P::kPiConf},
      {P::kConf, P::kRd},
      {P::kRd, P::kRdVarA},
      {P::kTiConf, P::kRdAlt},
      {P::kRdAlt, P::kRdVarA},
      {P::kRdVarA, P::kRdVarB},
      {P::kRdVarB, P::kTiRd},
      // integrity diagram
      {P::kInteg, P::kTiInteg},
      {P::kCauseInteg, P::kTiCauseInteg},
      {P::kInteg, P::kTeAlt},
      {P::kInteg, P::kTe},
      {P::kTe, P::kTiTe},
      {P::kTiInteg, P::kTiTe},
  };
  return arrows;
}

namespace {

Policy make_policy(std::vector<std::string> read, std::vector<std::string> write,
                   std::map<std::string, std::vector<Value>> domains = {}) {
  Policy p;
  p.agents = {"A"};
  p.read["A"] = std::move(read);
  p.write["A"] = std::move(write);
  p.domains = std::move(domains);
  p.signals_termination = true;
  return p;
}

}  // namespace

const std::vector<Separation>& separating_programs() {
  using P = PropertyId;
  static const std::vector<Separation> seps = [] {
    auto bit = std::vector<Value>{Value::of(0), Value::of(1)};
    auto zero = std::vector<Value>{Value::of(0)};
    Policy conf = make_policy({"p"}, {});
    Policy rd = make_policy({"p", "u"}, {"u"}, {{"u", bit}, {"s", bit}, {"h", bit}, {"p", zero}});
    Policy te = make_policy({"t", "u"}, {"u"});
    Policy pi = make_policy({"p"}, {}, {{"s", {Value::of(0), Value::of(1), Value::of(2), Value::of(3)}},
                                        {"i", zero}, {"p", zero}});
    std::string fig = "var u, s, h in {0,1}; var p in {0}\n";
    std::string loops = "var s in 0..3; var i in {0}; var p in {0}\n";
    return std::vector<Separation>{
        {"conf (ii)", "p := s; if s = 1 then loop", conf, P::kTiConf, P::kConf},
        {"conf (ii) intermediate", "p := s; if s = 1 then loop", conf, P::kTiConf, P::kTiConfIntermediate},
        {"conf (iii)", "p := s; loop", conf, P::kTiConfIntermediate, P::kConf},
        {"progress", loops + "for i = 0..s do p := i", pi, P::kPiConf, P::kConf},
        {"rd boundary", "p := s; if u = 0 then loop", rd, P::kRd, P::kRdAlt},
        {"ti-rd boundary", "if u = 1 then p := s else loop", rd, P::kTiRd, P::kRdAlt},
        {"fig1 (iii)", fig + "(if u = 1 then p := s); loop", rd, P::kRdVarA, P::kRd},
        {"fig1 (iv)", fig + "if u = 1 then (p := s; if s = 1 then loop)", rd, P::kRdVarB, P::kRdVarA},
        {"fig1 (v)", fig + "(if u = 1 then p := s); if s and (u xor h) then loop", rd, P::kTiRd, P::kRdVarB},
        {"te (i)", "var s, t, u in {0,1}\nt := u", te, P::kTiTe, P::kTeAlt},
    };
  }();
  return seps;
}

bool AuditReport::ok() const {
  for (const auto& a : arrows)
    if (!a.counterexamples.empty()) return false;
  for (const auto& s : separations)
    if (!s.ok) return false;
  return true;
}

AuditReport implication_audit(const std::vector<CorpusMember>& corpus, const CheckOptions& opt,
                              const BuildOptions& build) {
  AuditReport rep;
  const auto& arrows = implication_arrows();
  for (const auto& a : arrows) rep.arrows.push_back({a, 0, 0, {}});

  for (const auto& m : corpus) {
    SecurityFrame f;
    try {
      f = build_frame(m.program, m.ctx, build);
    } catch (const Error& e) {
      rep.skipped.push_back(m.name + ": " + e.what());
      continue;
    }
    std::map<PropertyId, Status> cache;
    auto status = [&](PropertyId id) {
      auto it = cache.find(id);
      if (it == cache.end()) it = cache.emplace(id, combined_status(check(f, id, {}, opt))).first;
      return it->second;
    };
    for (std::size_t i = 0; i < arrows.size(); ++i) {
      Status s = status(arrows[i].stronger);
      if (s == Status::kUnsupported) continue;
      ++rep.arrows[i].frames;
      if (s == Status::kViolated) {
        ++rep.arrows[i].vacuous;
        continue;
      }
      if (status(arrows[i].weaker) == Status::kViolated) rep.arrows[i].counterexamples.push_back(m.name);
    }
  }

  for (const auto& sep : separating_programs()) {
    AuditReport::SeparationResult r{sep, Status::kUnsupported, Status::kUnsupported, false};
    try {
      Program p = parse_program(sep.source);
      SecurityContext ctx = bind_policy(sep.policy, p);
      SecurityFrame f = build_frame(p, ctx, build);
      r.satisfied_status = combined_status(check(f, sep.satisfied, {}, opt));
      r.violated_status = combined_status(check(f, sep.violated, {}, opt));
      r.ok = r.satisfied_status == Status::kSatisfied && r.violated_status == Status::kViolated;
    } catch (const Error&) {
    }
    rep.separations.push_back(std::move(r));
  }
  return rep;
}

}  // namespace kripkesec
