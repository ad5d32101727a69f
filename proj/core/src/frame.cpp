#include "kripkesec/frame.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

namespace kripkesec {

Partition Partition::from_keys(const std::vector<std::uint64_t>& keys) {
  Partition p;
  p.cls.resize(keys.size());
  std::unordered_map<std::uint64_t, std::uint32_t> ids;
  for (std::size_t w = 0; w < keys.size(); ++w) {
    auto [it, fresh] = ids.emplace(keys[w], static_cast<std::uint32_t>(p.members.size()));
    if (fresh) p.members.emplace_back();
    p.cls[w] = it->second;
    p.members[it->second].push_back(static_cast<std::uint32_t>(w));
  }
  return p;
}

Partition Partition::identity(std::size_t n) {
  std::vector<std::uint64_t> keys(n);
  for (std::size_t i = 0; i < n; ++i) keys[i] = i;
  return from_keys(keys);
}

bool Partition::same_as(const Partition& o) const {
  if (cls.size() != o.cls.size() || members.size() != o.members.size()) return false;
  // classes correspond iff the first member of each class maps consistently
  std::vector<std::uint32_t> map(members.size(), kNone);
  for (std::size_t w = 0; w < cls.size(); ++w) {
    auto& m = map[cls[w]];
    if (m == kNone) m = o.cls[w];
    if (m != o.cls[w]) return false;
  }
  return true;
}

Partition Partition::intersect(const Partition& o) const {
  std::vector<std::uint64_t> keys(cls.size());
  for (std::size_t w = 0; w < cls.size(); ++w)
    keys[w] = (static_cast<std::uint64_t>(cls[w]) << 32) | o.cls[w];
  return from_keys(keys);
}

const char* rel_name(Rel r) {
  switch (r) {
    case Rel::kT: return "T";
    case Rel::kKC: return "KC";
    case Rel::kKP: return "KP";
    case Rel::kWC: return "WC";
    case Rel::kWP: return "WP";
    case Rel::kCount: return "K#";
  }
  return "?";
}

const Partition& AgentFrame::get(Rel r) const {
  switch (r) {
    case Rel::kKC: return kc;
    case Rel::kKP: return kp;
    case Rel::kWC: return wc;
    case Rel::kWP: return wp;
    case Rel::kCount: return count;
    case Rel::kT: break;
  }
  throw Error("the time relation is not a partition");
}

std::size_t SecurityFrame::agent_index(std::string_view name) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == name) return i;
  throw Error("unknown agent '" + std::string(name) + "'");
}

std::size_t SecurityFrame::world_index(std::uint32_t run, std::uint32_t depth, bool limit) const {
  const RunInfo& r = runs.at(run);
  if (limit) {
    if (!r.diverges()) throw Error("run " + std::to_string(run) + " has no limit world");
    return r.first + r.size - 1;
  }
  if (depth >= r.size || (r.diverges() && depth == r.size - 1))
    throw Error("run " + std::to_string(run) + " has no world at depth " + std::to_string(depth));
  return r.first + depth;
}

bool SecurityFrame::has_declassification() const {
  for (const auto& a : agents)
    if (a.declassified || !a.kp.same_as(a.kc)) return true;
  return false;
}

std::string SecurityFrame::world_label(std::size_t w) const {
  const World& x = worlds[w];
  std::string s = "run " + std::to_string(x.run) + " ";
  s += x.limit ? "limit" : "depth " + std::to_string(x.depth);
  return s;
}

std::string SecurityFrame::store_label(std::size_t w) const {
  std::string s;
  for (const auto& v : stores[w]) s += to_string(v);
  return s;
}

WorldSet SecurityFrame::run_set(std::size_t run) const {
  WorldSet s(size());
  for (std::uint32_t i = 0; i < runs[run].size; ++i) s.set(runs[run].first + i);
  return s;
}

namespace {

// Interns observation sequences as paths in a trie; equal ids mean equal
// sequences.
class ObsTrie {
 public:
  std::uint32_t child(std::uint32_t parent, const ObsEntry& e) {
    auto key = std::make_pair(parent, e);
    auto it = nodes_.find(key);
    if (it != nodes_.end()) return it->second;
    std::uint32_t id = next_++;
    nodes_.emplace(std::move(key), id);
    return id;
  }
  static constexpr std::uint32_t kRoot = 0;

 private:
  std::map<std::pair<std::uint32_t, ObsEntry>, std::uint32_t> nodes_;
  std::uint32_t next_ = 1;
};

Value blank() {
  Value v;
  v.kind = Value::Kind::kTagSet;
  v.scalar = std::numeric_limits<Int>::min();
  return v;
}

struct Observed {
  std::vector<std::uint32_t> id;
  std::vector<std::uint32_t> length;
};

// entry(w) yields the projected observation at world w.
template <class EntryFn>
Observed observe(const SecurityFrame& f, bool stutter_free, EntryFn&& entry) {
  Observed o;
  o.id.resize(f.size());
  o.length.resize(f.size());
  ObsTrie trie;
  for (const auto& r : f.runs) {
    std::uint32_t node = ObsTrie::kRoot, len = 0;
    ObsEntry last;
    for (std::uint32_t i = 0; i < r.size; ++i) {
      std::size_t w = r.first + i;
      ObsEntry e = entry(w);
      if (i == 0 || !stutter_free || !(e == last)) {
        node = trie.child(node, e);
        ++len;
      }
      last = std::move(e);
      o.id[w] = node;
      o.length[w] = len;
    }
  }
  return o;
}

Observed observe_view(const SecurityFrame& f, const std::vector<bool>& read) {
  return observe(f, !f.synchronous, [&](std::size_t w) {
    ObsEntry e = project(f.stores[w], read);
    e.halted = f.signals_termination && f.halted[w];
    return e;
  });
}

std::vector<bool> complement(std::vector<bool> m) {
  m.flip();
  return m;
}

Observed observe_fix(const SecurityFrame& f, const std::vector<bool>& write) {
  auto mask = complement(write);
  return observe(f, true, [&](std::size_t w) {
    ObsEntry e = project(f.stores[w], mask);
    e.halted = f.signals_termination && f.halted[w];
    return e;
  });
}

std::vector<std::uint64_t> widen(const std::vector<std::uint32_t>& v) {
  return std::vector<std::uint64_t>(v.begin(), v.end());
}

void compute_relations(SecurityFrame& f, AgentFrame& a) {
  Observed view = observe_view(f, a.read);
  a.kc = Partition::from_keys(widen(view.id));
  a.kp = a.kc;
  std::vector<std::uint64_t> ckeys(f.size());
  for (std::size_t w = 0; w < f.size(); ++w)
    ckeys[w] = (static_cast<std::uint64_t>(view.length[w]) << 1) |
               (f.signals_termination && f.halted[w] ? 1u : 0u);
  a.count = Partition::from_keys(ckeys);

  Observed fx = observe_fix(f, a.write);
  a.wp = Partition::from_keys(widen(fx.id));
  std::vector<std::uint64_t> wkeys(f.size());
  for (std::size_t w = 0; w < f.size(); ++w)
    wkeys[w] = f.worlds[w].depth == 0 && !f.worlds[w].limit ? fx.id[w] : (std::uint64_t{1} << 40) + w;
  a.wc = Partition::from_keys(wkeys);
}

}  // namespace

SecurityFrame build_base_frame(const Program& p, const SecurityContext& ctx, const BuildOptions& opt) {
  SecurityFrame f;
  for (const auto& v : p.syms.vars) f.var_names.push_back(v.name);
  f.signals_termination = ctx.signals_termination;
  f.synchronous = ctx.synchronous;

  std::vector<Run> runs;
  for (auto& s : enumerate_initial_stores(p, ctx, opt.store_bound)) {
    Run r = unfold_run(p, std::move(s), opt.budget);
    if (!r.supported()) {
      std::string st;
      for (std::size_t v = 0; v < r.initial.size(); ++v)
        st += (v ? "," : "") + f.var_names[v] + "=" + to_string(r.initial[v]);
      throw UnsupportedError("run " + std::to_string(runs.size()) + " from (" + st + ") is " +
                             to_string(r.status) + (r.note.empty() ? "" : ": " + r.note));
    }
    runs.push_back(std::move(r));
  }
  std::size_t horizon = 0;
  for (const auto& r : runs) horizon = std::max(horizon, r.configs.size() - 1);

  for (std::uint32_t ri = 0; ri < runs.size(); ++ri) {
    const Run& r = runs[ri];
    RunInfo info;
    info.first = static_cast<std::uint32_t>(f.worlds.size());
    info.status = r.status;
    info.note = r.note;
    std::size_t last = r.configs.size() - 1;
    if (r.silent() && ctx.synchronous) last = horizon;
    for (std::size_t d = 0; d <= last; ++d) {
      const Config& c = r.configs[std::min(d, r.configs.size() - 1)];
      f.worlds.push_back({ri, static_cast<std::uint32_t>(d), false});
      f.stores.push_back(c.store);
      f.halted.push_back(d < r.configs.size() && c.halted);
    }
    if (r.silent()) {
      f.worlds.push_back({ri, static_cast<std::uint32_t>(last + 1), true});
      f.stores.push_back(r.configs.back().store);
      f.halted.push_back(false);
    }
    info.size = static_cast<std::uint32_t>(f.worlds.size() - info.first);
    f.runs.push_back(std::move(info));
  }

  for (const auto& ag : ctx.agents) {
    AgentFrame a;
    a.name = ag.name;
    a.read = ag.read;
    a.write = ag.write;
    compute_relations(f, a);
    f.agents.push_back(std::move(a));
  }
  return f;
}

SecurityFrame build_frame(const Program& p, const SecurityContext& ctx, const BuildOptions& opt) {
  SecurityFrame f = build_base_frame(p, ctx, opt);
  for (std::size_t a = 0; a < ctx.agents.size(); ++a) {
    if (ctx.agents[a].declass) refine_declassification(f, a, *ctx.agents[a].declass);
    if (ctx.endorse_mode != EndorseMode::kNone)
      endorsement_perm(f, a, ctx.endorse_mode, ctx.agents[a].endorsable, p.syms.endorsed, &p.syms);
  }
  return f;
}

void refine_declassification(SecurityFrame& f, std::size_t agent, const Predicate& psi) {
  std::vector<std::uint64_t> keys(f.size());
  for (std::size_t w = 0; w < f.size(); ++w) {
    Int v;
    try {
      v = eval_expr(psi.ast, psi.root, f.initial_store(w)).scalar;
    } catch (const EvalError& e) {
      throw Error("declassification predicate '" + psi.text + "': " + e.what());
    }
    keys[w] = v != 0 ? 1 : 0;
  }
  AgentFrame& a = f.agents[agent];
  a.kp = a.kp.intersect(Partition::from_keys(keys));
  a.declassified = true;
}

void endorsement_perm(SecurityFrame& f, std::size_t agent, EndorseMode mode,
                      const std::vector<bool>& endorsable, VarId endorsed_var, const SymbolTable* syms) {
  if (mode == EndorseMode::kNone) return;
  AgentFrame& a = f.agents[agent];
  auto mask = complement(a.write);
  const Value b = blank();
  Observed fx = observe(f, true, [&](std::size_t w) {
    const Store& s = f.stores[w];
    ObsEntry e;
    for (std::size_t v = 0; v < s.size(); ++v) {
      if (!mask[v]) continue;
      bool hidden = false;
      if (mode == EndorseMode::kPerVariable) {
        hidden = v < endorsable.size() && endorsable[v];
      } else if (endorsed_var != kNone && syms) {
        for (Int t : s[endorsed_var].items) {
          const auto& tok = syms->tokens[static_cast<std::size_t>(t)];
          hidden = hidden || (tok.agent == a.name && tok.var == v);
        }
      }
      e.values.push_back(hidden ? b : s[v]);
    }
    e.halted = f.signals_termination && f.halted[w];
    return e;
  });
  a.wp = Partition::from_keys(widen(fx.id));
  a.endorsed = true;
}

Partition counting_relation(const SecurityFrame& f, std::size_t agent) {
  Observed view = observe_view(f, f.agents[agent].read);
  std::vector<std::uint64_t> keys(f.size());
  for (std::size_t w = 0; w < f.size(); ++w)
    keys[w] = (static_cast<std::uint64_t>(view.length[w]) << 1) |
              (f.signals_termination && f.halted[w] ? 1u : 0u);
  return Partition::from_keys(keys);
}

FrameReport check_frame_properties(const SecurityFrame& f) {
  FrameReport rep;
  const std::size_t n = f.size();
  auto pair_str = [&](std::size_t a, std::size_t b) {
    return "(" + f.world_label(a) + ", " + f.world_label(b) + ")";
  };

  for (const auto& a : f.agents) {
    // commutation: WC;KC = KC;WC, compared per source world
    for (std::size_t w = 0; w < n && rep.commutation; ++w) {
      WorldSet lhs(n), rhs(n);
      for (auto w2 : a.wc.members[a.wc.cls[w]])
        for (auto w3 : a.kc.members[a.kc.cls[w2]]) lhs.set(w3);
      for (auto w2 : a.kc.members[a.kc.cls[w]])
        for (auto w3 : a.wc.members[a.wc.cls[w2]]) rhs.set(w3);
      if (!(lhs == rhs)) {
        rep.commutation = false;
        WorldSet d = lhs;
        d.subtract(rhs);
        if (d.none()) {
          d = rhs;
          d.subtract(lhs);
        }
        rep.problems.push_back("agent " + a.name + ": W^C and K^C do not commute at " +
                               pair_str(w, d.elements().front()));
      }
    }

    // perfect recall over cut-vector generators: per K-class and run, the
    // smallest depth it touches must not decrease along T
    for (const Partition* k : {&a.kc, &a.kp}) {
      const std::size_t R = f.runs.size();
      std::vector<std::uint32_t> mind(k->members.size() * R, std::numeric_limits<std::uint32_t>::max());
      for (std::size_t w = 0; w < n; ++w) {
        auto& m = mind[k->cls[w] * R + f.worlds[w].run];
        m = std::min(m, static_cast<std::uint32_t>(w - f.runs[f.worlds[w].run].first));
      }
      bool ok = true;
      for (const auto& r : f.runs) {
        for (std::uint32_t i = 0; i + 1 < r.size && ok; ++i) {
          std::size_t w = r.first + i, w2 = w + 1;
          for (std::size_t q = 0; q < R && ok; ++q) {
            auto cap = [&](std::uint32_t x) { return std::min(x, f.runs[q].size); };
            if (cap(mind[k->cls[w2] * R + q]) < cap(mind[k->cls[w] * R + q])) {
              ok = false;
              rep.problems.push_back("agent " + a.name + ": perfect recall fails between " +
                                     pair_str(w, w2) + " against run " + std::to_string(q));
            }
          }
        }
      }
      rep.perfect_recall = rep.perfect_recall && ok;
    }

    if (f.signals_termination) {
      for (const Partition* k : {&a.kc, &a.count}) {
        for (std::size_t w = 0; w < n; ++w) {
          if (!f.halted[w]) continue;
          for (auto w2 : k->members[k->cls[w]]) {
            if (!f.halted[w2]) {
              rep.signals_termination = false;
              rep.problems.push_back("agent " + a.name + (k == &a.count ? "#" : "") +
                                     ": halted world related to running world " + pair_str(w, w2));
              break;
            }
          }
          if (!rep.signals_termination) break;
        }
      }
    } else {
      for (std::size_t w = 0; w < n && rep.signals_termination; ++w) {
        if (!f.halted[w]) continue;
        for (auto w2 : a.kc.members[a.kc.cls[w]])
          if (!f.halted[w2]) {
            rep.signals_termination = false;
            rep.problems.push_back("agent " + a.name + ": termination not signalled at " + pair_str(w, w2));
            break;
          }
      }
    }
  }

  // characteristic formulae: runs have pairwise distinct initial stores and
  // every depth is nameable by an atom
  std::map<Store, std::size_t> initial;
  for (std::size_t r = 0; r < f.runs.size(); ++r) {
    auto [it, fresh] = initial.emplace(f.stores[f.runs[r].first], r);
    if (!fresh) {
      rep.characteristic = false;
      rep.problems.push_back("runs " + std::to_string(it->second) + " and " + std::to_string(r) +
                             " share an initial store");
    }
    if (f.var_names.empty() && f.runs[r].size > 1) {
      rep.characteristic = false;
      rep.problems.push_back("no variables: depths of run " + std::to_string(r) + " are not nameable");
    }
  }
  return rep;
}

namespace {

using nlohmann::json;

json value_to_json(const Value& v) {
  switch (v.kind) {
    case Value::Kind::kScalar: return v.scalar;
    case Value::Kind::kList: return v.items;
    case Value::Kind::kTagSet: return json{{"tags", v.items}};
  }
  return nullptr;
}

Value value_from_json(const json& j) {
  if (j.is_number_integer()) return Value::of(j.get<Int>());
  if (j.is_array()) return Value::list(j.get<std::vector<Int>>());
  if (j.is_object() && j.contains("tags")) return Value::tags(j["tags"].get<std::vector<Int>>());
  throw Error("frame json: bad value " + j.dump());
}

json partition_json(const Partition& p) { return p.cls; }

Partition partition_from_json(const json& j, std::size_t n) {
  auto ids = j.get<std::vector<std::uint64_t>>();
  if (ids.size() != n) throw Error("frame json: relation size mismatch");
  return Partition::from_keys(ids);
}

std::string dot_id(std::size_t w) { return "w" + std::to_string(w); }

}  // namespace

std::string export_json(const SecurityFrame& f) {
  json j;
  j["variables"] = f.var_names;
  j["signals_termination"] = f.signals_termination;
  j["synchronous"] = f.synchronous;
  json runs = json::array();
  for (const auto& r : f.runs) {
    json jr;
    jr["status"] = to_string(r.status);
    json ws = json::array();
    for (std::uint32_t i = 0; i < r.size; ++i) {
      std::size_t w = r.first + i;
      json jw;
      jw["depth"] = f.worlds[w].depth;
      jw["limit"] = f.worlds[w].limit;
      jw["halted"] = static_cast<bool>(f.halted[w]);
      json st = json::array();
      for (const auto& v : f.stores[w]) st.push_back(value_to_json(v));
      jw["store"] = st;
      ws.push_back(jw);
    }
    jr["worlds"] = ws;
    runs.push_back(jr);
  }
  j["runs"] = runs;
  json agents = json::array();
  for (const auto& a : f.agents) {
    json ja;
    ja["name"] = a.name;
    std::vector<std::string> rd, wr;
    for (std::size_t v = 0; v < f.var_names.size(); ++v) {
      if (a.read[v]) rd.push_back(f.var_names[v]);
      if (a.write[v]) wr.push_back(f.var_names[v]);
    }
    ja["read"] = rd;
    ja["write"] = wr;
    ja["KC"] = partition_json(a.kc);
    ja["KP"] = partition_json(a.kp);
    ja["WC"] = partition_json(a.wc);
    ja["WP"] = partition_json(a.wp);
    ja["Kcount"] = partition_json(a.count);
    ja["declassified"] = a.declassified;
    ja["endorsed"] = a.endorsed;
    agents.push_back(ja);
  }
  j["agents"] = agents;
  return j.dump(1) + "\n";
}

SecurityFrame import_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("frame json: ") + e.what());
  }
  SecurityFrame f;
  try {
    f.var_names = j.at("variables").get<std::vector<std::string>>();
    f.signals_termination = j.at("signals_termination").get<bool>();
    f.synchronous = j.at("synchronous").get<bool>();
    static const std::map<std::string, RunStatus> statuses = {
        {"HALTED", RunStatus::kHalted},
        {"STUCK", RunStatus::kStuck},
        {"SILENT_DIVERGE", RunStatus::kSilentDiverge}};
    for (const auto& jr : j.at("runs")) {
      RunInfo info;
      info.first = static_cast<std::uint32_t>(f.worlds.size());
      auto st = statuses.find(jr.at("status").get<std::string>());
      if (st == statuses.end()) throw Error("frame json: unsupported run status");
      info.status = st->second;
      const auto& ws = jr.at("worlds");
      if (ws.empty()) throw Error("frame json: run without worlds");
      for (std::size_t i = 0; i < ws.size(); ++i) {
        const auto& jw = ws[i];
        bool limit = jw.at("limit").get<bool>();
        if (jw.at("depth").get<std::size_t>() != i) throw Error("frame json: depths must count from 0");
        if (limit != (info.diverges() && i + 1 == ws.size()))
          throw Error("frame json: limit world must close a diverging run");
        f.worlds.push_back({static_cast<std::uint32_t>(f.runs.size()), static_cast<std::uint32_t>(i), limit});
        Store s;
        for (const auto& v : jw.at("store")) s.push_back(value_from_json(v));
        if (s.size() != f.var_names.size()) throw Error("frame json: store width mismatch");
        f.stores.push_back(std::move(s));
        f.halted.push_back(jw.at("halted").get<bool>());
      }
      info.size = static_cast<std::uint32_t>(ws.size());
      f.runs.push_back(std::move(info));
    }
    for (const auto& ja : j.at("agents")) {
      AgentFrame a;
      a.name = ja.at("name").get<std::string>();
      a.read.assign(f.var_names.size(), false);
      a.write.assign(f.var_names.size(), false);
      auto index = [&](const std::string& v) {
        auto it = std::find(f.var_names.begin(), f.var_names.end(), v);
        if (it == f.var_names.end()) throw Error("frame json: unknown variable '" + v + "'");
        return static_cast<std::size_t>(it - f.var_names.begin());
      };
      for (const auto& v : ja.at("read")) a.read[index(v.get<std::string>())] = true;
      for (const auto& v : ja.at("write")) a.write[index(v.get<std::string>())] = true;
      a.kc = partition_from_json(ja.at("KC"), f.size());
      a.kp = partition_from_json(ja.at("KP"), f.size());
      a.wc = partition_from_json(ja.at("WC"), f.size());
      a.wp = partition_from_json(ja.at("WP"), f.size());
      a.count = partition_from_json(ja.at("Kcount"), f.size());
      a.declassified = ja.value("declassified", false);
      a.endorsed = ja.value("endorsed", false);
      f.agents.push_back(std::move(a));
    }
  } catch (const json::exception& e) {
    throw Error(std::string("frame json: ") + e.what());
  }
  std::sort(f.agents.begin(), f.agents.end(),
            [](const AgentFrame& x, const AgentFrame& y) { return x.name < y.name; });
  return f;
}

bool isomorphic(const SecurityFrame& a, const SecurityFrame& b) {
  if (a.var_names != b.var_names || a.size() != b.size() || a.runs.size() != b.runs.size() ||
      a.agents.size() != b.agents.size() || a.signals_termination != b.signals_termination ||
      a.synchronous != b.synchronous)
    return false;
  for (std::size_t w = 0; w < a.size(); ++w) {
    const World &x = a.worlds[w], &y = b.worlds[w];
    if (x.run != y.run || x.depth != y.depth || x.limit != y.limit) return false;
    if (a.stores[w] != b.stores[w] || a.halted[w] != b.halted[w]) return false;
  }
  for (std::size_t r = 0; r < a.runs.size(); ++r)
    if (a.runs[r].status != b.runs[r].status || a.runs[r].size != b.runs[r].size) return false;
  for (std::size_t i = 0; i < a.agents.size(); ++i) {
    const auto &x = a.agents[i], &y = b.agents[i];
    if (x.name != y.name || x.read != y.read || x.write != y.write) return false;
    for (Rel r : {Rel::kKC, Rel::kKP, Rel::kWC, Rel::kWP, Rel::kCount})
      if (!x.get(r).same_as(y.get(r))) return false;
  }
  return true;
}

std::string export_dot(const SecurityFrame& f, std::size_t agent) {
  std::ostringstream os;
  const AgentFrame* a = agent < f.agents.size() ? &f.agents[agent] : nullptr;
  os << "digraph frame {\n";
  os << "  // store labels list values in the order:";
  for (const auto& v : f.var_names) os << " " << v;
  os << "\n  rankdir=LR;\n  node [shape=box, fontname=\"monospace\"];\n";
  auto node = [&](std::size_t w) {
    std::string label = f.store_label(w);
    if (f.worlds[w].limit) label += " (limit)";
    if (f.halted[w]) label += " ⇓";
    os << "    " << dot_id(w) << " [label=\"" << label << "\"];\n";
  };
  if (a) {
    for (std::size_t c = 0; c < a->kc.members.size(); ++c) {
      os << "  subgraph cluster_k" << c << " {\n    label=\"K^C_" << a->name << " class " << c
         << "\";\n    style=rounded;\n";
      for (auto w : a->kc.members[c]) node(w);
      os << "  }\n";
    }
  } else {
    for (std::size_t w = 0; w < f.size(); ++w) node(w);
  }
  for (const auto& r : f.runs)
    for (std::uint32_t i = 0; i + 1 < r.size; ++i)
      os << "  " << dot_id(r.first + i) << " -> " << dot_id(r.first + i + 1) << ";\n";
  if (a) {
    for (std::size_t w = 0; w < f.size(); ++w) {
      for (auto w2 : a->wc.members[a->wc.cls[w]])
        if (w2 > w)
          os << "  " << dot_id(w) << " -> " << dot_id(w2) << " [dir=none, color=red, label=\"W^C\"];\n";
      for (auto w2 : a->wp.members[a->wp.cls[w]])
        if (w2 > w && !a->wc.related(w, w2))
          os << "  " << dot_id(w) << " -> " << dot_id(w2)
             << " [dir=none, color=blue, style=dashed, label=\"W^P\"];\n";
    }
  }
  os << "}\n";
  return os.str();
}

}  // namespace kripkesec
