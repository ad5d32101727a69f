#include "kripkesec/context.hpp"

#include <algorithm>
#include <set>

#include <json.hpp>

namespace kripkesec {

namespace {

using nlohmann::json;

std::vector<std::string> string_list(const json& j, const std::string& what) {
  if (!j.is_array()) throw Error("policy: '" + what + "' must be a list");
  std::vector<std::string> out;
  for (const auto& x : j) {
    if (!x.is_string()) throw Error("policy: '" + what + "' entries must be strings");
    out.push_back(x.get<std::string>());
  }
  return out;
}

Value json_value(const json& j) {
  if (j.is_boolean()) return Value::of(j.get<bool>() ? 1 : 0);
  if (j.is_number_integer()) return Value::of(j.get<Int>());
  if (j.is_array()) {
    std::vector<Int> xs;
    for (const auto& x : j) {
      if (!x.is_number_integer()) throw Error("policy: list values must hold integers");
      xs.push_back(x.get<Int>());
    }
    return Value::list(std::move(xs));
  }
  throw Error("policy: unsupported domain value " + j.dump());
}

json value_json(const Value& v) {
  if (v.is_scalar()) return v.scalar;
  return v.items;
}

std::vector<bool> var_mask(const std::vector<std::string>& names, const Program& p,
                           const std::string& where, std::vector<std::string>& unused) {
  std::vector<bool> m(p.var_count(), false);
  for (const auto& n : names) {
    auto id = p.syms.find(n);
    if (!id) {
      unused.push_back(where + ":" + n);
      continue;
    }
    m[*id] = true;
  }
  return m;
}

}  // namespace

Policy parse_policy(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(std::string("policy: ") + e.what());
  }
  if (!j.is_object()) throw Error("policy: expected a JSON object");
  static const std::set<std::string> known = {"agents", "read", "write", "domains",
                                              "flags", "declass", "endorse"};
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!known.count(it.key())) throw Error("policy: unknown key '" + it.key() + "'");

  Policy p;
  if (j.contains("agents")) p.agents = string_list(j["agents"], "agents");
  for (const char* key : {"read", "write"}) {
    if (!j.contains(key)) continue;
    auto& dst = std::string(key) == "read" ? p.read : p.write;
    for (auto it = j[key].begin(); it != j[key].end(); ++it)
      dst[it.key()] = string_list(it.value(), std::string(key) + "." + it.key());
  }
  if (j.contains("domains")) {
    for (auto it = j["domains"].begin(); it != j["domains"].end(); ++it) {
      std::vector<Value> dom;
      if (it.value().is_string()) {
        // "lo..hi"
        std::string s = it.value().get<std::string>();
        auto dots = s.find("..");
        if (dots == std::string::npos) throw Error("policy: bad range '" + s + "'");
        Int lo = std::stoll(s.substr(0, dots)), hi = std::stoll(s.substr(dots + 2));
        if (hi < lo || hi - lo > 4096) throw Error("policy: bad range '" + s + "'");
        for (Int x = lo; x <= hi; ++x) dom.push_back(Value::of(x));
      } else {
        for (const auto& x : it.value()) dom.push_back(json_value(x));
      }
      if (dom.empty()) throw Error("policy: empty domain for '" + it.key() + "'");
      p.domains[it.key()] = std::move(dom);
    }
  }
  if (j.contains("flags")) {
    const auto& f = j["flags"];
    p.signals_termination = f.value("signals_termination", false);
    p.synchronous = f.value("synchronous", false);
  }
  if (j.contains("declass")) {
    for (auto it = j["declass"].begin(); it != j["declass"].end(); ++it)
      p.declass[it.key()] = it.value().get<std::string>();
  }
  if (j.contains("endorse")) {
    const auto& e = j["endorse"];
    std::string mode = e.value("mode", "none");
    if (mode == "none") {
      p.endorse_mode = EndorseMode::kNone;
    } else if (mode == "per_variable") {
      p.endorse_mode = EndorseMode::kPerVariable;
    } else if (mode == "event") {
      p.endorse_mode = EndorseMode::kEvent;
    } else {
      throw Error("policy: unknown endorse mode '" + mode + "'");
    }
    if (e.contains("variables"))
      for (auto it = e["variables"].begin(); it != e["variables"].end(); ++it)
        p.endorse_vars[it.key()] = string_list(it.value(), "endorse.variables");
  }
  if (p.agents.empty()) {
    std::set<std::string> names;
    for (const auto& [a, _] : p.read) names.insert(a);
    for (const auto& [a, _] : p.write) names.insert(a);
    p.agents.assign(names.begin(), names.end());
  }
  return p;
}

std::string policy_to_json(const Policy& p) {
  json j = json::object();
  j["agents"] = p.agents;
  j["read"] = json::object();
  j["write"] = json::object();
  for (const auto& [a, xs] : p.read) j["read"][a] = xs;
  for (const auto& [a, xs] : p.write) j["write"][a] = xs;
  json doms = json::object();
  for (const auto& [v, dom] : p.domains) {
    json arr = json::array();
    for (const auto& x : dom) arr.push_back(value_json(x));
    doms[v] = arr;
  }
  j["domains"] = doms;
  j["flags"] = {{"signals_termination", p.signals_termination}, {"synchronous", p.synchronous}};
  if (!p.declass.empty()) j["declass"] = p.declass;
  if (p.endorse_mode != EndorseMode::kNone) {
    j["endorse"]["mode"] = p.endorse_mode == EndorseMode::kEvent ? "event" : "per_variable";
    if (!p.endorse_vars.empty()) j["endorse"]["variables"] = p.endorse_vars;
  }
  return j.dump(2);
}

std::size_t SecurityContext::agent_index(std::string_view name) const {
  for (std::size_t i = 0; i < agents.size(); ++i)
    if (agents[i].name == name) return i;
  throw Error("unknown agent '" + std::string(name) + "'");
}

bool SecurityContext::write_within_read(std::size_t a) const {
  const auto& ag = agents[a];
  for (std::size_t v = 0; v < ag.write.size(); ++v)
    if (ag.write[v] && !ag.read[v]) return false;
  return true;
}

SecurityContext bind_policy(const Policy& policy, const Program& program) {
  SecurityContext ctx;
  ctx.signals_termination = policy.signals_termination;
  ctx.synchronous = policy.synchronous;
  ctx.endorse_mode = policy.endorse_mode;

  for (const auto& v : program.syms.vars) ctx.domains.push_back(v.domain);
  for (const auto& [name, dom] : policy.domains) {
    auto id = program.syms.find(name);
    if (!id) continue;
    const auto& var = program.syms.vars[*id];
    for (const auto& x : dom) {
      bool ok = var.type == VarType::kScalar ? x.is_scalar() : x.kind == Value::Kind::kList;
      if (var.type == VarType::kTagSet || !ok)
        throw Error("policy: domain for '" + name + "' has the wrong type");
    }
    ctx.domains[*id] = dom;
  }

  std::set<std::string> declared(policy.agents.begin(), policy.agents.end());
  auto check_agent = [&](const std::string& a, const char* where) {
    if (!declared.count(a)) throw Error(std::string("policy: ") + where + " names unknown agent '" + a + "'");
  };
  for (const auto& [a, _] : policy.read) check_agent(a, "read");
  for (const auto& [a, _] : policy.write) check_agent(a, "write");
  for (const auto& [a, _] : policy.declass) check_agent(a, "declass");
  for (const auto& [a, _] : policy.endorse_vars) check_agent(a, "endorse");

  for (const auto& name : declared) {
    AgentContext ag;
    ag.name = name;
    auto r = policy.read.find(name);
    auto w = policy.write.find(name);
    ag.read = var_mask(r == policy.read.end() ? std::vector<std::string>{} : r->second, program,
                       "read." + name, ctx.unused_names);
    ag.write = var_mask(w == policy.write.end() ? std::vector<std::string>{} : w->second, program,
                        "write." + name, ctx.unused_names);
    auto ev = policy.endorse_vars.find(name);
    ag.endorsable = var_mask(ev == policy.endorse_vars.end() ? std::vector<std::string>{} : ev->second,
                             program, "endorse." + name, ctx.unused_names);
    auto d = policy.declass.find(name);
    if (d != policy.declass.end()) {
      Predicate pr;
      pr.text = d->second;
      pr.ast = parse_expression(d->second, program.syms, &pr.root);
      ag.declass = std::move(pr);
    }
    ctx.agents.push_back(std::move(ag));
  }
  return ctx;
}

}  // namespace kripkesec
