#include "kripkesec/report.hpp"

#include <algorithm>
#include <cctype>

#include <json.hpp>

#include "kripkesec/errors.hpp"

namespace kripkesec {

using ojson = nlohmann::ordered_json;

namespace {

std::string pad(std::string s, std::size_t width) {
  // width counts code points so the unicode connectives line up
  std::size_t cps = 0;
  for (unsigned char c : s) cps += (c & 0xc0) != 0x80;
  if (cps < width) s.append(width - cps, ' ');
  return s;
}

std::string store_text(const std::vector<std::string>& names, const Store& s) {
  std::string out = "(";
  for (std::size_t v = 0; v < s.size() && v < names.size(); ++v) {
    if (v) out += ",";
    out += names[v] + "=" + to_string(s[v]);
  }
  return out + ")";
}

ojson value_json(const Value& v) {
  if (v.is_scalar()) return v.scalar;
  return v.items;
}

ojson store_json(const std::vector<std::string>& names, const Store& s) {
  ojson o = ojson::object();
  for (std::size_t v = 0; v < s.size() && v < names.size(); ++v) o[names[v]] = value_json(s[v]);
  return o;
}

ojson world_json(const SecurityFrame& f, std::size_t w) {
  ojson o = {{"run", f.worlds[w].run}, {"depth", f.worlds[w].depth}};
  if (f.worlds[w].limit) o["limit"] = true;
  return o;
}

ojson cuts_json(const SecurityFrame& f, const TSProperty& p) {
  ojson a = ojson::array();
  for (std::size_t r = 0; r < p.cuts.size(); ++r) {
    if (p.is_none(f, r)) a.push_back(nullptr);
    else a.push_back(p.cuts[r]);
  }
  return a;
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

}  // namespace

std::optional<Format> parse_format(std::string_view s) {
  if (s == "text") return Format::kText;
  if (s == "json") return Format::kJson;
  return std::nullopt;
}

std::string report_verdicts(const SecurityFrame& f, const std::vector<Verdict>& vs, Format fmt) {
  if (fmt == Format::kJson) {
    ojson arr = ojson::array();
    for (const auto& v : vs) {
      ojson ws = ojson::array();
      for (const auto& w : v.witnesses)
        ws.push_back({{"world", world_json(f, w.world)}, {"phi_rendered", w.rendered}, {"phi_cuts", cuts_json(f, w.phi)}});
      ojson o = {{"property", std::string(to_string(v.property))},
                 {"agent", v.agent},
                 {"status", to_string(v.status)},
                 {"witnesses", ws},
                 {"mode", v.mode.to_string()},
                 {"warnings", v.warnings}};
      if (!v.error.empty()) o["error"] = v.error;
      arr.push_back(std::move(o));
    }
    return dump(arr);
  }
  std::string out;
  for (const auto& v : vs) {
    out += pad(std::string(to_string(v.property)), 22) + pad(v.agent, 6) + to_string(v.status) + "\n";
    for (const auto& w : v.witnesses) {
      out += "  witness at " + f.world_label(w.world) + " " + store_text(f.var_names, f.stores[w.world]) +
             ": " + w.rendered + "\n";
    }
    for (const auto& m : v.warnings) out += "  warning: " + m + "\n";
    if (!v.error.empty()) out += "  error: " + v.error + "\n";
  }
  return out;
}

std::string report_trace(const Program& p, const std::vector<TraceVerdict>& vs, Format fmt) {
  std::vector<std::string> names;
  for (const auto& v : p.syms.vars) names.push_back(v.name);
  if (fmt == Format::kJson) {
    ojson arr = ojson::array();
    for (const auto& v : vs) {
      ojson ws = ojson::array();
      for (const auto& w : v.witnesses) {
        ojson stores = ojson::array();
        for (const auto& s : w.stores) stores.push_back(store_json(names, s));
        ws.push_back({{"agent", w.agent}, {"stores", stores}, {"observations", w.observations}, {"detail", w.detail}});
      }
      ojson o = {{"definition", std::string(to_string(v.id))}, {"status", to_string(v.status)}, {"witnesses", ws}};
      if (!v.error.empty()) o["error"] = v.error;
      arr.push_back(std::move(o));
    }
    return dump(arr);
  }
  std::string out;
  for (const auto& v : vs) {
    out += pad(std::string(to_string(v.id)), 22) + to_string(v.status) + "\n";
    for (const auto& w : v.witnesses) {
      out += "  agent " + w.agent + ": " + w.detail + "\n";
      for (std::size_t i = 0; i < w.stores.size(); ++i)
        out += "    " + store_text(names, w.stores[i]) + " -> " + w.observations[i] + "\n";
    }
    if (!v.error.empty()) out += "  error: " + v.error + "\n";
  }
  return out;
}

std::string report_diff(const std::vector<DiffEntry>& entries, Format fmt) {
  if (fmt == Format::kJson) {
    ojson arr = ojson::array();
    for (const auto& e : entries) {
      ojson ps = ojson::array();
      for (const auto& d : e.results) {
        ojson o = {{"pairing", pairing_name(d.pairing)}, {"agreement", to_string(d.agreement)}};
        if (d.agreement != Agreement::kSkipped || !d.trace.error.empty()) {
          o["trace"] = to_string(d.trace_status);
          o["modal"] = to_string(d.modal_status);
        }
        o["notes"] = d.notes;
        ps.push_back(std::move(o));
      }
      arr.push_back({{"name", e.name}, {"pairings", ps}});
    }
    return dump(arr);
  }
  std::string out;
  std::array<std::size_t, 3> tally{};
  for (const auto& e : entries) {
    out += e.name + "\n";
    for (const auto& d : e.results) {
      ++tally[static_cast<std::size_t>(d.agreement)];
      out += "  " + pad(pairing_name(d.pairing), 34) + pad(to_string(d.agreement), 10);
      if (d.agreement != Agreement::kSkipped)
        out += std::string("trace ") + to_string(d.trace_status) + ", modal " + to_string(d.modal_status);
      out += "\n";
      for (const auto& n : d.notes) out += "    " + n + "\n";
    }
  }
  out += "# " + std::to_string(entries.size()) + " programs: " + std::to_string(tally[0]) + " agree, " +
         std::to_string(tally[1]) + " disagree, " + std::to_string(tally[2]) + " skipped\n";
  return out;
}

std::string report_audit(const AuditReport& rep, Format fmt) {
  auto arrow_name = [](const Arrow& a) {
    return std::string(to_string(a.stronger)) + " => " + std::string(to_string(a.weaker));
  };
  if (fmt == Format::kJson) {
    ojson arrows = ojson::array(), seps = ojson::array();
    for (const auto& a : rep.arrows)
      arrows.push_back({{"arrow", arrow_name(a.arrow)},
                        {"frames", a.frames},
                        {"vacuous", a.vacuous},
                        {"counterexamples", a.counterexamples}});
    for (const auto& s : rep.separations)
      seps.push_back({{"name", s.separation.name},
                      {"program", s.separation.source},
                      {"satisfied", {{"property", std::string(to_string(s.separation.satisfied))},
                                     {"status", to_string(s.satisfied_status)}}},
                      {"violated", {{"property", std::string(to_string(s.separation.violated))},
                                    {"status", to_string(s.violated_status)}}},
                      {"ok", s.ok}});
    return dump({{"arrows", arrows}, {"separations", seps}, {"skipped", rep.skipped}, {"ok", rep.ok()}});
  }
  std::string out = "arrows\n";
  for (const auto& a : rep.arrows) {
    out += "  " + pad(arrow_name(a.arrow), 30) + (a.counterexamples.empty() ? "holds" : "FAILS") + "  (" +
           std::to_string(a.frames) + " frames, " + std::to_string(a.vacuous) + " vacuous)\n";
    for (const auto& c : a.counterexamples) out += "    counterexample: " + c + "\n";
  }
  out += "separations\n";
  for (const auto& s : rep.separations) {
    out += "  " + pad(s.separation.name, 26) + pad(std::string(to_string(s.separation.satisfied)) + " " +
                                                     to_string(s.satisfied_status),
                                                 34) +
           pad(std::string(to_string(s.separation.violated)) + " " + to_string(s.violated_status), 34) +
           (s.ok ? "ok" : "NOT SEPARATED") + "\n";
  }
  for (const auto& s : rep.skipped) out += "skipped: " + s + "\n";
  return out;
}

const std::array<PropertyId, 4>& figure1_columns() {
  static const std::array<PropertyId, 4> cols = {PropertyId::kRd, PropertyId::kRdVarA, PropertyId::kRdVarB,
                                                 PropertyId::kTiRd};
  return cols;
}

const std::vector<std::pair<std::string, std::string>>& figure1_programs() {
  static const std::vector<std::pair<std::string, std::string>> rows = {
      {"(i)", "p := s"},
      {"(ii)", "if u = 1 then p := s"},
      {"(iii)", "(if u = 1 then p := s); loop"},
      {"(iv)", "if u = 1 then (p := s; if s = 1 then loop)"},
      {"(v)", "(if u = 1 then p := s); if s and (u xor h) then loop"},
      {"(vi)", "(if u = 1 then p := s); if s and h then loop"},
  };
  return rows;
}

std::string figure1_declarations() { return "var u, s, h in {0,1}; var p in {0}\n"; }

Policy figure1_policy(bool synchronous) {
  Policy p;
  p.agents = {"A"};
  p.read["A"] = {"p", "u"};
  p.write["A"] = {"u"};
  p.signals_termination = true;
  p.synchronous = synchronous;
  return p;
}

Figure1 figure1(bool synchronous, const CheckOptions& opt) {
  Figure1 fig;
  fig.synchronous = synchronous;
  Policy pol = figure1_policy(synchronous);
  for (const auto& [label, src] : figure1_programs()) {
    Figure1Row row;
    row.label = label;
    row.source = src;
    Program p = parse_program(figure1_declarations() + src + "\n");
    row.frame = build_frame(p, bind_policy(pol, p));
    for (std::size_t c = 0; c < 4; ++c) row.cells[c] = check(row.frame, figure1_columns()[c], {"A"}, opt).at(0);
    fig.rows.push_back(std::move(row));
  }
  return fig;
}

std::string figure1_cell(const Verdict& v) {
  switch (v.status) {
    case Status::kSatisfied: return "--";
    case Status::kUnsupported: return "?";
    case Status::kViolated: return v.witnesses.empty() ? "violated" : v.witnesses.front().rendered;
  }
  return "?";
}

std::string report_figure1(const Figure1& fig, Format fmt) {
  const char* context = "R(A) = {p,u}, W(A) = {u}; u, s, h in {0,1}, p in {0}";
  const char* added = "W(A) within R(A) and termination signalling (assumptions of the TI_RD equivalence)";
  const char* timing = fig.synchronous ? "synchronous (A observes a step clock)" : "asynchronous (destuttered views)";
  if (fmt == Format::kJson) {
    ojson rows = ojson::array();
    for (const auto& r : fig.rows) {
      ojson cells = ojson::object();
      for (std::size_t c = 0; c < 4; ++c) {
        const Verdict& v = r.cells[c];
        ojson cell = {{"status", to_string(v.status)}, {"cell", figure1_cell(v)}};
        if (!v.witnesses.empty()) cell["world"] = world_json(r.frame, v.witnesses.front().world);
        cells[std::string(to_string(figure1_columns()[c]))] = std::move(cell);
      }
      rows.push_back({{"row", r.label}, {"program", r.source}, {"cells", cells}});
    }
    return dump({{"context", context}, {"added_assumptions", added}, {"timing", timing}, {"rows", rows}});
  }
  std::string out;
  out += std::string("# context: ") + context + "\n";
  out += std::string("# added: ") + added + "\n";
  out += std::string("# timing: ") + timing + "\n";
  std::string head = pad("row", 7) + pad("program", 58);
  for (auto c : figure1_columns()) head += pad(std::string(to_string(c)), 18);
  while (head.back() == ' ') head.pop_back();
  out += head + "\n";
  std::string where;
  for (const auto& r : fig.rows) {
    std::string line = pad(r.label, 7) + pad(r.source, 58);
    for (std::size_t c = 0; c < 4; ++c) {
      line += pad(figure1_cell(r.cells[c]), 18);
      const Verdict& v = r.cells[c];
      if (!v.witnesses.empty()) {
        std::size_t w = v.witnesses.front().world;
        where += "  " + pad(r.label + " " + std::string(to_string(figure1_columns()[c])), 16) + "at " +
                 r.frame.world_label(w) + " " + store_text(r.frame.var_names, r.frame.stores[w]) + "\n";
      }
    }
    while (!line.empty() && line.back() == ' ') line.pop_back();
    out += line + "\n";
  }
  if (!where.empty()) out += "witness worlds\n" + where;
  return out;
}

}  // namespace kripkesec
