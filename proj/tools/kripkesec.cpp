#include <algorithm>
#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kripkesec/corpus.hpp"
#include "kripkesec/report.hpp"

using namespace kripkesec;

namespace {

constexpr int kExitClean = 0;
constexpr int kExitFound = 1;
constexpr int kExitUsage = 2;

struct Common {
  std::string mode = "runset:2";
  std::size_t budget = kDefaultBudget;
  std::string format = "text";
  std::size_t witnesses = 1;
};

void add_common(CLI::App* sub, Common& c, bool with_witnesses = true) {
  sub->add_option("--mode", c.mode, "TS-set search: exhaustive | runset:K")->capture_default_str();
  sub->add_option("--budget", c.budget, "Step budget per run (default from KRIPKESEC_BUDGET)")->capture_default_str();
  sub->add_option("--format", c.format, "Output format: text | json")->capture_default_str();
  if (with_witnesses)
    sub->add_option("--witnesses", c.witnesses, "Witness worlds to report per verdict")->capture_default_str();
}

Format format_of(const Common& c) {
  auto f = parse_format(c.format);
  if (!f) throw CLI::ValidationError("--format", "expected text or json");
  return *f;
}

CheckOptions check_options(const Common& c) {
  CheckOptions o;
  o.mode = SearchMode::parse(c.mode);
  o.max_witnesses = c.witnesses;
  return o;
}

BuildOptions build_options(const Common& c) {
  BuildOptions b;
  b.budget = c.budget;
  return b;
}

struct Loaded {
  Program program;
  SecurityContext ctx;
};

Loaded load(const std::string& prog_path, const std::string& policy_path) {
  Program p = parse_program(read_file(prog_path));
  SecurityContext ctx = bind_policy(parse_policy(read_file(policy_path)), p);
  return {std::move(p), std::move(ctx)};
}

std::vector<PropertyId> property_list(const std::vector<std::string>& names) {
  std::vector<PropertyId> out;
  if (names.empty()) return {all_properties().begin(), all_properties().end()};
  for (const auto& n : names) {
    auto id = parse_property_id(n);
    if (!id) throw CLI::ValidationError("--prop", "unknown property '" + n + "'");
    out.push_back(*id);
  }
  return out;
}

int status_exit(Status s) {
  switch (s) {
    case Status::kSatisfied: return kExitClean;
    case Status::kViolated: return kExitFound;
    case Status::kUnsupported: return kExitUsage;
  }
  return kExitUsage;
}

int worst(int a, int b) {
  // UNSUPPORTED outranks a finding
  if (a == kExitUsage || b == kExitUsage) return kExitUsage;
  return std::max(a, b);
}

int diff_exit(const std::vector<DiffEntry>& entries) {
  int code = kExitClean;
  for (const auto& e : entries)
    for (const auto& d : e.results)
      if (d.agreement == Agreement::kDisagree) code = kExitFound;
  return code;
}

std::vector<CorpusMember> load_corpus(const std::string& manifest, std::vector<std::string>& errors) {
  std::vector<CorpusMember> out;
  for (const auto& e : load_manifest(manifest)) {
    try {
      out.push_back(realize(e));
    } catch (const Error& ex) {
      errors.push_back(e.name + ": " + ex.what());
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Kripke-frame security property checker for a small while language"};
  app.require_subcommand(1);
  app.footer(
      "Exit status: 0 all satisfied / agreeing, 1 violation or disagreement found, "
      "2 usage error or UNSUPPORTED input.\nEnvironment: KRIPKESEC_BUDGET sets the default step budget.");

  Common common;
  if (const char* env = std::getenv("KRIPKESEC_BUDGET")) {
    try {
      common.budget = std::stoul(env);
    } catch (const std::exception&) {
      std::cerr << "error: KRIPKESEC_BUDGET is not a number\n";
      return kExitUsage;
    }
  }

  std::string prog_path, policy_path, manifest, formula, agent;
  std::vector<std::string> props, defs;
  bool dot = false, json_out = false, sync = false, strict = false, props_check = false;
  std::uint64_t seed = 0;
  std::size_t count = 200, vars = 3, stmts = 6;

  auto* check_cmd = app.add_subcommand("check", "Check modal security properties of a program");
  check_cmd->add_option("program", prog_path, "Program file")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("policy", policy_path, "Policy file (JSON)")->required()->check(CLI::ExistingFile);
  check_cmd->add_option("--prop", props, "Property ids (default: all)")->delimiter(',')->allow_extra_args(false);
  check_cmd->add_option("--agent", agent, "Restrict to one agent");
  add_common(check_cmd, common);

  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a closed formula and print its extension");
  eval_cmd->add_option("program", prog_path, "Program file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("policy", policy_path, "Policy file (JSON)")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("formula", formula, "Formula, e.g. 'box(KP[A]) eventually p@1=0'")->required();
  add_common(eval_cmd, common, false);

  auto* oracle = app.add_subcommand("oracle", "Check the trace-based definitions directly");
  oracle->add_option("program", prog_path, "Program file")->required()->check(CLI::ExistingFile);
  oracle->add_option("policy", policy_path, "Policy file (JSON)")->required()->check(CLI::ExistingFile);
  oracle->add_option("--def", defs, "Definitions (default: all)")->delimiter(',')->allow_extra_args(false);
  oracle->add_flag("--strict", strict, "Drop the divergence escape of the TI definitions");
  add_common(oracle, common, false);

  auto* diff = app.add_subcommand("diff", "Compare modal and trace verdicts on the equivalence pairings");
  diff->add_option("program", prog_path, "Program file")->check(CLI::ExistingFile);
  diff->add_option("policy", policy_path, "Policy file (JSON)")->check(CLI::ExistingFile);
  diff->add_option("--manifest", manifest, "Corpus manifest instead of a single program")->check(CLI::ExistingFile);
  add_common(diff, common, false);

  auto* fig = app.add_subcommand("figure1", "Robust declassification matrix over the six built-in programs");
  fig->add_flag("--sync", sync, "Let A observe a step clock");
  add_common(fig, common, false);

  auto* frame = app.add_subcommand("frame", "Build and export the Kripke frame");
  frame->add_option("program", prog_path, "Program file")->required()->check(CLI::ExistingFile);
  frame->add_option("policy", policy_path, "Policy file (JSON)")->required()->check(CLI::ExistingFile);
  frame->add_flag("--dot", dot, "Graphviz output (default)");
  frame->add_flag("--json", json_out, "JSON output");
  frame->add_flag("--check", props_check, "Check commutation, perfect recall, characteristic formulae");
  frame->add_option("--agent", agent, "Agent whose relations are drawn");
  add_common(frame, common, false);

  auto* audit = app.add_subcommand("audit", "Verify the implication diagrams over a corpus");
  audit->add_option("--manifest", manifest, "Corpus manifest")->required()->check(CLI::ExistingFile);
  add_common(audit, common, false);

  auto* fuzz = app.add_subcommand("fuzz", "Differential over generated programs");
  fuzz->add_option("--seed", seed, "First seed")->capture_default_str();
  fuzz->add_option("--count", count, "Number of programs")->capture_default_str();
  fuzz->add_option("--vars", vars, "Boolean variables per program")->capture_default_str();
  fuzz->add_option("--stmts", stmts, "Statement bound")->capture_default_str();
  add_common(fuzz, common, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    Format fmt = format_of(common);
    CheckOptions copt = check_options(common);
    BuildOptions bopt = build_options(common);

    if (*check_cmd) {
      Loaded in = load(prog_path, policy_path);
      SecurityFrame f = build_frame(in.program, in.ctx, bopt);
      std::vector<Verdict> all;
      for (PropertyId id : property_list(props)) {
        auto vs = check(f, id, agent.empty() ? std::vector<std::string>{} : std::vector<std::string>{agent}, copt);
        auto assumptions = audit_theorem_assumptions(f, in.ctx, id);
        for (auto& v : vs) v.warnings.insert(v.warnings.end(), assumptions.begin(), assumptions.end());
        all.insert(all.end(), vs.begin(), vs.end());
      }
      std::cout << report_verdicts(f, all, fmt);
      int code = kExitClean;
      for (const auto& v : all) code = worst(code, status_exit(v.status));
      return code;
    }

    if (*eval_cmd) {
      Loaded in = load(prog_path, policy_path);
      SecurityFrame f = build_frame(in.program, in.ctx, bopt);
      Formula phi = parse_formula(formula);
      WorldSet ext = extension(f, phi);
      if (fmt == Format::kJson) {
        std::cout << "{\"formula\": \"" << to_string(phi) << "\", \"worlds\": [";
        bool first = true;
        for (std::size_t w = 0; w < f.size(); ++w)
          if (ext.test(w)) {
            std::cout << (first ? "" : ", ") << "{\"run\": " << f.worlds[w].run << ", \"depth\": " << f.worlds[w].depth
                      << "}";
            first = false;
          }
        std::cout << "]}\n";
      } else {
        std::cout << to_string(phi) << "\n";
        for (std::size_t w = 0; w < f.size(); ++w)
          if (ext.test(w)) std::cout << "  " << f.world_label(w) << " [" << f.store_label(w) << "]\n";
      }
      return ext.test(0) ? kExitClean : kExitFound;
    }

    if (*oracle) {
      Loaded in = load(prog_path, policy_path);
      OracleOptions oo;
      oo.budget = common.budget;
      oo.strict_termination = strict;
      std::vector<TraceVerdict> vs;
      std::vector<TraceId> ids;
      if (defs.empty()) ids.assign(all_trace_ids().begin(), all_trace_ids().end());
      for (const auto& d : defs) {
        auto id = parse_trace_id(d);
        if (!id) throw CLI::ValidationError("--def", "unknown definition '" + d + "'");
        ids.push_back(*id);
      }
      int code = kExitClean;
      for (TraceId id : ids) {
        vs.push_back(trace_check(in.program, in.ctx, id, oo));
        code = worst(code, status_exit(vs.back().status));
      }
      std::cout << report_trace(in.program, vs, fmt);
      return code;
    }

    if (*diff) {
      DiffOptions dopt{copt.mode, bopt};
      std::vector<DiffEntry> entries;
      if (!manifest.empty()) {
        std::vector<std::string> errors;
        for (const auto& m : load_corpus(manifest, errors))
          entries.push_back({m.name, differential(m.program, m.ctx, {}, dopt)});
        for (const auto& e : errors) std::cerr << "skipped " << e << "\n";
      } else {
        if (prog_path.empty() || policy_path.empty())
          throw CLI::ValidationError("diff", "needs a program and a policy, or --manifest");
        Loaded in = load(prog_path, policy_path);
        entries.push_back({prog_path, differential(in.program, in.ctx, {}, dopt)});
      }
      std::cout << report_diff(entries, fmt);
      return diff_exit(entries);
    }

    if (*fig) {
      Figure1 result = figure1(sync, copt);
      std::cout << report_figure1(result, fmt);
      return kExitClean;
    }

    if (*frame) {
      Loaded in = load(prog_path, policy_path);
      SecurityFrame f = build_frame(in.program, in.ctx, bopt);
      if (props_check) {
        FrameReport r = check_frame_properties(f);
        std::cout << "commutation " << (r.commutation ? "ok" : "FAILS") << "\n"
                  << "perfect recall " << (r.perfect_recall ? "ok" : "FAILS") << "\n"
                  << "characteristic formulae " << (r.characteristic ? "ok" : "FAILS") << "\n"
                  << "signals termination " << (r.signals_termination ? "yes" : "no") << "\n";
        for (const auto& p : r.problems) std::cout << "  " << p << "\n";
        return r.ok(in.ctx.signals_termination) ? kExitClean : kExitFound;
      }
      if (json_out) {
        std::cout << export_json(f);
      } else {
        std::size_t a = agent.empty() ? 0 : f.agent_index(agent);
        std::cout << export_dot(f, a);
      }
      return kExitClean;
    }

    if (*audit) {
      std::vector<std::string> errors;
      auto corpus = load_corpus(manifest, errors);
      AuditReport rep = implication_audit(corpus, copt, bopt);
      rep.skipped.insert(rep.skipped.end(), errors.begin(), errors.end());
      std::cout << report_audit(rep, fmt);
      return rep.ok() ? kExitClean : kExitFound;
    }

    if (*fuzz) {
      DiffOptions dopt{copt.mode, bopt};
      GenBounds gb{vars, stmts, true};
      std::vector<DiffEntry> entries;
      for (std::size_t i = 0; i < count; ++i) {
        Generated g = gen_program(seed + i, gb);
        entries.push_back({"seed " + std::to_string(seed + i), differential(g.program, g.ctx, {}, dopt)});
      }
      std::cout << report_diff(entries, fmt);
      return diff_exit(entries);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
