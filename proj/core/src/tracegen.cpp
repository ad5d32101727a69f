#include "kripkesec/tracegen.hpp"

#include <unordered_map>

namespace kripkesec {

const char* to_string(RunStatus s) {
  switch (s) {
    case RunStatus::kHalted: return "HALTED";
    case RunStatus::kStuck: return "STUCK";
    case RunStatus::kSilentDiverge: return "SILENT_DIVERGE";
    case RunStatus::kUnsupportedDiverge: return "UNSUPPORTED_DIVERGE";
    case RunStatus::kBudgetExceeded: return "BUDGET_EXCEEDED";
  }
  return "?";
}

std::vector<Store> enumerate_initial_stores(const Program& p, const SecurityContext& ctx,
                                            std::size_t bound) {
  const std::size_t n = p.var_count();
  std::size_t total = 1;
  for (std::size_t v = 0; v < n; ++v) {
    total *= ctx.domains[v].size();
    if (total > bound)
      throw BoundError("initial store product exceeds the bound of " + std::to_string(bound));
  }
  std::vector<Store> out;
  out.reserve(total);
  std::vector<std::size_t> digit(n, 0);
  for (std::size_t k = 0; k < total; ++k) {
    Store s(n);
    for (std::size_t v = 0; v < n; ++v) s[v] = ctx.domains[v][digit[v]];
    out.push_back(std::move(s));
    for (std::size_t v = n; v-- > 0;) {
      if (++digit[v] < ctx.domains[v].size()) break;
      digit[v] = 0;
    }
  }
  return out;
}

Run unfold_run(const Program& p, Store init, std::size_t budget) {
  Run run;
  run.initial = init;
  run.configs.push_back(initial_config(p, std::move(init)));
  std::unordered_map<Config, std::size_t, ConfigHash> seen;
  seen.emplace(run.configs.back(), 0);
  for (std::size_t steps = 0;; ++steps) {
    if (steps >= budget) {
      run.status = RunStatus::kBudgetExceeded;
      run.note = "step budget of " + std::to_string(budget) + " exhausted";
      return run;
    }
    StepResult r = step(p, run.configs.back());
    if (r.next.halted) {
      run.configs.push_back(std::move(r.next));
      run.status = r.stuck ? RunStatus::kStuck : RunStatus::kHalted;
      run.note = r.error;
      return run;
    }
    auto [it, fresh] = seen.emplace(r.next, run.configs.size());
    if (!fresh) {
      std::size_t entry = it->second;
      bool constant = true;
      for (std::size_t i = entry + 1; i < run.configs.size(); ++i)
        constant = constant && run.configs[i].store == run.configs[entry].store;
      if (!constant) {
        run.status = RunStatus::kUnsupportedDiverge;
        run.note = "cycle from step " + std::to_string(entry) + " changes the store";
        return run;
      }
      run.configs.resize(entry + 1);
      run.status = RunStatus::kSilentDiverge;
      run.cycle_entry = entry;
      return run;
    }
    run.configs.push_back(std::move(r.next));
  }
}

ObsSeq destutter(std::vector<ObsEntry> seq) {
  ObsSeq out;
  for (auto& e : seq)
    if (out.entries.empty() || !(out.entries.back() == e)) out.entries.push_back(std::move(e));
  return out;
}

ObsEntry project(const Store& s, const std::vector<bool>& mask) {
  ObsEntry e;
  for (std::size_t v = 0; v < s.size(); ++v)
    if (mask[v]) e.values.push_back(s[v]);
  return e;
}

std::vector<bool> read_mask(const SecurityContext& ctx, std::size_t agent) {
  return ctx.agents[agent].read;
}

std::vector<bool> fix_mask(const SecurityContext& ctx, std::size_t agent) {
  std::vector<bool> m = ctx.agents[agent].write;
  m.flip();
  return m;
}

namespace {

ObsSeq observe(const std::vector<bool>& mask, std::span<const Config> trace, bool tag, bool sync) {
  std::vector<ObsEntry> raw;
  raw.reserve(trace.size());
  for (const auto& c : trace) {
    raw.push_back(project(c.store, mask));
    raw.back().halted = tag && c.halted;
  }
  if (!sync) return destutter(std::move(raw));
  ObsSeq out;
  out.entries = std::move(raw);
  return out;
}

}  // namespace

ObsSeq view(const SecurityContext& ctx, std::size_t agent, std::span<const Config> trace) {
  return observe(ctx.agents[agent].read, trace, ctx.signals_termination, ctx.synchronous);
}

ObsSeq fix(const SecurityContext& ctx, std::size_t agent, std::span<const Config> trace) {
  return observe(fix_mask(ctx, agent), trace, ctx.signals_termination, false);
}

namespace {

void require_supported(const Run& run) {
  if (!run.supported())
    throw UnsupportedError(std::string("maximal trace of a run with status ") + to_string(run.status));
}

}  // namespace

ObsSeq maximal_view(const SecurityContext& ctx, std::size_t agent, const Run& run) {
  require_supported(run);
  ObsSeq v = view(ctx, agent, run.configs);
  if (ctx.synchronous && run.silent()) {
    // canonical form: the constant tail is implied by the tick flag
    while (v.entries.size() >= 2 && v.entries.back() == v.entries[v.entries.size() - 2])
      v.entries.pop_back();
    v.ticking = true;
  }
  return v;
}

ObsSeq maximal_fix(const SecurityContext& ctx, std::size_t agent, const Run& run) {
  require_supported(run);
  return fix(ctx, agent, run.configs);
}

std::string to_string(const ObsSeq& s) {
  std::string out = "(";
  for (std::size_t i = 0; i < s.entries.size(); ++i) {
    if (i) out += ",";
    out += "(";
    for (std::size_t k = 0; k < s.entries[i].values.size(); ++k) {
      if (k) out += ",";
      out += to_string(s.entries[i].values[k]);
    }
    out += ")";
    if (s.entries[i].halted) out += "⇓";
  }
  if (s.ticking) out += "...";
  return out + ")";
}

}  // namespace kripkesec
