#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "kripkesec/context.hpp"
#include "kripkesec/lang.hpp"

namespace kripkesec {

inline constexpr std::size_t kDefaultBudget = 10000;
inline constexpr std::size_t kDefaultStoreBound = 4096;

enum class RunStatus { kHalted, kStuck, kSilentDiverge, kUnsupportedDiverge, kBudgetExceeded };

const char* to_string(RunStatus s);

struct Run {
  Store initial;
  // For halting runs the last config is the halt. For silent lassos the
  // configs stop at the first config of the repeating cycle.
  std::vector<Config> configs;
  RunStatus status = RunStatus::kHalted;
  std::size_t cycle_entry = 0;  // silent lassos only
  std::string note;             // STUCK reason, divergence details

  bool halts() const { return status == RunStatus::kHalted || status == RunStatus::kStuck; }
  bool silent() const { return status == RunStatus::kSilentDiverge; }
  bool supported() const { return halts() || silent(); }
};

// Cartesian product of the context's domains, first variable most
// significant, values in domain order. Throws BoundError past `bound`.
std::vector<Store> enumerate_initial_stores(const Program& p, const SecurityContext& ctx,
                                            std::size_t bound = kDefaultStoreBound);

Run unfold_run(const Program& p, Store init, std::size_t budget = kDefaultBudget);

// One observation: the projected values plus, when termination is
// signalled, the halt flag of the observed config.
struct ObsEntry {
  std::vector<Value> values;
  bool halted = false;

  friend auto operator<=>(const ObsEntry&, const ObsEntry&) = default;
  friend bool operator==(const ObsEntry&, const ObsEntry&) = default;
};

struct ObsSeq {
  std::vector<ObsEntry> entries;
  // Synchronous observation of a diverging run: the last entry repeats
  // forever, one tick per step.
  bool ticking = false;
  friend bool operator==(const ObsSeq&, const ObsSeq&) = default;
};

ObsSeq destutter(std::vector<ObsEntry> seq);

ObsEntry project(const Store& s, const std::vector<bool>& mask);

std::vector<bool> read_mask(const SecurityContext& ctx, std::size_t agent);
std::vector<bool> fix_mask(const SecurityContext& ctx, std::size_t agent);

// view_A / fix_A of a nonempty trace prefix. Both carry the halt flag when
// termination is signalled: A cannot write it. Under a synchronous context
// views keep one entry per step (the agent sees the clock).
ObsSeq view(const SecurityContext& ctx, std::size_t agent, std::span<const Config> trace);
ObsSeq fix(const SecurityContext& ctx, std::size_t agent, std::span<const Config> trace);

// Views and fixes of whole maximal traces; finite because halted and
// silently diverging runs are eventually constant. Throws UnsupportedError
// for other runs.
ObsSeq maximal_view(const SecurityContext& ctx, std::size_t agent, const Run& run);
ObsSeq maximal_fix(const SecurityContext& ctx, std::size_t agent, const Run& run);

std::string to_string(const ObsSeq& s);

}  // namespace kripkesec
