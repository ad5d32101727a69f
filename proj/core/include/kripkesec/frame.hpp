#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/context.hpp"
#include "kripkesec/lang.hpp"
#include "kripkesec/tracegen.hpp"
#include "kripkesec/world_set.hpp"

namespace kripkesec {

struct World {
  std::uint32_t run = 0;
  std::uint32_t depth = 0;  // for LIMIT worlds: the first depth it stands for
  bool limit = false;
};

// An equivalence relation on worlds given by class ids.
struct Partition {
  std::vector<std::uint32_t> cls;                  // per world
  std::vector<std::vector<std::uint32_t>> members; // per class, ascending

  static Partition from_keys(const std::vector<std::uint64_t>& keys);
  static Partition identity(std::size_t n);
  bool related(std::size_t a, std::size_t b) const { return cls[a] == cls[b]; }
  std::size_t size() const { return cls.size(); }
  // true iff both relate exactly the same pairs
  bool same_as(const Partition& o) const;
  Partition intersect(const Partition& o) const;
};

enum class Rel : std::uint8_t { kT, kKC, kKP, kWC, kWP, kCount };

const char* rel_name(Rel r);

struct AgentFrame {
  std::string name;
  std::vector<bool> read;
  std::vector<bool> write;
  Partition kc, kp, wc, wp, count;
  bool declassified = false;  // kp refined away from kc
  bool endorsed = false;      // wp refined by endorsement

  const Partition& get(Rel r) const;
};

struct RunInfo {
  std::uint32_t first = 0;  // index of the depth-0 world
  std::uint32_t size = 0;   // number of worlds, LIMIT included
  RunStatus status = RunStatus::kHalted;
  std::string note;

  bool halts() const { return status == RunStatus::kHalted || status == RunStatus::kStuck; }
  bool diverges() const { return status == RunStatus::kSilentDiverge; }
};

// Immutable once built.
class SecurityFrame {
 public:
  std::vector<std::string> var_names;
  std::vector<World> worlds;
  std::vector<Store> stores;      // per world
  std::vector<bool> halted;       // per world: ⇓
  std::vector<RunInfo> runs;
  std::vector<AgentFrame> agents; // lexicographic by name
  bool signals_termination = false;
  bool synchronous = false;

  std::size_t size() const { return worlds.size(); }
  std::size_t agent_index(std::string_view name) const;
  const Partition& relation(Rel r, std::size_t agent) const { return agents[agent].get(r); }
  const Store& initial_store(std::size_t world) const { return stores[runs[worlds[world].run].first]; }
  std::size_t world_index(std::uint32_t run, std::uint32_t depth, bool limit) const;
  bool has_declassification() const;
  std::string world_label(std::size_t w) const;   // "run 3 depth 1" style
  std::string store_label(std::size_t w) const;   // values concatenated, e.g. "010"

  // T-successors: worlds of the same run at equal or greater index
  WorldSet run_set(std::size_t run) const;
};

struct BuildOptions {
  std::size_t budget = kDefaultBudget;
  std::size_t store_bound = kDefaultStoreBound;
};

// Throws UnsupportedError naming the offending run when some run is neither
// halting nor a silent lasso.
SecurityFrame build_frame(const Program& p, const SecurityContext& ctx, const BuildOptions& opt = {});

// The unrefined frame; refinements are applied separately.
SecurityFrame build_base_frame(const Program& p, const SecurityContext& ctx, const BuildOptions& opt = {});

// K^P_A ∩ ψ-agreement, ψ evaluated on the initial store of each world's run.
void refine_declassification(SecurityFrame& f, std::size_t agent, const Predicate& psi);

// W^P_A over fixes where endorsed variables are blanked before destuttering.
// PER_VARIABLE blanks the listed variables everywhere; EVENT blanks x at an
// entry when (A,x) is in E there.
void endorsement_perm(SecurityFrame& f, std::size_t agent, EndorseMode mode,
                      const std::vector<bool>& endorsable, VarId endorsed_var,
                      const SymbolTable* syms);

// Equal view length (and equal halt flag when termination is signalled).
Partition counting_relation(const SecurityFrame& f, std::size_t agent);

struct FrameReport {
  bool commutation = true;
  bool perfect_recall = true;
  bool characteristic = true;
  bool signals_termination = true;
  std::vector<std::string> problems;

  bool ok(bool require_signals) const {
    return commutation && perfect_recall && characteristic && (!require_signals || signals_termination);
  }
};

FrameReport check_frame_properties(const SecurityFrame& f);

std::string export_dot(const SecurityFrame& f, std::size_t agent = 0);
std::string export_json(const SecurityFrame& f);
SecurityFrame import_json(std::string_view text);

// Same worlds, stores and relations.
bool isomorphic(const SecurityFrame& a, const SecurityFrame& b);

}  // namespace kripkesec
