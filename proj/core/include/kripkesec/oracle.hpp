#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/context.hpp"
#include "kripkesec/frame.hpp"
#include "kripkesec/lang.hpp"
#include "kripkesec/secprops.hpp"

namespace kripkesec {

// Trace-based definitions, quantifying over initial stores directly.
enum class TraceId : std::uint8_t { kTraceConf, kTiTraceConf, kTiTraceInteg, kTraceRd, kTraceTe };

inline constexpr std::size_t kTraceCount = 5;
const std::array<TraceId, kTraceCount>& all_trace_ids();
std::string_view to_string(TraceId id);
std::optional<TraceId> parse_trace_id(std::string_view s);

struct TraceWitness {
  std::string agent;
  std::vector<Store> stores;              // 2 (pairs) or 4 (t11, t12, t21, t22)
  std::vector<std::string> observations;  // view or fix of each maximal trace
  std::string detail;
};

struct TraceVerdict {
  TraceId id = TraceId::kTraceConf;
  Status status = Status::kSatisfied;
  std::vector<TraceWitness> witnesses;  // first per agent
  std::string error;
};

struct OracleOptions {
  std::size_t budget = kDefaultBudget;
  std::size_t store_bound = kDefaultStoreBound;
  // Drops the "at least one run diverges" escape of the TI definitions.
  bool strict_termination = false;
};

TraceVerdict trace_check(const Program& p, const SecurityContext& ctx, TraceId id, const OracleOptions& opt = {});

// Variables the definition quantifies (X, then Y for quadruples); every
// witness agrees on all other variables.
std::vector<VarId> quantified_vars(const SecurityContext& ctx, TraceId id, std::size_t agent);

enum class Pairing : std::uint8_t { kConf, kTiConf, kTiInteg, kTiCauseInteg, kRd, kTe };
inline constexpr std::size_t kPairingCount = 6;
const std::array<Pairing, kPairingCount>& all_pairings();
TraceId trace_side(Pairing p);
PropertyId modal_side(Pairing p);
std::string pairing_name(Pairing p);  // "TRACE_CONF<->CONF"

enum class Agreement : std::uint8_t { kAgree, kDisagree, kSkipped };
const char* to_string(Agreement a);

struct DiffResult {
  Pairing pairing = Pairing::kConf;
  Agreement agreement = Agreement::kSkipped;
  Status trace_status = Status::kSatisfied;
  Status modal_status = Status::kSatisfied;
  std::vector<std::string> notes;  // skip reasons and assumption warnings
  TraceVerdict trace;
  std::vector<Verdict> modal;
};

struct DiffOptions {
  SearchMode mode;
  BuildOptions build;
};

// Theorem pairings of a program. Pairings whose theorem assumptions fail,
// or whose frames carry policy refinements, are SKIPPED.
std::vector<DiffResult> differential(const Program& p, const SecurityContext& ctx,
                                     const std::vector<Pairing>& pairings = {}, const DiffOptions& opt = {});

// Random programs over boolean variables for differential fuzzing.
struct GenBounds {
  std::size_t vars = 3;
  std::size_t stmts = 6;
  bool write_within_read = true;
};

struct Generated {
  std::string source;  // with declarations
  Policy policy;
  Program program;
  SecurityContext ctx;
};

Generated gen_program(std::uint64_t seed, const GenBounds& bounds = {});

// Arrows of both implication diagrams: stronger ⇒ weaker.
struct Arrow {
  PropertyId stronger;
  PropertyId weaker;
};
const std::vector<Arrow>& implication_arrows();

struct CorpusMember {
  std::string name;
  std::string source;
  Program program;
  SecurityContext ctx;
};

// A named example program together with the verdict pair separating two
// properties.
struct Separation {
  std::string name;
  std::string source;
  Policy policy;
  PropertyId satisfied;
  PropertyId violated;
};
const std::vector<Separation>& separating_programs();

struct AuditReport {
  struct ArrowResult {
    Arrow arrow;
    std::size_t frames = 0;
    std::size_t vacuous = 0;  // stronger property violated
    std::vector<std::string> counterexamples;
  };
  struct SeparationResult {
    Separation separation;
    Status satisfied_status = Status::kSatisfied;
    Status violated_status = Status::kSatisfied;
    bool ok = false;
  };
  std::vector<ArrowResult> arrows;
  std::vector<SeparationResult> separations;
  std::vector<std::string> skipped;  // corpus members that could not be built

  bool ok() const;
};

AuditReport implication_audit(const std::vector<CorpusMember>& corpus, const CheckOptions& opt = {},
                              const BuildOptions& build = {});

}  // namespace kripkesec
