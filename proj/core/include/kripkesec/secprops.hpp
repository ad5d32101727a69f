#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/context.hpp"
#include "kripkesec/frame.hpp"
#include "kripkesec/mlogic.hpp"

namespace kripkesec {

enum class PropertyId : std::uint8_t {
  kConf,
  kTiConf,
  kTiConfIntermediate,
  kPiConf,
  kInteg,
  kTiInteg,
  kCauseInteg,
  kTiCauseInteg,
  kRd,
  kRdSimplified,
  kTiRd,
  kRdVarA,
  kRdVarB,
  kRdAlt,
  kTe,
  kTiTe,
  kTeAlt,
};

inline constexpr std::size_t kPropertyCount = 17;

const std::array<PropertyId, kPropertyCount>& all_properties();
std::string_view to_string(PropertyId id);           // "TI_CONF"
std::optional<PropertyId> parse_property_id(std::string_view s);

enum class Admissibility : std::uint8_t { kAny, kWriteStable, kReadStable };
Admissibility admissibility(PropertyId id);

// The implication instantiated for one agent, with the placeholder for φ.
Formula property_template(PropertyId id, const std::string& agent);

bool admissible(const SecurityFrame& f, PropertyId id, std::size_t agent, const WorldSet& s);

enum class Status : std::uint8_t { kSatisfied, kViolated, kUnsupported };
const char* to_string(Status s);

struct Witness {
  std::size_t world = 0;
  std::string agent;
  TSProperty phi;
  std::string rendered;
};

struct Verdict {
  PropertyId property = PropertyId::kConf;
  std::string agent;
  Status status = Status::kSatisfied;
  std::vector<Witness> witnesses;         // first violating worlds, in world order
  std::vector<std::uint32_t> violating;   // every world violated by some admissible φ
  SearchMode mode;
  std::vector<std::string> warnings;
  std::string error;                      // reason when UNSUPPORTED
};

struct CheckOptions {
  SearchMode mode;
  std::uint64_t exhaustive_bound = kDefaultExhaustiveBound;
  std::size_t max_witnesses = 1;
  bool render = true;
};

// One verdict per agent (all agents when `agents` is empty), in agent order.
std::vector<Verdict> check(const SecurityFrame& f, PropertyId id, const std::vector<std::string>& agents = {},
                           const CheckOptions& opt = {});

// Worst status: VIOLATED beats SATISFIED, UNSUPPORTED beats both.
Status combined_status(const std::vector<Verdict>& vs);

// true iff the template is false at the witness world under the witness φ
bool recheck(const SecurityFrame& f, PropertyId id, const Witness& w);

// Renders a cut vector as a boolean combination of time-0 atoms when one
// has exactly this extension, else as a union of run suffixes.
std::string render_set(const SecurityFrame& f, const TSProperty& s);

// RD and RD_SIMPLIFIED agree on status and on their violating worlds.
// Throws UnsupportedError on frames with declassification.
bool check_rd_equivalence(const SecurityFrame& f, const CheckOptions& opt = {});

// Assumptions of the equivalence theorems behind the TI_RD and TI_TE
// differentials: termination signalled and W(A) ⊆ R(A).
std::vector<std::string> audit_theorem_assumptions(const SecurityFrame& f, const SecurityContext& ctx,
                                                   PropertyId id);

}  // namespace kripkesec
