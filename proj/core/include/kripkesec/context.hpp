#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/lang.hpp"

namespace kripkesec {

enum class EndorseMode { kNone, kPerVariable, kEvent };

// A policy as written in a policy file: names only, not yet bound to a
// program.
struct Policy {
  std::vector<std::string> agents;
  std::map<std::string, std::vector<std::string>> read;
  std::map<std::string, std::vector<std::string>> write;
  std::map<std::string, std::vector<Value>> domains;
  bool signals_termination = false;
  bool synchronous = false;
  std::map<std::string, std::string> declass;
  EndorseMode endorse_mode = EndorseMode::kNone;
  std::map<std::string, std::vector<std::string>> endorse_vars;
};

Policy parse_policy(std::string_view json_text);
std::string policy_to_json(const Policy& p);

struct Predicate {
  std::string text;
  Ast ast;
  ExprId root = kNone;
};

struct AgentContext {
  std::string name;
  std::vector<bool> read;   // by VarId
  std::vector<bool> write;  // by VarId
  std::optional<Predicate> declass;
  std::vector<bool> endorsable;  // PER_VARIABLE mode
};

// A policy bound to one program. Agents are kept in lexicographic order.
struct SecurityContext {
  std::vector<AgentContext> agents;
  std::vector<std::vector<Value>> domains;  // by VarId
  bool signals_termination = false;
  bool synchronous = false;
  EndorseMode endorse_mode = EndorseMode::kNone;
  // policy entries naming variables the program never mentions
  std::vector<std::string> unused_names;

  std::size_t agent_index(std::string_view name) const;  // throws Error
  bool write_within_read(std::size_t agent) const;
};

// Resolves names against the program. Unknown agents throw Error. Variables
// the program does not mention are dropped (and listed in unused_names), so
// one policy can serve a family of programs.
SecurityContext bind_policy(const Policy& policy, const Program& program);

}  // namespace kripkesec
