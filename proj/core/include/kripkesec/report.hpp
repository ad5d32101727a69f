#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kripkesec/oracle.hpp"
#include "kripkesec/secprops.hpp"

namespace kripkesec {

enum class Format : std::uint8_t { kText, kJson };
std::optional<Format> parse_format(std::string_view s);

// All reports are byte-stable for fixed inputs; JSON keys keep schema order.
std::string report_verdicts(const SecurityFrame& f, const std::vector<Verdict>& vs, Format fmt);
std::string report_trace(const Program& p, const std::vector<TraceVerdict>& vs, Format fmt);

struct DiffEntry {
  std::string name;
  std::vector<DiffResult> results;
};
std::string report_diff(const std::vector<DiffEntry>& entries, Format fmt);
std::string report_audit(const AuditReport& rep, Format fmt);

// The six-program robust declassification matrix.
struct Figure1Row {
  std::string label;   // "(i)" .. "(vi)"
  std::string source;  // statements only
  SecurityFrame frame;
  std::array<Verdict, 4> cells;
};

struct Figure1 {
  bool synchronous = false;
  std::vector<Figure1Row> rows;
};

const std::array<PropertyId, 4>& figure1_columns();
const std::vector<std::pair<std::string, std::string>>& figure1_programs();
std::string figure1_declarations();
Policy figure1_policy(bool synchronous = false);
Figure1 figure1(bool synchronous = false, const CheckOptions& opt = {});
// "--" when satisfied, else the witness formula; "?" when unsupported.
std::string figure1_cell(const Verdict& v);
std::string report_figure1(const Figure1& fig, Format fmt);

}  // namespace kripkesec
