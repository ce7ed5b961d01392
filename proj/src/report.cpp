// SPDX-License-Identifier: Apache-2.0
#include "bpb/report.hpp"

namespace bpb {

std::string_view law_name(Law law) {
  switch (law) {
    case Law::l1l1: return "l1l1";
    case Law::l1linf: return "l1linf";
    case Law::ck_clamp: return "ck-clamp";
    case Law::ck_bump: return "ck-bump";
    case Law::linf_sum: return "linf-sum";
  }
  return "?";
}

Law parse_law(std::string_view text) {
  for (Law law : {Law::l1l1, Law::l1linf, Law::ck_clamp, Law::ck_bump, Law::linf_sum})
    if (law_name(law) == text) return law;
  throw ParseError("unknown law '" + std::string(text) + "' (expected l1l1|l1linf|ck-clamp|ck-bump)");
}

std::string format_atoms(const AtomSet& atoms) {
  std::string out = "{";
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    if (k) out += ",";
    out += std::to_string(atoms[k]);
  }
  return out + "}";
}

std::string format_cells(const std::vector<Cell>& cells) {
  std::string out = "{";
  for (std::size_t k = 0; k < cells.size(); ++k) {
    if (k) out += ",";
    out += "(" + std::to_string(cells[k].first) + "," + std::to_string(cells[k].second) + ")";
  }
  return out + "}";
}

void StepLog::record(std::string name, std::string value) {
  entries_.push_back({std::move(name), std::move(value)});
}

void StepLog::record_atoms(std::string name, const AtomSet& atoms) { record(std::move(name), format_atoms(atoms)); }

void StepLog::record_cells(std::string name, const std::vector<Cell>& cells) {
  record(std::move(name), format_cells(cells));
}

void StepLog::append(const StepLog& other, std::string_view prefix) {
  for (const auto& e : other.entries_) entries_.push_back({std::string(prefix) + "." + e.name, e.value});
}

std::optional<std::string> StepLog::find(std::string_view name) const {
  for (const auto& e : entries_)
    if (e.name == name) return e.value;
  return std::nullopt;
}

}  // namespace bpb
