#include "costlab/trace.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace costlab {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

void StageTrace::describe(const std::string& invariant, std::string anchor) { anchors_[invariant] = std::move(anchor); }

void StageTrace::advance(std::uint64_t stage) {
  if (stage < stage_) {
    throw std::logic_error("StageTrace: stage " + std::to_string(stage) + " after " + std::to_string(stage_));
  }
  stage_ = stage;
}

void StageTrace::event(std::uint64_t stage, std::string kind, nlohmann::json payload) {
  advance(stage);
  entries_.emplace_back(TraceEvent{stage, std::move(kind), std::move(payload)});
}

bool StageTrace::check(const std::string& invariant, std::uint64_t stage, bool pass, nlohmann::json witness) {
  advance(stage);
  ++verdicts_;
  auto [it, inserted] = rows_.try_emplace(invariant);
  SummaryRow& row = it->second;
  if (inserted) {
    row.invariant = invariant;
    row_order_.push_back(invariant);
  }
  ++row.checks;
  if (!pass) {
    ++failures_;
    if (row.failures++ == 0) row.witness = witness;
  } else if (row.failures == 0) {
    row.witness = witness;
  }
  Verdict v{invariant, stage, pass, std::move(witness)};
  if (!pass && !first_failure_) first_failure_ = v;
  entries_.emplace_back(std::move(v));
  return pass;
}

void StageTrace::write_jsonl(std::ostream& out) const {
  for (const auto& entry : entries_) {
    if (const auto* e = std::get_if<TraceEvent>(&entry)) {
      nlohmann::json j;
      j["stage"] = e->stage;
      j["kind"] = e->kind;
      j["payload"] = e->payload;
      out << j.dump() << '\n';
    } else {
      const auto& v = std::get<Verdict>(entry);
      nlohmann::json j;
      j["invariant"] = v.invariant;
      j["stage"] = v.stage;
      j["pass"] = v.pass;
      j["witness"] = v.witness;
      out << j.dump() << '\n';
    }
  }
}

std::string StageTrace::to_jsonl() const {
  std::ostringstream out;
  write_jsonl(out);
  return out.str();
}

std::vector<SummaryRow> StageTrace::summary() const {
  std::vector<SummaryRow> rows;
  for (const auto& name : row_order_) {
    SummaryRow row = rows_.at(name);
    auto a = anchors_.find(name);
    row.anchor = a == anchors_.end() ? "" : a->second;
    rows.push_back(std::move(row));
  }
  return rows;
}

void StageTrace::write_summary_csv(std::ostream& out) const {
  out << "invariant,anchor,checks,failures,witness\n";
  for (const auto& row : summary()) {
    out << csv_field(row.invariant) << ',' << csv_field(row.anchor) << ',' << row.checks << ',' << row.failures << ','
        << csv_field(row.witness.dump()) << '\n';
  }
}

}  // namespace costlab
