#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <nlohmann/json.hpp>

namespace costlab {

struct TraceEvent {
  std::uint64_t stage;
  std::string kind;
  nlohmann::json payload;
};

struct Verdict {
  std::string invariant;
  std::uint64_t stage;
  bool pass;
  nlohmann::json witness;
};

struct SummaryRow {
  std::string invariant;
  std::string anchor;
  std::uint64_t checks = 0;
  std::uint64_t failures = 0;
  nlohmann::json witness;  // first failure, else the last check
};

// Append-only log of a run. Stages never decrease; the first failed verdict
// marks the run violated for good.
class StageTrace {
 public:
  // Plain-language statement of an invariant, shown in the summary.
  void describe(const std::string& invariant, std::string anchor);

  void event(std::uint64_t stage, std::string kind, nlohmann::json payload = nlohmann::json::object());
  bool check(const std::string& invariant, std::uint64_t stage, bool pass,
             nlohmann::json witness = nlohmann::json::object());

  bool violated() const { return first_failure_.has_value(); }
  const std::optional<Verdict>& first_failure() const { return first_failure_; }
  std::uint64_t current_stage() const { return stage_; }
  std::size_t size() const { return entries_.size(); }
  std::size_t verdict_count() const { return verdicts_; }
  std::size_t failure_count() const { return failures_; }
  const std::vector<std::variant<TraceEvent, Verdict>>& entries() const { return entries_; }

  void write_jsonl(std::ostream& out) const;
  std::string to_jsonl() const;
  std::vector<SummaryRow> summary() const;
  void write_summary_csv(std::ostream& out) const;

 private:
  void advance(std::uint64_t stage);

  std::vector<std::variant<TraceEvent, Verdict>> entries_;
  std::map<std::string, std::string> anchors_;
  std::map<std::string, SummaryRow> rows_;
  std::vector<std::string> row_order_;
  std::optional<Verdict> first_failure_;
  std::uint64_t stage_ = 0;
  std::size_t verdicts_ = 0;
  std::size_t failures_ = 0;
};

}  // namespace costlab
