#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/bit_string.hpp"

namespace costlab {

// Stage-indexed characteristic strings A_0, A_1, ... of a common width.
class Approximation {
 public:
  Approximation() = default;
  // Snapshots are zero-padded to the longest one.
  static Approximation from_snapshots(std::vector<BitString> snapshots);
  static Approximation from_sets(const std::vector<std::set<std::uint64_t>>& sets, std::size_t width);
  static Approximation constant(const BitString& value, std::size_t stages);

  std::size_t stages() const { return snapshots_.size(); }
  std::size_t width() const { return width_; }
  const BitString& at(std::size_t s) const;
  const BitString& final() const;
  bool value(std::size_t s, std::size_t x) const { return at(s).padded(x); }
  const std::vector<BitString>& snapshots() const { return snapshots_; }

  // Least x with A_{s-1}(x) != A_s(x), for s >= 1.
  std::optional<std::size_t> least_change(std::size_t s) const;
  // Only 0 -> 1 changes.
  bool is_ce() const;

  Approximation subsample(const std::vector<std::size_t>& stage_map) const;
  // Inserts a copy of snapshot s right after it.
  Approximation with_repeated_stage(std::size_t s) const;

 private:
  std::vector<BitString> snapshots_;
  std::size_t width_ = 0;
};

// Pairs (n, k): position n has changed at least k + 1 times. Kept in order of
// the stage that first witnessed them.
class ChangeSet {
 public:
  void add(std::size_t n, std::size_t k);
  bool contains(std::size_t n, std::size_t k) const { return members_.count({n, k}) > 0; }
  const std::vector<std::pair<std::size_t, std::size_t>>& entries() const { return order_; }
  std::size_t size() const { return order_.size(); }
  bool empty() const { return order_.empty(); }
  nlohmann::json to_json() const;

 private:
  std::set<std::pair<std::size_t, std::size_t>> members_;
  std::vector<std::pair<std::size_t, std::size_t>> order_;
};

ChangeSet change_set(const Approximation& a);
// a0(n) XOR parity of the least k with (n, k) absent.
bool decode(const ChangeSet& d, const BitString& a0, std::size_t n);

// Deletes the first bit; throws on the empty string.
BitString shift(const BitString& a);
Approximation shift(const Approximation& a);

}  // namespace costlab
