#include "costlab/approximation.hpp"

#include <stdexcept>

namespace costlab {

Approximation Approximation::from_snapshots(std::vector<BitString> snapshots) {
  Approximation a;
  for (const auto& s : snapshots) a.width_ = std::max(a.width_, s.size());
  for (auto& s : snapshots) {
    if (s.size() < a.width_) s = s.padded_prefix(a.width_);
  }
  a.snapshots_ = std::move(snapshots);
  return a;
}

Approximation Approximation::from_sets(const std::vector<std::set<std::uint64_t>>& sets, std::size_t width) {
  std::vector<BitString> snaps;
  for (const auto& set : sets) {
    BitString b = BitString::zeros(width);
    for (auto x : set) {
      if (x >= width) throw std::out_of_range("Approximation::from_sets: element beyond width");
      b = b.with_bit(x, true);
    }
    snaps.push_back(std::move(b));
  }
  return from_snapshots(std::move(snaps));
}

Approximation Approximation::constant(const BitString& value, std::size_t stages) {
  return from_snapshots(std::vector<BitString>(stages, value));
}

const BitString& Approximation::at(std::size_t s) const {
  if (s >= snapshots_.size()) throw std::out_of_range("Approximation: stage " + std::to_string(s) + " out of range");
  return snapshots_[s];
}

const BitString& Approximation::final() const {
  if (snapshots_.empty()) throw std::out_of_range("Approximation: no snapshots");
  return snapshots_.back();
}

std::optional<std::size_t> Approximation::least_change(std::size_t s) const {
  if (s == 0) return std::nullopt;
  return at(s - 1).first_difference(at(s));
}

bool Approximation::is_ce() const {
  for (std::size_t s = 1; s < snapshots_.size(); ++s) {
    for (std::size_t x = 0; x < width_; ++x) {
      if (snapshots_[s - 1][x] && !snapshots_[s][x]) return false;
    }
  }
  return true;
}

Approximation Approximation::subsample(const std::vector<std::size_t>& stage_map) const {
  std::vector<BitString> snaps;
  for (auto s : stage_map) snaps.push_back(at(s));
  Approximation out = from_snapshots(std::move(snaps));
  if (out.width_ < width_) {
    for (auto& s : out.snapshots_) s = s.padded_prefix(width_);
    out.width_ = width_;
  }
  return out;
}

Approximation Approximation::with_repeated_stage(std::size_t s) const {
  std::vector<BitString> snaps = snapshots_;
  snaps.insert(snaps.begin() + static_cast<std::ptrdiff_t>(s) + 1, at(s));
  return from_snapshots(std::move(snaps));
}

void ChangeSet::add(std::size_t n, std::size_t k) {
  if (members_.insert({n, k}).second) order_.emplace_back(n, k);
}

nlohmann::json ChangeSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [n, k] : order_) arr.push_back({n, k});
  return arr;
}

ChangeSet change_set(const Approximation& a) {
  ChangeSet d;
  std::vector<std::size_t> flips(a.width(), 0);
  for (std::size_t s = 1; s < a.stages(); ++s) {
    for (std::size_t n = 0; n < a.width(); ++n) {
      if (a.at(s - 1)[n] != a.at(s)[n]) d.add(n, flips[n]++);
    }
  }
  return d;
}

bool decode(const ChangeSet& d, const BitString& a0, std::size_t n) {
  std::size_t k = 0;
  while (d.contains(n, k)) ++k;
  return a0.padded(n) != (k % 2 == 1);
}

BitString shift(const BitString& a) {
  if (a.empty()) throw std::invalid_argument("shift: empty input");
  return BitString(a.str().substr(1));
}

Approximation shift(const Approximation& a) {
  if (a.stages() == 0 || a.width() == 0) throw std::invalid_argument("shift: empty input");
  std::vector<BitString> snaps;
  for (const auto& s : a.snapshots()) snaps.push_back(shift(s));
  return Approximation::from_snapshots(std::move(snaps));
}

}  // namespace costlab
