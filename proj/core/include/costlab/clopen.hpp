#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "costlab/bit_string.hpp"
#include "costlab/dyadic.hpp"

namespace costlab {

// Finite union of cylinders [sigma]. Generators are kept as a sorted antichain
// in which no two siblings both occur, so equal sets have equal generators.
class ClopenSet {
 public:
  ClopenSet() = default;

  static ClopenSet from_generators(std::vector<BitString> generators);
  static ClopenSet cylinder(const BitString& sigma);
  static ClopenSet whole() { return cylinder(BitString()); }

  const std::vector<BitString>& generators() const { return generators_; }
  bool empty() const { return generators_.empty(); }
  std::size_t max_length() const;

  DyadicRational measure() const;

  // Every sequence extending x lies in the set.
  bool covers(const BitString& x) const;
  bool intersects_cylinder(const BitString& x) const;

  ClopenSet unite(const ClopenSet& other) const;
  ClopenSet intersect(const ClopenSet& other) const;
  ClopenSet subtract(const ClopenSet& other) const;
  ClopenSet complement() const;
  bool subset_of(const ClopenSet& other) const { return subtract(other).empty(); }
  bool disjoint(const ClopenSet& other) const { return intersect(other).empty(); }

  bool operator==(const ClopenSet&) const = default;

  nlohmann::json to_json() const;
  static ClopenSet from_json(const nlohmann::json& j);

 private:
  explicit ClopenSet(std::vector<BitString> canonical) : generators_(std::move(canonical)) {}
  // Generators of the sorted antichain that extend x.
  std::pair<std::size_t, std::size_t> extensions_of(const BitString& x) const;

  std::vector<BitString> generators_;
};

enum class SetOp { union_, difference, intersection };
ClopenSet set_algebra(const ClopenSet& a, const ClopenSet& b, SetOp op);

// A subset of `from` with measure exactly `amount`, taking whole cylinders
// coarsest first and splitting the first one that does not fit along the
// binary digits of the remainder. Throws when amount exceeds the measure.
ClopenSet carve(const ClopenSet& from, const DyadicRational& amount);

}  // namespace costlab
