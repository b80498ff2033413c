#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace costlab {

// Decidable set of naturals; enumeration is derived from membership by
// scanning, so the two always agree.
class ComputableSet {
 public:
  using Predicate = std::function<bool(std::uint64_t)>;

  ComputableSet(std::string name, Predicate membership);

  static ComputableSet naturals();
  static ComputableSet evens();
  static ComputableSet odds();
  static ComputableSet empty();
  static ComputableSet finite(const std::set<std::uint64_t>& elements);

  const std::string& name() const { return name_; }
  bool contains(std::uint64_t x) const { return (*membership_)(x); }

  // |R ∩ [0, m)|
  std::uint64_t count_below(std::uint64_t m) const;
  // counts[m] = |R ∩ [0, m)| for m <= limit.
  std::vector<std::uint64_t> prefix_counts(std::uint64_t limit) const;
  // The m-th element (0-based), scanning at most scan_limit naturals.
  std::optional<std::uint64_t> nth(std::uint64_t m, std::uint64_t scan_limit = 1u << 22) const;
  std::vector<std::uint64_t> elements_below(std::uint64_t m) const;

  ComputableSet complement() const;

 private:
  std::string name_;
  std::shared_ptr<const Predicate> membership_;
};

// R(T, n) = union over j in T of (j - 1) + nN. T must be a nonempty subset of {1..n}.
ComputableSet column_union(const std::set<unsigned>& t, unsigned n);

// Text forms: naturals, evens, odds, empty, cols:1,2/4, finite:0,3,5,
// not:<spec>, or:<spec>|<spec>.
ComputableSet parse_set_spec(std::string_view spec);

}  // namespace costlab
