#pragma once

#include <utility>
#include <vector>

#include "costlab/clopen.hpp"

namespace costlab {

// Finite union of rectangles [sigma] x [tau] in the product of two Cantor
// spaces. Stored as disjoint first-coordinate cells, each carrying its
// nonempty second-coordinate section; sibling cells with equal sections are
// merged, so the representation is canonical.
class ProductClopenSet {
 public:
  struct Cell {
    BitString cell;
    ClopenSet section;
    bool operator==(const Cell&) const = default;
  };

  ProductClopenSet() = default;

  static ProductClopenSet from_rectangles(const std::vector<std::pair<BitString, BitString>>& rectangles);
  static ProductClopenSet rectangle(const BitString& sigma, const BitString& tau);
  // a x b
  static ProductClopenSet product(const ClopenSet& a, const ClopenSet& b);

  const std::vector<Cell>& cells() const { return cells_; }
  bool empty() const { return cells_.empty(); }

  DyadicRational measure() const;
  ClopenSet project_first() const;
  ClopenSet project_second() const;

  ProductClopenSet unite(const ProductClopenSet& other) const;
  ProductClopenSet intersect(const ProductClopenSet& other) const;
  ProductClopenSet subtract(const ProductClopenSet& other) const;
  bool disjoint(const ProductClopenSet& other) const { return intersect(other).empty(); }

  bool operator==(const ProductClopenSet&) const = default;

  nlohmann::json to_json() const;

  // Cells may overlap; overlapping sections are united.
  static ProductClopenSet from_cells(std::vector<Cell> cells);

 private:
  std::vector<Cell> cells_;
};

ProductClopenSet product_algebra(const ProductClopenSet& a, const ProductClopenSet& b, SetOp op);

// Exact-measure subset, coarsest cells first, splitting the first section
// that does not fit.
ProductClopenSet carve(const ProductClopenSet& from, const DyadicRational& amount);

}  // namespace costlab
