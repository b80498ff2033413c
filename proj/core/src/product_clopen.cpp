#include "costlab/product_clopen.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>

namespace costlab {

namespace {

struct Tagged {
  const BitString* cell;
  const ClopenSet* section;
  int side;
};

using Combine = std::function<ClopenSet(const ClopenSet&, const ClopenSet&)>;

// Walks the joint refinement of all cells. Entries are comparable with p;
// sections of cells that are prefixes of p are already folded into
// inherited[side].
void refine(const BitString& p, std::vector<Tagged> entries, ClopenSet inherited0, ClopenSet inherited1,
            const Combine& combine, std::vector<ProductClopenSet::Cell>& out) {
  std::vector<Tagged> deeper;
  for (const auto& e : entries) {
    if (e.cell->size() <= p.size()) {
      (e.side == 0 ? inherited0 : inherited1) = (e.side == 0 ? inherited0 : inherited1).unite(*e.section);
    } else {
      deeper.push_back(e);
    }
  }
  if (deeper.empty()) {
    ClopenSet section = combine(inherited0, inherited1);
    if (!section.empty()) out.push_back({p, std::move(section)});
    return;
  }
  for (bool bit : {false, true}) {
    BitString q = p.child(bit);
    std::vector<Tagged> part;
    for (const auto& e : deeper) {
      if ((*e.cell)[p.size()] == bit) part.push_back(e);
    }
    refine(q, std::move(part), inherited0, inherited1, combine, out);
  }
}

bool sibling_cells(const BitString& a, const BitString& b) {
  return a.size() == b.size() && !a.empty() && a[a.size() - 1] != b[b.size() - 1] &&
         a.prefix(a.size() - 1) == b.prefix(b.size() - 1);
}

std::vector<ProductClopenSet::Cell> merge_siblings(std::vector<ProductClopenSet::Cell> cells) {
  std::vector<ProductClopenSet::Cell> stack;
  for (auto& c : cells) {
    stack.push_back(std::move(c));
    while (stack.size() >= 2) {
      auto& a = stack[stack.size() - 2];
      auto& b = stack.back();
      if (!sibling_cells(a.cell, b.cell) || a.section != b.section) break;
      BitString parent = a.cell.prefix(a.cell.size() - 1);
      stack.pop_back();
      stack.back().cell = std::move(parent);
    }
  }
  return stack;
}

std::vector<ProductClopenSet::Cell> combine_cells(const std::vector<ProductClopenSet::Cell>& a,
                                                  const std::vector<ProductClopenSet::Cell>& b,
                                                  const Combine& combine) {
  std::vector<Tagged> entries;
  for (const auto& c : a) entries.push_back({&c.cell, &c.section, 0});
  for (const auto& c : b) entries.push_back({&c.cell, &c.section, 1});
  std::vector<ProductClopenSet::Cell> out;
  refine(BitString(), std::move(entries), ClopenSet(), ClopenSet(), combine, out);
  return merge_siblings(std::move(out));
}

}  // namespace

ProductClopenSet ProductClopenSet::from_cells(std::vector<Cell> cells) {
  ProductClopenSet result;
  result.cells_ = combine_cells(cells, {}, [](const ClopenSet& x, const ClopenSet&) { return x; });
  return result;
}

ProductClopenSet ProductClopenSet::from_rectangles(const std::vector<std::pair<BitString, BitString>>& rectangles) {
  std::vector<Cell> cells;
  for (const auto& [sigma, tau] : rectangles) cells.push_back({sigma, ClopenSet::cylinder(tau)});
  return from_cells(std::move(cells));
}

ProductClopenSet ProductClopenSet::rectangle(const BitString& sigma, const BitString& tau) {
  return from_rectangles({{sigma, tau}});
}

ProductClopenSet ProductClopenSet::product(const ClopenSet& a, const ClopenSet& b) {
  if (b.empty()) return {};
  std::vector<Cell> cells;
  for (const auto& g : a.generators()) cells.push_back({g, b});
  return from_cells(std::move(cells));
}

DyadicRational ProductClopenSet::measure() const {
  DyadicRational total;
  for (const auto& c : cells_) total += c.section.measure().scaled(-static_cast<std::int64_t>(c.cell.size()));
  return total;
}

ClopenSet ProductClopenSet::project_first() const {
  std::vector<BitString> gens;
  for (const auto& c : cells_) gens.push_back(c.cell);
  return ClopenSet::from_generators(std::move(gens));
}

ClopenSet ProductClopenSet::project_second() const {
  std::vector<BitString> gens;
  for (const auto& c : cells_) gens.insert(gens.end(), c.section.generators().begin(), c.section.generators().end());
  return ClopenSet::from_generators(std::move(gens));
}

ProductClopenSet ProductClopenSet::unite(const ProductClopenSet& other) const {
  return product_algebra(*this, other, SetOp::union_);
}
ProductClopenSet ProductClopenSet::intersect(const ProductClopenSet& other) const {
  return product_algebra(*this, other, SetOp::intersection);
}
ProductClopenSet ProductClopenSet::subtract(const ProductClopenSet& other) const {
  return product_algebra(*this, other, SetOp::difference);
}

nlohmann::json ProductClopenSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells_) arr.push_back({{"cell", c.cell.str()}, {"section", c.section.to_json()}});
  return arr;
}

ProductClopenSet product_algebra(const ProductClopenSet& a, const ProductClopenSet& b, SetOp op) {
  auto cells = combine_cells(a.cells(), b.cells(),
                             [op](const ClopenSet& x, const ClopenSet& y) { return set_algebra(x, y, op); });
  // Re-running the refinement on a disjoint canonical list is the identity.
  return ProductClopenSet::from_cells(std::move(cells));
}

ProductClopenSet carve(const ProductClopenSet& from, const DyadicRational& amount) {
  if (amount > from.measure()) {
    throw std::domain_error("carve: requested " + amount.to_string() + " exceeds available " + from.measure().to_string());
  }
  std::vector<ProductClopenSet::Cell> order = from.cells();
  std::stable_sort(order.begin(), order.end(), [](const auto& x, const auto& y) { return x.cell.size() < y.cell.size(); });
  std::vector<ProductClopenSet::Cell> taken;
  DyadicRational remaining = amount;
  for (const auto& c : order) {
    if (remaining.is_zero()) break;
    auto shift = static_cast<std::int64_t>(c.cell.size());
    DyadicRational weight = c.section.measure().scaled(-shift);
    if (weight <= remaining) {
      taken.push_back(c);
      remaining -= weight;
      continue;
    }
    taken.push_back({c.cell, carve(c.section, remaining.scaled(shift))});
    remaining = DyadicRational();
  }
  return ProductClopenSet::from_cells(std::move(taken));
}

}  // namespace costlab
