#include "costlab/clopen.hpp"

#include <algorithm>
#include <stdexcept>

namespace costlab {

namespace {

bool siblings(const BitString& a, const BitString& b) {
  return a.size() == b.size() && !a.empty() && a.prefix(a.size() - 1) == b.prefix(b.size() - 1) &&
         a[a.size() - 1] != b[b.size() - 1];
}

// Sort, drop covered generators, then merge sibling pairs bottom-up.
std::vector<BitString> canonicalize(std::vector<BitString> gens) {
  std::sort(gens.begin(), gens.end());
  std::vector<BitString> antichain;
  for (auto& g : gens) {
    if (!antichain.empty() && antichain.back().is_prefix_of(g)) continue;
    antichain.push_back(std::move(g));
  }
  std::vector<BitString> stack;
  for (auto& g : antichain) {
    stack.push_back(std::move(g));
    while (stack.size() >= 2 && siblings(stack[stack.size() - 2], stack.back())) {
      BitString parent = stack.back().prefix(stack.back().size() - 1);
      stack.pop_back();
      stack.back() = std::move(parent);
    }
  }
  return stack;
}

// Cover of [x] minus the union of the given extensions of x (sorted antichain).
void cover_minus(const BitString& x, const BitString* first, const BitString* last, std::vector<BitString>& out) {
  if (first == last) {
    out.push_back(x);
    return;
  }
  if (*first == x) return;
  BitString left = x.child(false);
  const BitString* mid = std::partition_point(first, last, [&](const BitString& g) { return left.is_prefix_of(g); });
  cover_minus(left, first, mid, out);
  cover_minus(x.child(true), mid, last, out);
}

}  // namespace

ClopenSet ClopenSet::from_generators(std::vector<BitString> generators) {
  return ClopenSet(canonicalize(std::move(generators)));
}

ClopenSet ClopenSet::cylinder(const BitString& sigma) { return ClopenSet(std::vector<BitString>{sigma}); }

std::size_t ClopenSet::max_length() const {
  std::size_t m = 0;
  for (const auto& g : generators_) m = std::max(m, g.size());
  return m;
}

DyadicRational ClopenSet::measure() const {
  if (generators_.empty()) return {};
  std::size_t depth = max_length();
  BigInt total = 0;
  for (const auto& g : generators_) total += BigInt(1) << (depth - g.size());
  return DyadicRational(total, depth);
}

std::pair<std::size_t, std::size_t> ClopenSet::extensions_of(const BitString& x) const {
  auto lo = std::lower_bound(generators_.begin(), generators_.end(), x);
  auto hi = lo;
  while (hi != generators_.end() && x.is_prefix_of(*hi)) ++hi;
  return {static_cast<std::size_t>(lo - generators_.begin()), static_cast<std::size_t>(hi - generators_.begin())};
}

bool ClopenSet::covers(const BitString& x) const {
  // A generator that is a prefix of x sorts at or just before x.
  auto it = std::upper_bound(generators_.begin(), generators_.end(), x);
  return it != generators_.begin() && std::prev(it)->is_prefix_of(x);
}

bool ClopenSet::intersects_cylinder(const BitString& x) const {
  if (covers(x)) return true;
  auto [lo, hi] = extensions_of(x);
  return lo != hi;
}

ClopenSet ClopenSet::unite(const ClopenSet& other) const {
  std::vector<BitString> all = generators_;
  all.insert(all.end(), other.generators_.begin(), other.generators_.end());
  return from_generators(std::move(all));
}

ClopenSet ClopenSet::intersect(const ClopenSet& other) const {
  std::vector<BitString> out;
  for (const auto& a : generators_) {
    if (other.covers(a)) {
      out.push_back(a);
      continue;
    }
    auto [lo, hi] = other.extensions_of(a);
    out.insert(out.end(), other.generators_.begin() + lo, other.generators_.begin() + hi);
  }
  return from_generators(std::move(out));
}

ClopenSet ClopenSet::subtract(const ClopenSet& other) const {
  std::vector<BitString> out;
  for (const auto& a : generators_) {
    if (other.covers(a)) continue;
    auto [lo, hi] = other.extensions_of(a);
    const BitString* base = other.generators_.data();
    cover_minus(a, base + lo, base + hi, out);
  }
  return from_generators(std::move(out));
}

ClopenSet ClopenSet::complement() const { return whole().subtract(*this); }

nlohmann::json ClopenSet::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& g : generators_) arr.push_back(g.str());
  return arr;
}

ClopenSet ClopenSet::from_json(const nlohmann::json& j) {
  std::vector<BitString> gens;
  for (const auto& item : j) gens.emplace_back(item.get<std::string>());
  return from_generators(std::move(gens));
}

ClopenSet set_algebra(const ClopenSet& a, const ClopenSet& b, SetOp op) {
  switch (op) {
    case SetOp::union_:
      return a.unite(b);
    case SetOp::difference:
      return a.subtract(b);
    case SetOp::intersection:
      return a.intersect(b);
  }
  throw std::invalid_argument("set_algebra: unknown op");
}

ClopenSet carve(const ClopenSet& from, const DyadicRational& amount) {
  if (amount > from.measure()) {
    throw std::domain_error("carve: requested " + amount.to_string() + " exceeds available " + from.measure().to_string());
  }
  std::vector<BitString> order = from.generators();
  std::stable_sort(order.begin(), order.end(), [](const BitString& a, const BitString& b) { return a.size() < b.size(); });
  std::vector<BitString> taken;
  DyadicRational remaining = amount;
  for (const auto& g : order) {
    if (remaining.is_zero()) break;
    DyadicRational weight = DyadicRational::two_to(-static_cast<std::int64_t>(g.size()));
    if (weight <= remaining) {
      taken.push_back(g);
      remaining -= weight;
      continue;
    }
    // remaining / weight = 0.b1 b2 ... bE; take [g b1..b(j-1) 0] for every bj = 1,
    // i.e. the sequences in [g] whose tail lies below that fraction.
    DyadicRational fraction = remaining.scaled(static_cast<std::int64_t>(g.size()));
    std::uint64_t digits = fraction.exponent();
    BitString path = g;
    for (std::uint64_t p = 0; p < digits; ++p) {
      bool bit = fraction.binary_digit(p);
      if (bit) taken.push_back(path.child(false));
      path.push_back(bit);
    }
    remaining = DyadicRational();
  }
  return ClopenSet::from_generators(std::move(taken));
}

}  // namespace costlab
