#include "costlab/computable_set.hpp"

#include <charconv>
#include <stdexcept>

namespace costlab {

ComputableSet::ComputableSet(std::string name, Predicate membership)
    : name_(std::move(name)), membership_(std::make_shared<const Predicate>(std::move(membership))) {}

ComputableSet ComputableSet::naturals() {
  return ComputableSet("naturals", [](std::uint64_t) { return true; });
}
ComputableSet ComputableSet::evens() {
  return ComputableSet("evens", [](std::uint64_t x) { return x % 2 == 0; });
}
ComputableSet ComputableSet::odds() {
  return ComputableSet("odds", [](std::uint64_t x) { return x % 2 == 1; });
}
ComputableSet ComputableSet::empty() {
  return ComputableSet("empty", [](std::uint64_t) { return false; });
}

ComputableSet ComputableSet::finite(const std::set<std::uint64_t>& elements) {
  std::string name = "finite:";
  bool first = true;
  for (auto x : elements) {
    if (!first) name += ",";
    name += std::to_string(x);
    first = false;
  }
  return ComputableSet(name, [elements](std::uint64_t x) { return elements.count(x) > 0; });
}

std::uint64_t ComputableSet::count_below(std::uint64_t m) const {
  std::uint64_t count = 0;
  for (std::uint64_t x = 0; x < m; ++x) count += contains(x) ? 1 : 0;
  return count;
}

std::vector<std::uint64_t> ComputableSet::prefix_counts(std::uint64_t limit) const {
  std::vector<std::uint64_t> counts(limit + 1, 0);
  for (std::uint64_t m = 1; m <= limit; ++m) counts[m] = counts[m - 1] + (contains(m - 1) ? 1 : 0);
  return counts;
}

std::optional<std::uint64_t> ComputableSet::nth(std::uint64_t m, std::uint64_t scan_limit) const {
  std::uint64_t seen = 0;
  for (std::uint64_t x = 0; x < scan_limit; ++x) {
    if (!contains(x)) continue;
    if (seen == m) return x;
    ++seen;
  }
  return std::nullopt;
}

std::vector<std::uint64_t> ComputableSet::elements_below(std::uint64_t m) const {
  std::vector<std::uint64_t> out;
  for (std::uint64_t x = 0; x < m; ++x) {
    if (contains(x)) out.push_back(x);
  }
  return out;
}

ComputableSet ComputableSet::complement() const {
  auto inner = membership_;
  return ComputableSet("not:" + name_, [inner](std::uint64_t x) { return !(*inner)(x); });
}

ComputableSet column_union(const std::set<unsigned>& t, unsigned n) {
  if (n == 0) throw std::invalid_argument("column_union: n must be at least 1");
  if (t.empty()) throw std::invalid_argument("column_union: T must be nonempty");
  std::vector<bool> residues(n, false);
  std::string name = "cols:";
  bool first = true;
  for (unsigned j : t) {
    if (j < 1 || j > n) throw std::invalid_argument("column_union: T must lie in {1..n}");
    residues[j - 1] = true;
    if (!first) name += ",";
    name += std::to_string(j);
    first = false;
  }
  name += "/" + std::to_string(n);
  return ComputableSet(name, [residues, n](std::uint64_t x) { return residues[x % n]; });
}

namespace {

std::uint64_t parse_natural(std::string_view text) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("set spec: bad number '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::uint64_t> parse_list(std::string_view text) {
  std::vector<std::uint64_t> out;
  while (!text.empty()) {
    auto comma = text.find(',');
    out.push_back(parse_natural(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

ComputableSet parse_set_spec(std::string_view spec) {
  if (spec == "naturals" || spec == "N") return ComputableSet::naturals();
  if (spec == "evens") return ComputableSet::evens();
  if (spec == "odds") return ComputableSet::odds();
  if (spec == "empty") return ComputableSet::empty();
  if (spec.substr(0, 4) == "not:") return parse_set_spec(spec.substr(4)).complement();
  if (spec.substr(0, 3) == "or:") {
    std::string_view body = spec.substr(3);
    auto bar = body.find('|');
    if (bar == std::string_view::npos) throw std::invalid_argument("set spec: or: needs two parts");
    ComputableSet a = parse_set_spec(body.substr(0, bar));
    ComputableSet b = parse_set_spec(body.substr(bar + 1));
    return ComputableSet("or:" + a.name() + "|" + b.name(),
                         [a, b](std::uint64_t x) { return a.contains(x) || b.contains(x); });
  }
  if (spec.substr(0, 7) == "finite:") {
    auto items = parse_list(spec.substr(7));
    return ComputableSet::finite(std::set<std::uint64_t>(items.begin(), items.end()));
  }
  if (spec.substr(0, 5) == "cols:") {
    std::string_view body = spec.substr(5);
    auto slash = body.find('/');
    if (slash == std::string_view::npos) throw std::invalid_argument("set spec: cols: needs /n");
    auto cols = parse_list(body.substr(0, slash));
    std::set<unsigned> t;
    for (auto c : cols) t.insert(static_cast<unsigned>(c));
    return column_union(t, static_cast<unsigned>(parse_natural(body.substr(slash + 1))));
  }
  throw std::invalid_argument("unknown set spec '" + std::string(spec) + "'");
}

}  // namespace costlab
