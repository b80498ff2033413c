#include "costlab/functional.hpp"

#include <algorithm>

namespace costlab {

namespace {

// Latest output recorded at or before stage s.
const BitString* output_at(const std::vector<std::pair<std::uint64_t, BitString>>& entries, std::uint64_t s) {
  auto it = std::upper_bound(entries.begin(), entries.end(), s,
                             [](std::uint64_t stage, const auto& e) { return stage < e.first; });
  if (it == entries.begin()) return nullptr;
  return &std::prev(it)->second;
}

}  // namespace

FiniteFunctional FiniteFunctional::identity() {
  FiniteFunctional f;
  f.identity_ = true;
  return f;
}

bool FiniteFunctional::consistent_with(const Axiom& axiom) const {
  if (identity_) return false;
  for (const auto& [oracle, entries] : by_oracle_) {
    if (!oracle.comparable(axiom.oracle)) continue;
    const BitString& out = entries.back().second;
    if (!out.comparable(axiom.output)) return false;
    if (oracle.is_prefix_of(axiom.oracle) && axiom.output.size() < out.size()) return false;
    if (oracle != axiom.oracle && axiom.oracle.is_prefix_of(oracle) && out.size() < axiom.output.size()) return false;
  }
  return true;
}

void FiniteFunctional::add(Axiom axiom) {
  if (identity_) throw InconsistentAxiom("identity functional takes no axioms");
  if (!log_.empty() && axiom.stage < log_.back().stage) {
    throw InconsistentAxiom("axiom stage " + std::to_string(axiom.stage) + " precedes stage " +
                            std::to_string(log_.back().stage));
  }
  if (!consistent_with(axiom)) {
    throw InconsistentAxiom("axiom " + axiom.oracle.str() + " -> " + axiom.output.str() + " conflicts");
  }
  by_oracle_[axiom.oracle].emplace_back(axiom.stage, axiom.output);
  log_.push_back(std::move(axiom));
}

bool FiniteFunctional::try_add(const Axiom& axiom) {
  if (identity_ || (!log_.empty() && axiom.stage < log_.back().stage) || !consistent_with(axiom)) return false;
  add(axiom);
  return true;
}

BitString FiniteFunctional::eval(std::uint64_t s, const BitString& sigma) const {
  if (identity_) return sigma;
  BitString best;
  for (std::size_t len = 0; len <= sigma.size(); ++len) {
    auto it = by_oracle_.find(sigma.prefix(len));
    if (it == by_oracle_.end()) continue;
    const BitString* out = output_at(it->second, s);
    if (out != nullptr && out->size() > best.size()) best = *out;
  }
  return best;
}

std::optional<std::size_t> FiniteFunctional::use(std::uint64_t s, const BitString& sigma, std::size_t n) const {
  if (identity_) return n < sigma.size() ? std::optional<std::size_t>(n + 1) : std::nullopt;
  for (std::size_t len = 0; len <= sigma.size(); ++len) {
    auto it = by_oracle_.find(sigma.prefix(len));
    if (it == by_oracle_.end()) continue;
    const BitString* out = output_at(it->second, s);
    if (out != nullptr && out->size() > n) return len;
  }
  return std::nullopt;
}

std::vector<std::pair<BitString, BitString>> FiniteFunctional::current_outputs(std::uint64_t s) const {
  if (identity_) throw std::logic_error("current_outputs: identity functional has no finite axiom list");
  std::vector<std::pair<BitString, BitString>> out;
  for (const auto& [oracle, entries] : by_oracle_) {
    if (const BitString* o = output_at(entries, s)) out.emplace_back(oracle, *o);
  }
  return out;
}

nlohmann::json FiniteFunctional::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& a : log_) arr.push_back({{"stage", a.stage}, {"oracle", a.oracle.str()}, {"output", a.output.str()}});
  return arr;
}

FiniteFunctional FiniteFunctional::from_json(const nlohmann::json& j) {
  FiniteFunctional f;
  for (const auto& item : j) {
    f.add({item.at("stage").get<std::uint64_t>(), BitString(item.at("oracle").get<std::string>()),
           BitString(item.at("output").get<std::string>())});
  }
  return f;
}

ClopenSet preimage(const FiniteFunctional& f, std::uint64_t s, const BitString& sigma) {
  if (f.is_identity()) return ClopenSet::cylinder(sigma);
  std::vector<BitString> gens;
  for (const auto& [oracle, out] : f.current_outputs(s)) {
    if (sigma.is_prefix_of(out)) gens.push_back(oracle);
  }
  return ClopenSet::from_generators(std::move(gens));
}

ClopenSet error_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target) {
  std::vector<BitString> gens;
  if (f.is_identity()) {
    for (std::size_t i = 0; i < target.size(); ++i) {
      if (target[i]) gens.push_back(target.prefix(i).child(false));
    }
    return ClopenSet::from_generators(std::move(gens));
  }
  for (const auto& [oracle, out] : f.current_outputs(s)) {
    if (lies_left_of_padded(out, target)) gens.push_back(oracle);
  }
  return ClopenSet::from_generators(std::move(gens));
}

ClopenSet disagreement_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target) {
  if (f.is_identity()) return ClopenSet::cylinder(target).complement();
  std::vector<BitString> gens;
  for (const auto& [oracle, out] : f.current_outputs(s)) {
    if (!agrees_with_padded(out, target)) gens.push_back(oracle);
  }
  return ClopenSet::from_generators(std::move(gens));
}

ClopenSet prefix_set(const FiniteFunctional& f, std::uint64_t s, const BitString& target, std::size_t min_length) {
  if (f.is_identity()) throw std::logic_error("prefix_set: undefined for the identity functional");
  std::vector<BitString> good;
  std::vector<BitString> bad;
  for (const auto& [oracle, out] : f.current_outputs(s)) {
    if (!agrees_with_padded(out, target)) {
      bad.push_back(oracle);
    } else if (out.size() >= min_length) {
      good.push_back(oracle);
    }
  }
  return ClopenSet::from_generators(std::move(good)).subtract(ClopenSet::from_generators(std::move(bad)));
}

ClopenSet u_set(const FiniteFunctional& f, std::uint64_t s, const BitString& sigma) {
  if (sigma.empty()) return {};
  return preimage(f, s, hat(sigma));
}

SolovayAssembly solovay_assembly(const FiniteFunctional& f, const Approximation& a) {
  SolovayAssembly result;
  result.b.resize(a.stages() == 0 ? 0 : a.stages() - 1);
  for (std::size_t s = 0; s + 1 < a.stages(); ++s) {
    auto n = a.least_change(s + 1);
    if (!n) continue;
    result.b[s] = u_set(f, s, a.at(s).prefix(*n + 1));
    result.total += result.b[s].measure();
  }
  return result;
}

std::vector<Axiom> DelayQueue::release(const BitString& target) {
  std::vector<Axiom> out;
  std::deque<Axiom> keep;
  for (auto& a : held_) {
    if (lies_left_of_padded(target.padded_prefix(std::max(target.size(), a.output.size())), a.output)) {
      keep.push_back(std::move(a));
    } else {
      out.push_back(std::move(a));
    }
  }
  held_ = std::move(keep);
  return out;
}

void DelayQueue::check_immediate(const Axiom& axiom, const BitString& target) {
  if (lies_left_of_padded(target.padded_prefix(std::max(target.size(), axiom.output.size())), axiom.output)) {
    throw DelayContractViolation("axiom " + axiom.oracle.str() + " -> " + axiom.output.str() +
                                 " lies right of target " + target.str());
  }
}

}  // namespace costlab
