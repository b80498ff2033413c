#include "costlab/omega.hpp"

#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "costlab/rng.hpp"

namespace costlab {

std::uint64_t KIndex::value() const {
  if (is_infinite()) throw std::logic_error("KIndex::value on infinity");
  return value_;
}

LeftCEApprox LeftCEApprox::from_values(std::vector<DyadicRational> values, DyadicRational bound) {
  if (values.empty()) throw std::invalid_argument("LeftCEApprox: no stages");
  if (!values.front().is_zero()) throw std::invalid_argument("LeftCEApprox: stage 0 must be 0");
  LeftCEApprox a;
  for (std::size_t s = 0; s < values.size(); ++s) {
    if (values[s] >= bound) {
      throw std::invalid_argument("LeftCEApprox: stage " + std::to_string(s) + " value " + values[s].to_string() +
                                  " not below bound " + bound.to_string());
    }
    if (s > 0 && values[s] < values[s - 1]) {
      throw std::invalid_argument("LeftCEApprox: decreasing at stage " + std::to_string(s));
    }
    if (s > 0 && values[s] == values[s - 1]) a.noop_stages_.push_back(s);
    a.max_exponent_ = std::max(a.max_exponent_, values[s].exponent());
  }
  a.values_ = std::move(values);
  a.bound_ = std::move(bound);
  return a;
}

const DyadicRational& LeftCEApprox::at(std::size_t s) const {
  if (s >= values_.size()) {
    throw std::out_of_range("LeftCEApprox: stage " + std::to_string(s) + " beyond horizon " + std::to_string(horizon()));
  }
  return values_[s];
}

std::vector<std::size_t> LeftCEApprox::change_stages() const {
  std::vector<std::size_t> out;
  for (std::size_t s = 1; s < values_.size(); ++s) {
    if (values_[s] != values_[s - 1]) out.push_back(s);
  }
  return out;
}

LeftCEApprox LeftCEApprox::truncated(std::size_t horizon) const {
  if (horizon > this->horizon()) throw std::out_of_range("LeftCEApprox::truncated beyond horizon");
  return from_values(std::vector<DyadicRational>(values_.begin(), values_.begin() + horizon + 1), bound_);
}

KIndex k_index(const LeftCEApprox& omega, std::size_t n, std::size_t s) {
  if (n > s) throw std::invalid_argument("k_index: n > s");
  const DyadicRational& hi = omega.at(s);
  const DyadicRational& lo = omega.at(n);
  if (hi == lo) return KIndex::infinity();
  std::int64_t k = (hi - lo).floor_neg_log2();
  if (k < 0) throw std::domain_error("k_index: gap exceeds 1");
  return KIndex::finite(static_cast<std::uint64_t>(k));
}

BitString fragment(const LeftCEApprox& omega, const ComputableSet& r, std::size_t s, std::size_t len) {
  if (s > omega.horizon()) throw std::out_of_range("fragment: stage beyond horizon");
  const DyadicRational& v = omega.at(s);
  std::string bits;
  bits.reserve(len);
  std::uint64_t position = 0;
  for (std::size_t m = 0; m < len; ++m) {
    std::uint64_t scanned = 0;
    while (!r.contains(position)) {
      if (++scanned > (1u << 22)) throw std::out_of_range("fragment: R has too few elements for length " + std::to_string(len));
      ++position;
    }
    bits.push_back(v.binary_digit(position) ? '1' : '0');
    ++position;
  }
  return BitString(bits);
}

LeftCEApprox toy_machine_stream(std::size_t horizon) {
  std::vector<DyadicRational> values(horizon + 1);
  DyadicRational running;
  const auto& table = toy_machine_table();
  std::size_t next = 0;
  for (std::size_t s = 1; s <= horizon; ++s) {
    while (next < table.size() && table[next].halting_stage == s) {
      running += DyadicRational::two_to(-static_cast<std::int64_t>(std::string_view(table[next].code).size()));
      ++next;
    }
    values[s] = running;
  }
  return LeftCEApprox::from_values(std::move(values));
}

LeftCEApprox synthetic_stream(std::uint64_t seed, std::size_t horizon, BurstProfile burst) {
  Rng rng(seed);
  const DyadicRational one(1);
  std::vector<DyadicRational> values(horizon + 1);
  for (std::size_t s = 1; s <= horizon; ++s) {
    auto log2s = static_cast<std::int64_t>(std::bit_width(s + 1)) - 1;
    std::int64_t p = 2 + 2 * log2s + static_cast<std::int64_t>(rng.below(4));
    if (burst.rate_per_1024 > 0 && rng.chance(burst.rate_per_1024, 1024)) {
      p = std::max<std::int64_t>(1, p - static_cast<std::int64_t>(burst.magnitude));
    }
    DyadicRational inc(BigInt(1 + rng.below(63)), static_cast<std::uint64_t>(p + 6));
    const DyadicRational& prev = values[s - 1];
    if (prev + inc >= one) inc = (one - prev).scaled(-1 - static_cast<std::int64_t>(rng.below(3)));
    values[s] = prev + inc;
  }
  return LeftCEApprox::from_values(std::move(values));
}

LeftCEApprox read_replay(std::istream& in, DyadicRational bound) {
  std::vector<DyadicRational> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto j = nlohmann::json::parse(line);
    auto stage = j.at("stage").get<std::size_t>();
    if (stage != values.size()) {
      throw std::invalid_argument("replay line " + std::to_string(lineno) + ": expected stage " +
                                  std::to_string(values.size()) + ", got " + std::to_string(stage));
    }
    values.push_back(DyadicRational::parse(j.at("value").get<std::string>()));
  }
  return LeftCEApprox::from_values(std::move(values), std::move(bound));
}

void write_replay(std::ostream& out, const LeftCEApprox& omega) {
  for (std::size_t s = 0; s <= omega.horizon(); ++s) {
    nlohmann::json j = {{"stage", s}, {"value", omega.at(s).to_string()}};
    out << j.dump() << '\n';
  }
}

LeftCEApprox omega_source(const OmegaSourceSpec& spec, std::size_t horizon) {
  if (spec.kind == "toy") return toy_machine_stream(horizon);
  if (spec.kind == "synthetic") return synthetic_stream(spec.seed, horizon, spec.burst);
  if (spec.kind == "replay") {
    std::ifstream in(spec.path);
    if (!in) throw std::invalid_argument("replay: cannot open '" + spec.path + "'");
    LeftCEApprox full = read_replay(in);
    return horizon < full.horizon() ? full.truncated(horizon) : full;
  }
  throw std::invalid_argument("unknown omega source '" + spec.kind + "'");
}

}  // namespace costlab
