// costlab: batch front-end for the cost-function laboratory.
//
// Exit codes: 0 when every verdict passes, 1 on an invariant violation (the
// first failing witness goes to stderr), 2 on usage or input errors.

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "costlab/benign_fragment.hpp"
#include "costlab/capture.hpp"
#include "costlab/criterion.hpp"
#include "costlab/obedient.hpp"
#include "costlab/ravenous.hpp"
#include "costlab/shift.hpp"
#include "costlab/smart.hpp"
#include "json_config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace costlab;

namespace {

constexpr int kPass = 0;
constexpr int kViolation = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct SourceOptions {
  std::string kind = "toy";
  std::uint64_t seed = 0;
  std::uint64_t burst_rate = 0;
  std::uint64_t burst_magnitude = 0;
  std::string replay;

  OmegaSourceSpec spec(std::uint64_t seed_override) const {
    OmegaSourceSpec s;
    s.kind = kind;
    s.seed = seed_override;
    s.burst = {burst_rate, burst_magnitude};
    s.path = replay;
    return s;
  }
  json to_json(std::uint64_t seed_used) const {
    json j = {{"kind", kind}, {"seed", seed_used}};
    if (burst_rate != 0) j["burst"] = {{"rate_per_1024", burst_rate}, {"magnitude", burst_magnitude}};
    if (!replay.empty()) j["replay"] = replay;
    return j;
  }
};

void add_source(CLI::App* cmd, SourceOptions& o) {
  cmd->add_option("--source", o.kind, "Omega source")->check(CLI::IsMember({"toy", "synthetic", "replay"}));
  cmd->add_option("--seed", o.seed, "Seed for seeded sources and adversaries");
  cmd->add_option("--burst-rate", o.burst_rate, "Synthetic burst chance per stage, in 1/1024");
  cmd->add_option("--burst-magnitude", o.burst_magnitude, "Synthetic burst size in halvings");
  cmd->add_option("--replay", o.replay, "Replay file of {stage, value} lines");
}

DyadicRational dyadic(const std::string& text, const std::string& what) {
  try {
    return DyadicRational::parse(text);
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

ComputableSet set_spec(const std::string& text, const std::string& what) {
  try {
    return parse_set_spec(text);
  } catch (const std::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

// omega | zero | fragment:<set> | power:<k>/<n>
CostFunction cost_spec(const std::string& text, const LeftCEApprox& omega) {
  if (text == "omega") return c_omega(omega);
  if (text == "zero") return c_zero();
  if (text.rfind("fragment:", 0) == 0) return c_fragment(omega, set_spec(text.substr(9), "cost"));
  if (text.rfind("power:", 0) == 0) {
    unsigned k = 0, n = 0;
    char slash = 0;
    std::istringstream in(text.substr(6));
    if (in >> k >> slash >> n && slash == '/' && in.peek() == EOF && k >= 1 && k <= n) return c_power_profile(omega, k, n);
  }
  throw UsageError("cost: expected omega, zero, fragment:<set> or power:<k>/<n>, got '" + text + "'");
}

std::pair<std::uint64_t, std::uint64_t> seed_range(const std::string& text) {
  auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      auto s = std::stoull(text);
      return {s, s};
    }
    auto lo = std::stoull(text.substr(0, colon)), hi = std::stoull(text.substr(colon + 1));
    if (lo <= hi) return {lo, hi};
  } catch (const std::exception&) {
  }
  throw UsageError("--seeds: expected A or A:B with A <= B, got '" + text + "'");
}

void print_failure(const std::string& label, const StageTrace& trace) {
  const auto& f = trace.first_failure();
  std::cerr << label << ": violation of " << f->invariant << " at stage " << f->stage << ": " << f->witness.dump()
            << '\n';
}

// Exact when short, else the bracket 2^-(k+1) < v <= 2^-k.
std::string brief(const DyadicRational& v) {
  std::string exact = v.to_string();
  if (exact.size() <= 40 || v.is_zero()) return exact;
  return "in (2^-" + std::to_string(v.floor_neg_log2() + 1) + ", 2^-" + std::to_string(v.floor_neg_log2()) + "]";
}

struct RunRecord {
  std::uint64_t seed = 0;
  json headline;
  StageTrace trace;
};

struct OutputOptions {
  std::string out;
  std::string seeds;
  unsigned jobs = 1;
  bool quiet = false;
};

void add_output(CLI::App* cmd, OutputOptions& o, bool seeded) {
  cmd->add_option("--out", o.out, "Directory for <name>.trace.jsonl and <name>.summary.csv");
  cmd->add_flag("--quiet", o.quiet, "Only report violations");
  if (seeded) {
    cmd->add_option("--seeds", o.seeds, "Seed range A:B; one run per seed, overriding --seed");
    cmd->add_option("--jobs", o.jobs, "Worker threads for a seed range")->check(CLI::PositiveNumber);
  }
}

void write_outputs(const std::string& dir, const std::string& stem, const json& config, const StageTrace& trace) {
  fs::create_directories(dir);
  std::ofstream jsonl(fs::path(dir) / (stem + ".trace.jsonl"), std::ios::binary);
  jsonl << json{{"stage", 0}, {"kind", "config"}, {"payload", config}}.dump() << '\n';
  trace.write_jsonl(jsonl);
  std::ofstream csv(fs::path(dir) / (stem + ".summary.csv"), std::ios::binary);
  trace.write_summary_csv(csv);
  if (!jsonl || !csv) throw std::runtime_error("cannot write outputs under '" + dir + "'");
}

// Runs one construction per seed, fanning out over --jobs workers, and
// reports in seed order.
int run_seeds(const std::string& name, const OutputOptions& out, std::uint64_t default_seed,
              const std::function<json(std::uint64_t)>& config_of,
              const std::function<RunRecord(std::uint64_t)>& run_one) {
  auto [lo, hi] = out.seeds.empty() ? std::pair{default_seed, default_seed} : seed_range(out.seeds);
  const bool many = !out.seeds.empty();
  std::vector<std::optional<RunRecord>> records(hi - lo + 1);
  std::vector<std::string> errors(records.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < records.size(); i = next++) {
      try {
        records[i] = run_one(lo + i);
        records[i]->seed = lo + i;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  unsigned workers = std::min<std::size_t>(std::max(1u, out.jobs), records.size());
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kPass;
  for (std::size_t i = 0; i < records.size(); ++i) {
    std::uint64_t seed = lo + i;
    std::string label = name + (many ? " seed " + std::to_string(seed) : "");
    if (!records[i]) {
      std::cerr << label << ": error: " << errors[i] << '\n';
      return kUsage;
    }
    const RunRecord& r = *records[i];
    if (!out.out.empty()) {
      write_outputs(out.out, many ? name + "-seed" + std::to_string(seed) : name, config_of(seed), r.trace);
    }
    bool ok = !r.trace.violated();
    if (!ok) {
      print_failure(label, r.trace);
      code = kViolation;
    }
    if (!out.quiet) {
      std::cout << label << ": " << (ok ? "pass" : "FAIL") << " (" << r.trace.verdict_count() << " checks) "
                << r.headline.dump() << '\n';
    }
  }
  return code;
}

// ---- omega -----------------------------------------------------------------

struct OmegaCmd {
  SourceOptions source;
  std::size_t horizon = 100;
  bool values = false;
  std::vector<std::size_t> k;
  std::string fragment_set;
  std::size_t fragment_len = 32;
  std::string write_replay_path;

  void attach(CLI::App& app, std::function<int()>& action) {
    auto* cmd = app.add_subcommand("omega", "Inspect an omega approximation");
    add_source(cmd, source);
    cmd->add_option("--horizon", horizon, "Last stage")->check(CLI::PositiveNumber);
    cmd->add_flag("--values", values, "Print every stage as a replay line");
    cmd->add_option("--k", k, "Print k_s(n) for the pair n s")->expected(2);
    cmd->add_option("--fragment", fragment_set, "Print the fragment of the final value on this set");
    cmd->add_option("--len", fragment_len, "Fragment length");
    cmd->add_option("--write-replay", write_replay_path, "Write the stream as a replay file");
    cmd->callback([this, &action] { action = [this] { return run(); }; });
  }

  int run() const {
    LeftCEApprox omega = omega_source(source.spec(source.seed), horizon);
    if (values) write_replay(std::cout, omega);
    if (!write_replay_path.empty()) {
      std::ofstream f(write_replay_path, std::ios::binary);
      write_replay(f, omega);
    }
    if (!k.empty()) {
      std::cout << "k_" << k[1] << "(" << k[0] << ") = " << k_index(omega, k[0], k[1]).to_string() << '\n';
    }
    if (!fragment_set.empty()) {
      std::cout << fragment(omega, set_spec(fragment_set, "--fragment"), omega.horizon(), fragment_len).str() << '\n';
    }
    if (!values && k.empty() && fragment_set.empty()) {
      json j = {{"source", source.to_json(source.seed)},
                {"horizon", omega.horizon()},
                {"final", omega.at(omega.horizon()).to_string()},
                {"changes", omega.change_stages().size()},
                {"noops", omega.noop_stages().size()},
                {"expansion", omega.at(omega.horizon()).binary_prefix(48).str()}};
      std::cout << j.dump(2) << '\n';
    }
    return kPass;
  }
};

// ---- costfn ----------------------------------------------------------------

struct CostfnCmd {
  SourceOptions source;
  std::size_t horizon = 200;
  std::string cost = "omega";
  std::string against;
  std::string csv;

  void attach(CLI::App& app, std::function<int()>& action) {
    auto* cmd = app.add_subcommand("costfn", "Evaluate and audit a cost function");
    add_source(cmd, source);
    cmd->add_option("--horizon", horizon, "Last stage")->check(CLI::PositiveNumber);
    cmd->add_option("--cost", cost, "omega, zero, fragment:<set> or power:<k>/<n>");
    cmd->add_option("--against", against, "Report the constant with which --cost dominates this cost");
    cmd->add_option("--csv", csv, "Write the table x,s,value");
    cmd->callback([this, &action] { action = [this] { return run(); }; });
  }

  int run() const {
    LeftCEApprox omega = omega_source(source.spec(source.seed), horizon);
    CostFunction c = cost_spec(cost, omega);
    if (!csv.empty()) {
      std::ofstream f(csv, std::ios::binary);
      write_cost_csv(f, c, horizon);
    }
    auto mono = check_monotone(c, horizon);
    auto limit = limit_profile(c, horizon);
    json j = {{"cost", c.name()},
              {"monotone", mono.ok},
              {"checks", mono.checks},
              {"limit_nonincreasing", limit.nonincreasing},
              {"tail_max", limit.tail_max.to_string()}};
    if (!against.empty()) j["dominates"] = dominates(c, cost_spec(against, omega), horizon).to_json();
    std::cout << j.dump(2) << '\n';
    if (!mono.ok) {
      std::cerr << "costfn: " << mono.failed_condition << " at (x, s) = (" << mono.witness->first << ", "
                << mono.witness->second << ")\n";
      return kViolation;
    }
    return kPass;
  }
};

// ---- construct -------------------------------------------------------------

struct ConstructCmd {
  SourceOptions source;
  OutputOptions out;
  std::size_t horizon = 0;  // 0: construction default

  // smart
  std::string schedule = "seeded";
  std::size_t max_output = 32;
  std::string cost = "omega";
  bool no_floor = false;
  // shift
  unsigned strategies = 4;
  std::vector<std::size_t> delays{1};
  std::size_t lag = 0;
  std::string family = "mirror";
  std::string d_set = "odds";
  // obedient
  unsigned requirements = 6;
  std::uint64_t start_gap = 10;
  // capture, noncapture, ravenous
  std::string r = "evens";
  std::string s_set = "naturals";
  std::size_t probe = 50;
  std::int64_t k_corruption = 0;
  std::string eps = "1/2^6";
  std::string test_schedule = "clipped-join";
  // benign-r
  std::string delta = "1/2^1";
  std::uint64_t m_limit = 4096;
  std::string benign_cost = "coupled-omega";
  // ravenous
  unsigned k_max = 3;
  std::size_t width = 24;
  std::uint64_t rate = 48;
  std::string phi = "seeded";

  std::size_t horizon_or(std::size_t fallback) const { return horizon == 0 ? fallback : horizon; }

  CLI::App* leaf(CLI::App* parent, const std::string& name, const std::string& what, bool seeded) {
    auto* cmd = parent->add_subcommand(name, what);
    add_source(cmd, source);
    add_output(cmd, out, seeded);
    cmd->add_option("--horizon", horizon, "Last stage")->check(CLI::PositiveNumber);
    return cmd;
  }

  void attach(CLI::App& app, std::function<int()>& action) {
    auto* construct = app.add_subcommand("construct", "Run a stage-by-stage construction");
    construct->require_subcommand(1);

    auto* smart = leaf(construct, "smart", "A c.e. set smart for c against a Upsilon schedule", true);
    smart->add_option("--schedule", schedule, "empty or seeded")->check(CLI::IsMember({"empty", "seeded"}));
    smart->add_option("--max-output", max_output, "Width of A")->check(CLI::Range(2, 256));
    smart->add_option("--cost", cost, "omega, zero, fragment:<set> or power:<k>/<n>");
    smart->add_flag("--no-floor", no_floor, "Charge c(x, s) without the 2^-x floor");
    smart->callback([this, &action] { action = [this] { return run_smart_cmd(); }; });

    auto* shift = leaf(construct, "shift", "A obeys c while its shift does not", false);
    shift->add_option("--strategies", strategies, "Number of strategies")->check(CLI::Range(1, 16));
    shift->add_option("--delays", delays, "Mirror delays, one per strategy or one for all")->delimiter(',');
    shift->add_option("--lag", lag, "Visibility lag of every mirror");
    shift->add_option("--family", family, "mirror or partial")->check(CLI::IsMember({"mirror", "partial"}));
    shift->add_option("--d", d_set, "d = c_fragment over this set");
    shift->callback([this, &action] { action = [this] { return run_shift_cmd(); }; });

    auto* obedient = leaf(construct, "obedient", "Simple-set requirements under a cost ceiling", false);
    obedient->add_option("--requirements", requirements, "W_e = [0, horizon) from stage gap*e + 1");
    obedient->add_option("--start-gap", start_gap, "Stages between requirement arrivals");
    obedient->add_option("--cost", cost, "omega, zero, fragment:<set> or power:<k>/<n>");
    obedient->callback([this, &action] { action = [this] { return run_obedient_cmd(); }; });

    auto* capture = leaf(construct, "capture", "The fragment test capturing Omega_R", false);
    capture->add_option("--r", r, "Fragment set");
    capture->add_option("--probe", probe, "Levels n = 0..probe");
    capture->add_option("--k-corruption", k_corruption, "Negative control: shift k_T(n) in the bound audit");
    capture->callback([this, &action] { action = [this] { return run_capture_cmd(); }; });

    auto* noncapture = leaf(construct, "noncapture", "An open set of measure <= eps avoiding capture", true);
    noncapture->add_option("--s", s_set, "The set S");
    noncapture->add_option("--r", r, "The set R");
    noncapture->add_option("--eps", eps, "Measure bound, a dyadic m/2^e");
    noncapture->add_option("--schedule", test_schedule, "clipped-join or empty")
        ->check(CLI::IsMember({"clipped-join", "empty"}));
    noncapture->callback([this, &action] { action = [this] { return run_noncapture_cmd(); }; });

    auto* benign = leaf(construct, "benign-r", "A fragment set R with c_{Omega,R} above a benign c", false);
    benign->add_option("--delta", delta, "A power of two");
    benign->add_option("--m-limit", m_limit, "Largest m_i listed in R");
    benign->add_option("--cost", benign_cost, "coupled-omega or zero")
        ->check(CLI::IsMember({"coupled-omega", "zero"}));
    benign->callback([this, &action] { action = [this] { return run_benign_cmd(); }; });

    auto* ravenous = leaf(construct, "ravenous", "Ravenous sets V^k_n against a c.e. A", true);
    ravenous->add_option("--r", r, "The set R; U is the capture test on its complement");
    ravenous->add_option("--k-max", k_max, "Levels k = 1..k_max")->check(CLI::Range(1, 8));
    ravenous->add_option("--width", width, "Width of the seeded A");
    ravenous->add_option("--rate", rate, "Enumeration chance per stage, in 1/1024");
    ravenous->add_option("--phi", phi, "seeded or identity")->check(CLI::IsMember({"seeded", "identity"}));
    ravenous->callback([this, &action] { action = [this] { return run_ravenous_cmd(); }; });
  }

  json base_config(const std::string& name, std::uint64_t seed, std::size_t h) const {
    return {{"construction", name}, {"source", source.to_json(seed)}, {"horizon", h}};
  }

  int single(const std::string& name, const json& config, const StageTrace& trace, const json& headline) const {
    OutputOptions o = out;
    o.seeds.clear();
    return run_seeds(
        name, o, source.seed, [&](std::uint64_t) { return config; },
        [&](std::uint64_t) { return RunRecord{0, headline, trace}; });
  }

  int run_smart_cmd() const {
    std::size_t h = horizon_or(500);
    auto config = [this, h](std::uint64_t seed) {
      json j = base_config("smart", seed, h);
      j["schedule"] = schedule;
      j["max_output"] = max_output;
      j["cost"] = cost;
      j["floor"] = !no_floor;
      return j;
    };
    auto one = [this, h](std::uint64_t seed) {
      LeftCEApprox omega = omega_source(source.spec(seed), h);
      CostFunction c = cost_spec(cost, omega);
      UpsilonSchedule sched = schedule == "empty" ? empty_upsilon_schedule() : seeded_upsilon_schedule(seed, max_output);
      SmartResult res = run_smart(c, sched, {h, max_output, !no_floor});
      json head = {{"A", res.a},
                   {"enumerations", res.enumerations},
                   {"total_cost", res.total_cost.to_string()},
                   {"final_error", res.final_error.to_string()}};
      return RunRecord{seed, head, std::move(res.trace)};
    };
    return run_seeds("smart", out, source.seed, config, one);
  }

  std::vector<EnumerationScript> shift_family() const {
    if (delays.empty() || (delays.size() != 1 && delays.size() != strategies)) {
      throw UsageError("--delays: give one delay or one per strategy");
    }
    std::vector<EnumerationScript> fam;
    for (unsigned e = 0; e < strategies; ++e) {
      std::size_t d = delays.size() == 1 ? delays[0] : delays[e];
      if (d == 0) throw UsageError("--delays: delays are at least 1");
      fam.push_back(family == "mirror" ? EnumerationScript::mirror(d, lag) : EnumerationScript::partial(d));
    }
    return fam;
  }

  int run_shift_cmd() const {
    std::size_t h = horizon_or(1000);
    auto fam = shift_family();
    LeftCEApprox omega = omega_source(source.spec(source.seed), h);
    ShiftResult res = run_shift(c_fragment(omega, set_spec(d_set, "--d")), fam, {h});
    json strat = json::array();
    for (const auto& st : res.strategies) {
      strat.push_back({{"e", st.e},
                       {"step", st.step},
                       {"cycles", st.cycles},
                       {"enumerations", st.enumerations},
                       {"ledger", st.ledger.to_string()},
                       {"terminated", st.terminated}});
    }
    json config = base_config("shift", source.seed, h);
    json scripts = json::array();
    for (const auto& f : fam) scripts.push_back(f.describe());
    config["family"] = scripts;
    config["d"] = d_set;
    json head = {{"A", res.a}, {"a_cost", res.a_cost.to_string()}, {"strategies", strat}};
    return single("shift", config, res.trace, head);
  }

  int run_obedient_cmd() const {
    std::size_t h = horizon_or(500);
    LeftCEApprox omega = omega_source(source.spec(source.seed), h);
    std::vector<CeScript> fam;
    for (unsigned e = 0; e < requirements; ++e) fam.push_back(ce_from_stage(start_gap * e + 1, h));
    ObedientResult res = run_obedient_ce(cost_spec(cost, omega), fam, h);
    json config = base_config("obedient", source.seed, h);
    config["requirements"] = requirements;
    config["start_gap"] = start_gap;
    config["cost"] = cost;
    json head = {{"A", res.a}, {"total", res.total.to_string()}, {"met", res.met}};
    return single("obedient", config, res.trace, head);
  }

  int run_capture_cmd() const {
    std::size_t h = horizon_or(2000);
    LeftCEApprox omega = omega_source(source.spec(source.seed), h);
    CaptureResult res = build_capture_test(omega, set_spec(r, "--r"), {probe, k_corruption});
    json mu = json::array();
    for (const auto& u : res.u) mu.push_back(u.measure().to_string());
    json config = base_config("capture", source.seed, h);
    config["r"] = r;
    config["probe"] = probe;
    config["k_corruption"] = k_corruption;
    json head = {{"max_prefixes", *std::max_element(res.distinct_prefixes.begin(), res.distinct_prefixes.end())},
                 {"measure_last", mu.back()}};
    return single("capture", config, res.trace, head);
  }

  int run_noncapture_cmd() const {
    std::size_t h = horizon_or(2000);
    DyadicRational e = dyadic(eps, "--eps");
    ComputableSet s = set_spec(s_set, "--s"), rr = set_spec(r, "--r");
    auto config = [this, h](std::uint64_t seed) {
      json j = base_config("noncapture", seed, h);
      j["s"] = s_set;
      j["r"] = r;
      j["eps"] = eps;
      j["schedule"] = test_schedule;
      return j;
    };
    auto one = [&, h](std::uint64_t seed) {
      LeftCEApprox omega = omega_source(source.spec(seed), h);
      TestSchedule u = test_schedule == "empty" ? empty_test_schedule() : clipped_join_schedule(omega, s, rr);
      NoncaptureResult res = build_noncapture_open(u, s, rr, omega, e);
      json head = {{"mu_V", brief(res.v.measure())}, {"relocations", res.relocations}};
      head["k"] = res.k ? json(*res.k) : json(nullptr);
      if (!res.k) head["report"] = res.report;
      return RunRecord{seed, head, std::move(res.trace)};
    };
    return run_seeds("noncapture", out, source.seed, config, one);
  }

  int run_benign_cmd() const {
    std::size_t h = horizon_or(2000);
    DyadicRational d = dyadic(delta, "--delta");
    if (!d.is_power_of_two()) throw UsageError("--delta: must be a power of two");
    LeftCEApprox base = omega_source(source.spec(source.seed), h);
    CoupledCost c = benign_cost == "zero" ? uncoupled(c_zero()) : coupled_c_omega();
    BenignFragmentResult res = benign_to_fragment(c, reciprocal_bound(), base, {h, d, m_limit});
    json config = base_config("benign-r", source.seed, h);
    config["delta"] = delta;
    config["m_limit"] = m_limit;
    config["cost"] = benign_cost;
    // Only the i that ever fired; the full lists are in the trace.
    std::size_t used = res.fires_per_i.size();
    while (used > 0 && res.fires_per_i[used - 1] == 0) --used;
    json head = {{"m", std::vector<std::uint64_t>(res.m.begin(), res.m.begin() + std::min(used, res.m.size()))},
                 {"fires_per_i", std::vector<std::size_t>(res.fires_per_i.begin(), res.fires_per_i.begin() + used)},
                 {"m_listed", res.m.size()}};
    if (res.beta) head["beta_T"] = res.beta->at(res.beta->horizon()).to_string();
    return single("benign-r", config, res.trace, head);
  }

  int run_ravenous_cmd() const {
    std::size_t h = horizon_or(300);
    ComputableSet rr = set_spec(r, "--r");
    auto config = [this, h](std::uint64_t seed) {
      json j = base_config("ravenous", seed, h);
      j["r"] = r;
      j["k_max"] = k_max;
      j["width"] = width;
      j["rate"] = rate;
      j["phi"] = phi;
      return j;
    };
    auto one = [&, h](std::uint64_t seed) {
      LeftCEApprox omega = omega_source(source.spec(seed), h);
      Approximation a = seeded_ce_approximation(seed * 7919, h, width, rate);
      FiniteFunctional f = phi == "identity" ? FiniteFunctional::identity() : seeded_functional(seed, a, h);
      TestSchedule u = clipped_capture_schedule(omega, rr.complement());
      RavenousResult res = run_ravenous(rr, u, f, a, omega, {k_max, h});
      json levels = json::array();
      for (const auto& l : res.levels) {
        json lj = {{"k", l.k}, {"f_steps", l.f.size()}, {"total_cost", l.total_cost.to_string()},
                   {"error_measure", l.error_measure.to_string()}};
        lj["truncated_at"] = l.truncated_at ? json(*l.truncated_at) : json(nullptr);
        levels.push_back(lj);
      }
      return RunRecord{seed, {{"levels", levels}}, std::move(res.trace)};
    };
    return run_seeds("ravenous", out, source.seed, config, one);
  }
};

// ---- check -----------------------------------------------------------------

struct CheckCmd {
  SourceOptions source;
  std::size_t horizon = 0;
  std::string r = "evens";
  std::string s = "naturals";
  std::string kind = "omega";
  std::string eps = "1/2^3";
  std::size_t search = 0;

  void attach(CLI::App& app, std::function<int()>& action) {
    auto* check = app.add_subcommand("check", "One-shot checks");
    check->require_subcommand(1);

    auto* crit = check->add_subcommand("criterion", "Estimate max_m |S∩m| - |R∩m| up to the horizon");
    crit->add_option("--r", r, "The set R");
    crit->add_option("--s", s, "The set S");
    crit->add_option("--horizon", horizon, "M")->check(CLI::PositiveNumber);
    crit->callback([this, &action] {
      action = [this] {
        auto rep = criterion_check(set_spec(r, "--r"), set_spec(s, "--s"), horizon == 0 ? 1u << 16 : horizon);
        std::cout << rep.to_json().dump(2) << '\n';
        return kPass;
      };
    });

    auto* prod = check->add_subcommand("product-identity", "c_{Omega,R} c_{Omega,co-R} = 2^-k_s(n)");
    add_source(prod, source);
    prod->add_option("--r", r, "The set R");
    prod->add_option("--horizon", horizon, "All n < s <= horizon")->check(CLI::PositiveNumber);
    prod->callback([this, &action] {
      action = [this] {
        std::size_t h = horizon == 0 ? 500 : horizon;
        LeftCEApprox omega = omega_source(source.spec(source.seed), h);
        auto rep = product_identity_check(omega, set_spec(r, "--r"), h);
        std::cout << json{{"r", r}, {"horizon", h}, {"checks", rep.checks}, {"pass", rep.pass}}.dump() << '\n';
        if (!rep.pass) {
          std::cerr << "product-identity: fails at (n, s) = (" << rep.witness->first << ", " << rep.witness->second
                    << ")\n";
          return kViolation;
        }
        return kPass;
      };
    });

    auto* benign = check->add_subcommand("benign-bound", "Benignity bound, optionally audited by exhaustive search");
    add_source(benign, source);
    benign->add_option("--kind", kind, "omega or fragment")->check(CLI::IsMember({"omega", "fragment"}));
    benign->add_option("--r", r, "Fragment set");
    benign->add_option("--eps", eps, "A dyadic m/2^e");
    benign->add_option("--search", search, "Search the source up to this stage for a longest sequence");
    benign->callback([this, &action] { action = [this] { return run_benign_bound(); }; });
  }

  int run_benign_bound() const {
    DyadicRational e = dyadic(eps, "--eps");
    if (e.is_zero()) throw UsageError("--eps: must be positive");
    ComputableSet rr = set_spec(r, "--r");
    BenignKind k = kind == "omega" ? BenignKind::omega : BenignKind::fragment;
    BigInt bound = benign_bound(k, e, &rr);
    json j = {{"kind", kind}, {"eps", e.to_string()}, {"bound", bound.str()}};
    if (kind == "fragment") j["r"] = r;
    int code = kPass;
    if (search > 0) {
      LeftCEApprox omega = omega_source(source.spec(source.seed), search);
      CostFunction c = kind == "omega" ? c_omega(omega) : c_fragment(omega, rr);
      auto seq = longest_benign_sequence(c, e, search);
      auto verdict = benign_witness_verify(c, e, seq, bound);
      json pairs = json::array();
      for (const auto& p : seq) pairs.push_back({p.n, p.s});
      j["search"] = {{"horizon", search}, {"longest", seq.size()}, {"sequence", pairs}, {"pass", verdict.pass}};
      if (!verdict.pass) {
        std::cerr << "benign-bound: sequence of length " << seq.size() << " exceeds " << bound.str() << '\n';
        code = kViolation;
      }
    }
    std::cout << j.dump(2) << '\n';
    return code;
  }
};

// ---- report ----------------------------------------------------------------

struct ReportCmd {
  std::vector<std::string> traces;

  void attach(CLI::App& app, std::function<int()>& action) {
    auto* cmd = app.add_subcommand("report", "Summarize trace files as CSV");
    cmd->add_option("traces", traces, "Trace JSON-lines files")->required()->check(CLI::ExistingFile);
    cmd->callback([this, &action] { action = [this] { return run(); }; });
  }

  int run() const {
    struct Row {
      std::uint64_t checks = 0, failures = 0;
      json witness;
    };
    std::map<std::string, Row> rows;
    std::vector<std::string> order;
    std::optional<std::string> first;
    for (const auto& path : traces) {
      std::ifstream in(path);
      std::string line;
      std::size_t lineno = 0;
      while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        json j;
        try {
          j = json::parse(line);
        } catch (const json::parse_error&) {
          throw UsageError(path + ":" + std::to_string(lineno) + ": not JSON");
        }
        if (j.contains("kind")) continue;
        if (!j.contains("invariant") || !j.contains("pass") || !j.contains("stage")) {
          throw UsageError(path + ":" + std::to_string(lineno) + ": neither an event nor a verdict");
        }
        const std::string inv = j["invariant"];
        auto [it, inserted] = rows.try_emplace(inv);
        if (inserted) order.push_back(inv);
        Row& row = it->second;
        ++row.checks;
        bool pass = j["pass"].get<bool>();
        if (!pass) {
          if (row.failures == 0) row.witness = j["witness"];
          ++row.failures;
          if (!first) first = path + ": " + inv + " at stage " + j["stage"].dump() + ": " + j["witness"].dump();
        } else if (row.failures == 0) {
          row.witness = j["witness"];
        }
      }
    }
    std::cout << "invariant,checks,failures,witness\n";
    for (const auto& inv : order) {
      const Row& row = rows.at(inv);
      std::string w = row.witness.dump();
      std::string quoted = "\"";
      for (char ch : w) quoted += ch == '"' ? std::string("\"\"") : std::string(1, ch);
      quoted += '"';
      std::cout << inv << ',' << row.checks << ',' << row.failures << ',' << quoted << '\n';
    }
    if (first) {
      std::cerr << "violation: " << *first << '\n';
      return kViolation;
    }
    return kPass;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"costlab: exact-dyadic cost functions and Martin-Lof tests over Cantor space"};
  app.config_formatter(std::make_shared<costlab::cli::JsonConfig>());
  app.set_config("--config", "", "JSON config; flags given on the command line win");
  app.require_subcommand(1);
  app.fallthrough();

  std::function<int()> action;
  OmegaCmd omega;
  CostfnCmd costfn;
  ConstructCmd construct;
  CheckCmd check;
  ReportCmd report;
  omega.attach(app, action);
  costfn.attach(app, action);
  construct.attach(app, action);
  check.attach(app, action);
  report.attach(app, action);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    return action ? action() : kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const DelayContractViolation& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kViolation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
}
