// Prints one PASS/FAIL line per acceptance criterion. Exits nonzero unless
// the failing criteria are exactly those named with --known-failure N.

#include <fmt/format.h>

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "approx.hpp"
#include "repute/config.hpp"
#include "repute/fuzzy.hpp"
#include "repute/market.hpp"
#include "repute/report.hpp"
#include "repute/reputation.hpp"
#include "repute/tables.hpp"
#include "repute/weights.hpp"

using namespace repute;

namespace {

const std::string kData = REPUTE_DATA_DIR;

constexpr double kLambda = 0.001;
constexpr double kEtaTol = 1e-5;
constexpr double kFactorTol = 1e-4;
constexpr double kChainTol = 0.0005;
constexpr double kTableSeconds = 1.0;
constexpr double kWeedingSeconds = 5.0;
constexpr std::size_t kWeedingBound = 10;
constexpr double kWeedingThreshold = 0.15;
constexpr double kAsymmetryRelTol = 1e-12;
constexpr int kAsymmetrySamples = 1000;
constexpr int kFuzzyCases = 10000;
constexpr std::uint64_t kInvolutionUlps = 2;
constexpr double kLinearityRelTol = 1e-12;

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

bool within(double value, double target, double tol) { return std::abs(value - target) <= tol; }

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

ScenarioConfig scenario(const std::string& file) { return load_config(kData + "/scenarios/" + file); }

Outcome value_table(const std::function<ReproductionTable()>& build) {
  Outcome o;
  const auto start = std::chrono::steady_clock::now();
  const auto t = build();
  const double elapsed = seconds_since(start);
  std::size_t failed = 0;
  for (const auto& c : t.cells) {
    if (!c.pass()) {
      ++failed;
      o.require(false, fmt::format("{} {} = {:.4f} vs {:.4f}", c.row, c.quantity, c.computed, *c.published));
    }
  }
  o.require(elapsed < kTableSeconds, fmt::format("took {:.3f} s", elapsed));
  if (o.pass) o.detail = fmt::format("{} cells within tolerance in {:.4f} s", t.cells.size(), elapsed);
  return o;
}

Outcome growth_table() { return value_table(reproduce_growth_table); }

Outcome decline_table() {
  Outcome o = value_table(reproduce_decline_table);
  const double pinned = update_individual(kTablePrior, -1.0, 20000, 0.0, 2.0, kLambda);
  o.require(within(pinned, 0.1426, 0.0005), fmt::format("x=20000 beta=0 gives {:.5f}", pinned));
  return o;
}

Outcome first_chain() {
  Outcome o;
  const auto r = run_scenario(scenario("scenario1.cfg"));
  if (r.transcript.size() != 1) {
    o.require(false, "expected exactly one transaction");
    return o;
  }
  const auto& t = r.transcript[0];
  const double e = eta(t.x, kLambda);
  const double m = mu(e, t.beta);
  o.require(within(e, 0.014815, kEtaTol), fmt::format("eta {:.6f}", e));
  o.require(within(m, 0.01373, kFactorTol), fmt::format("mu {:.5f}", m));
  o.require(within(t.r_next, 0.576, kChainTol), fmt::format("r {:.5f}", t.r_next));
  o.require(within(t.or_next, 0.572, kChainTol), fmt::format("or {:.5f}", t.or_next));
  if (o.pass) o.detail = fmt::format("eta {:.6f}, mu {:.5f}, r {:.4f}, or {:.4f}", e, m, t.r_next, t.or_next);
  return o;
}

Outcome second_chain() {
  Outcome o;
  const auto cfg = scenario("scenario2.cfg");
  const auto r = run_scenario(cfg);
  if (r.transcript.size() != 1) {
    o.require(false, "expected exactly one transaction");
    return o;
  }
  const auto& t = r.transcript[0];
  const double e = eta(t.x, kLambda);
  const double x = xi(e, t.beta, t.penalty);
  o.require(within(e, 0.064959, kEtaTol), fmt::format("eta {:.6f}", e));
  o.require(within(x, 0.18649, kFactorTol), fmt::format("xi {:.5f}", x));
  o.require(within(t.r_next, 0.4186, kChainTol), fmt::format("r {:.5f}", t.r_next));
  o.require(within(t.or_next, 0.4854, kChainTol), fmt::format("or {:.5f}", t.or_next));
  o.require(t.category.to != SellerCategory::Reputed, fmt::format("{} still reputed", t.seller.str()));
  const double theta_r = cfg.find_buyer(t.buyer)->policy.reputed_threshold;
  o.require(theta_r == 0.5, fmt::format("reputation threshold {}", theta_r));
  if (o.pass) {
    o.detail = fmt::format("eta {:.6f}, xi {:.5f}, r {:.4f}, or {:.4f}, {} now {}", e, x, t.r_next, t.or_next,
                           t.seller.str(), to_string(t.category.to));
  }
  return o;
}

Outcome stuffing_table() {
  Outcome o;
  const auto t = reproduce_stuffing_table();
  for (const auto& c : t.cells) {
    if (!c.pass()) {
      o.require(false, fmt::format("{} {} = {:.4f} vs {:.4f}", c.row, c.quantity, c.computed, *c.published));
    }
  }
  std::vector<double> effects;
  for (const auto& c : t.cells) {
    if (c.quantity == "effect %") effects.push_back(c.computed);
  }
  for (std::size_t i = 1; i < effects.size(); ++i) {
    o.require(effects[i] <= effects[i - 1], fmt::format("effect rises at row {}", i));
  }
  if (o.pass) {
    std::string list;
    for (double e : effects) list += fmt::format("{}{:.2f}", list.empty() ? "" : " ", e);
    o.detail = fmt::format("effects % {}", list);
  }
  return o;
}

Outcome weeding() {
  Outcome o;
  const auto cfg = scenario("weeding.cfg");
  const auto start = std::chrono::steady_clock::now();
  const auto r = run_scenario(cfg);
  const double elapsed = seconds_since(start);
  o.require(cfg.steps == 1000, "fixture must run 1000 steps");

  std::set<SellerId> cheaters;
  for (const auto& s : cfg.sellers) {
    if (s.profile.can_cheat()) cheaters.insert(s.id);
  }
  o.require(cheaters.size() == 2, fmt::format("{} cheaters in fixture", cheaters.size()));

  using Pair = std::pair<BuyerId, SellerId>;
  std::map<Pair, std::size_t> count;
  std::map<Pair, std::size_t> weeded_at;
  std::size_t worst = 0;
  for (const auto& t : r.transcript) {
    const Pair key{t.buyer, t.seller};
    const std::size_t n = ++count[key];
    if (!cheaters.count(t.seller)) continue;
    if (weeded_at.count(key)) {
      o.require(false, fmt::format("{} ordered from {} after it fell below threshold", t.buyer.str(), t.seller.str()));
      continue;
    }
    if (t.or_next < kWeedingThreshold) {
      weeded_at[key] = n;
      worst = std::max(worst, n);
    }
  }
  for (const auto& b : cfg.buyers) {
    for (const auto& s : cheaters) {
      auto it = weeded_at.find({b.id, s});
      if (it == weeded_at.end()) {
        o.require(false, fmt::format("{} never fell below {} for {}", s.str(), kWeedingThreshold, b.id.str()));
      } else {
        o.require(it->second <= kWeedingBound,
                  fmt::format("{} needed {} transactions with {}", s.str(), it->second, b.id.str()));
      }
    }
  }

  std::map<Pair, double> last;
  std::size_t decreases = 0;
  for (const auto& p : r.series) {
    if (cheaters.count(p.seller)) continue;
    const Pair key{p.buyer, p.seller};
    if (auto it = last.find(key); it != last.end() && p.overall < it->second) ++decreases;
    last[key] = p.overall;
  }
  o.require(decreases == 0, fmt::format("{} decreases of an honest seller's reputation", decreases));
  o.require(elapsed < kWeedingSeconds, fmt::format("took {:.3f} s", elapsed));
  if (o.pass) {
    o.detail = fmt::format("cheaters weeded within {} transactions per buyer, {} orders, {:.3f} s", worst,
                           r.transcript.size(), elapsed);
  }
  return o;
}

Outcome penalty_asymmetry() {
  Outcome o;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> prior(0.0, 0.99);
  std::uniform_real_distribution<double> value(1.0, 20000.0);
  std::uniform_real_distribution<double> beta(0.0, 1.0);
  constexpr double kGamma = 2.0;
  double worst = 0.0;
  for (int i = 0; i < kAsymmetrySamples; ++i) {
    const double p = prior(rng);
    const double x = value(rng);
    const double b = beta(rng);
    const double up = individual_step(p, 1.0, x, b, kGamma, kLambda);
    const double down = -individual_step(p, -1.0, x, b, kGamma, kLambda);
    worst = std::max(worst, std::abs(down - kGamma * up) / (kGamma * up));
  }
  o.require(worst <= kAsymmetryRelTol, fmt::format("worst relative error {:.3e}", worst));
  if (o.pass) o.detail = fmt::format("{} samples, worst relative error {:.3e}", kAsymmetrySamples, worst);
  return o;
}

Tfn random_tfn(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> d(0.01, 10.0);
  std::array<double, 4> c{d(rng), d(rng), d(rng), d(rng)};
  std::sort(c.begin(), c.end());
  return Tfn(c[0], c[1], c[2], c[3]);
}

Outcome fuzzy_algebra() {
  Outcome o;
  std::mt19937_64 rng(77);
  const Tfn one = Tfn::crisp(1.0);
  std::size_t identity = 0;
  std::size_t core = 0;
  std::size_t involution = 0;
  std::size_t linearity = 0;
  for (int i = 0; i < kFuzzyCases; ++i) {
    const Tfn a = random_tfn(rng);
    if (approx_multiply(a, one).components() != a.components()) ++identity;
  }
  for (int i = 0; i < kFuzzyCases; ++i) {
    const Tfn a = random_tfn(rng);
    const Tfn b = random_tfn(rng);
    const auto c = approx_multiply(a, b);
    if (c.a2() != a.a2() * b.a2() || c.a3() != a.a3() * b.a3()) ++core;
  }
  for (int i = 0; i < kFuzzyCases; ++i) {
    const Tfn a = random_tfn(rng);
    const Tfn back = inverse(inverse(a));
    for (std::size_t k = 0; k < 4; ++k) {
      if (testing::ulp_distance(back.components()[k], a.components()[k]) > kInvolutionUlps) {
        ++involution;
        break;
      }
    }
  }
  std::uniform_real_distribution<double> coef(0.0, 5.0);
  for (int i = 0; i < kFuzzyCases; ++i) {
    const Tfn a = random_tfn(rng);
    const Tfn b = random_tfn(rng);
    const double s = coef(rng);
    const double sum = defuzzify_coa(add(a, b));
    const double scaled = defuzzify_coa(scale(a, s));
    if (!testing::relatively_close(sum, defuzzify_coa(a) + defuzzify_coa(b), kLinearityRelTol) ||
        !testing::relatively_close(scaled, s * defuzzify_coa(a), kLinearityRelTol)) {
      ++linearity;
    }
  }

  reset_product_repair_count();
  const ImportanceScale importance;
  const PerformanceScale performance;
  for (const auto& a : importance.terms()) {
    for (const auto& b : importance.terms()) approx_multiply(a, b);
    for (const auto& b : performance.terms()) approx_multiply(a, b);
    approx_multiply(a, inverse(a));
  }
  for (const auto& a : performance.terms()) {
    for (const auto& b : performance.terms()) approx_multiply(a, b);
  }
  run_scenario(scenario("case_study.cfg"));
  const auto repairs = product_repair_count();

  o.require(identity == 0, fmt::format("{} identity failures", identity));
  o.require(core == 0, fmt::format("{} core failures", core));
  o.require(involution == 0, fmt::format("{} involution failures", involution));
  o.require(linearity == 0, fmt::format("{} linearity failures", linearity));
  o.require(repairs == 0, fmt::format("{} repairs on scale inputs", repairs));
  if (o.pass) o.detail = fmt::format("4 x {} cases, 0 failures, 0 repairs", kFuzzyCases);
  return o;
}

std::string transcript_text(const ScenarioConfig& cfg) {
  std::ostringstream out;
  write_transcript_csv(out, run_scenario(cfg, 42).transcript);
  return out.str();
}

Outcome determinism() {
  Outcome o;
  const auto cfg = scenario("case_study.cfg");
  const auto a = transcript_text(cfg);
  const auto b = transcript_text(cfg);
  o.require(a == b, "transcripts differ");
  if (o.pass) o.detail = fmt::format("{} bytes identical", a.size());
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  std::set<std::size_t> known;
  for (int i = 1; i < argc; ++i) {
    if (std::string(argv[i]) == "--known-failure" && i + 1 < argc) {
      known.insert(std::stoul(argv[++i]));
    } else {
      fmt::print(stderr, "usage: {} [--known-failure N]...\n", argv[0]);
      return 2;
    }
  }
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"reputation growth table", growth_table},
      {"reputation decline table", decline_table},
      {"satisfied purchase chain", first_chain},
      {"cheated purchase chain", second_chain},
      {"ballot stuffing table", stuffing_table},
      {"weeding out", weeding},
      {"penalty asymmetry", penalty_asymmetry},
      {"fuzzy algebra", fuzzy_algebra},
      {"determinism", determinism},
  };
  std::set<std::size_t> failed;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.require(false, fmt::format("exception: {}", e.what()));
    }
    if (!o.pass) failed.insert(i + 1);
    fmt::print("{} criterion {} ({}): {}\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail);
  }
  for (std::size_t n : failed) {
    if (known.count(n)) fmt::print("criterion {} is a known failure\n", n);
  }
  for (std::size_t n : known) {
    if (!failed.count(n)) fmt::print("criterion {} was listed as a known failure but passed\n", n);
  }
  return failed == known ? 0 : 1;
}
