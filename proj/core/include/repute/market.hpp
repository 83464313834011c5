#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "repute/ids.hpp"
#include "repute/reputation.hpp"
#include "repute/scenario.hpp"
#include "repute/valuation.hpp"
#include "repute/weights.hpp"

namespace repute {

/// The simulator's only source of randomness. Exactly one uniform draw is
/// taken per purchase decision (the exploration coin in candidate_pool),
/// so a (config, seed) pair fixes the whole transcript. The draw is built
/// from the top 53 bits of mt19937_64 rather than a std distribution to
/// stay identical across standard libraries.
class SimulationRng {
 public:
  explicit SimulationRng(std::uint64_t seed) : engine_(seed) {}

  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

 private:
  std::mt19937_64 engine_;
};

struct BuyerAgent {
  BuyerId id;
  BuyerPolicy policy;
  SellerCategoryIndex categories;
  std::map<SellerId, ReputationRecord> records;
  std::map<GoodId, WeightHistory> histories;
  std::map<GoodId, WeightVector> subjective;  // per good, from the buyer's comparisons
  double rho = 1.0;
};

struct SellerAgent {
  SellerId id;
  std::map<GoodId, Offer> catalog;
  HonestyProfile profile;
  bool active = true;
  bool cheat_and_exit = false;  // sudden exit armed
  std::size_t sales = 0;
};

/// One completed purchase, with every quantity needed to replay its
/// reputation update.
struct TransactionRecord {
  std::size_t step = 0;
  BuyerId buyer;
  SellerId seller;
  GoodId good;
  double x = 0.0;  // transaction value (price)
  double f = 0.0;  // expected crisp value
  double v = 0.0;  // actual crisp value
  double delta = 0.0;
  double or_prev = 0.0;  // overall reputation before (bootstrapped if unknown)
  double r_next = 0.0;   // individual reputation after
  std::optional<double> shared;
  double alpha = 0.0;
  double beta = 0.0;
  double or_next = 0.0;
  CategoryTransition category;
  double penalty = 0.0;
  double value_scale = 0.0;
  bool explored = false;                 // chosen from the new-seller pool
  std::optional<double> bs_effect;       // set while a BS/BM attack targets this seller
  std::vector<std::string> attacks;      // names of attacks that shaped this record
};

struct MarketEvent {
  enum class Kind { NoAdmissibleSeller, AttackTriggered, SellerExited, SellerEntered };
  std::size_t step = 0;
  Kind kind = Kind::NoAdmissibleSeller;
  std::string detail;
};

std::string_view to_string(MarketEvent::Kind k) noexcept;

/// Reputation state of one (buyer, seller) pair at the end of a step.
struct SeriesPoint {
  std::size_t step = 0;
  BuyerId buyer;
  SellerId seller;
  double overall = 0.0;
  std::size_t transactions = 0;
  SellerCategory category = SellerCategory::New;
};

/// A colluder's reported reputation for a target, replacing its real one.
struct SharedOverride {
  BuyerId rater;
  SellerId target;
  double level = 0.0;
};

struct PoolDecision {
  std::vector<SellerId> pool;  // empty: no admissible seller
  bool explored = false;
};

/// Chooses which responders the buyer will consider.
///
/// Unknown responders are first admitted to the buyer's new list. One
/// uniform draw decides exploration: below rho the pool is the new
/// responders (when any). Otherwise reputed responders are preferred, then
/// non-reputed, then new ones; dis-reputed responders are never eligible.
/// rho then decays by the buyer's schedule.
PoolDecision candidate_pool(BuyerAgent& buyer, std::span<const SellerId> responders, SimulationRng& rng);

/// Mean overall reputation of `seller` among buyers other than `requester`
/// that have traded with it, with colluder overrides taking the place of
/// (or adding to) real opinions. nullopt when nobody reports.
std::optional<double> aggregate_shared(const SellerId& seller, const BuyerId& requester,
                                       std::span<const BuyerAgent> buyers, std::span<const SharedOverride> overrides);

/// Percentage by which the overall reputation departs from the buyer's own
/// individual reputation: 100 * (or - r) / r. nullopt when r == 0.
std::optional<double> bs_effect_metric(double r_individual, double or_overall) noexcept;

/// Agent-based market executing scheduled purchases and attack scripts.
/// Single-threaded; buyers act in ascending id order within a step.
class Market {
 public:
  /// Validates the config (ConfigError on failure) and seeds agent state.
  Market(ScenarioConfig config, std::uint64_t seed);

  std::size_t step() const noexcept { return step_; }
  bool finished() const noexcept { return step_ >= config_.steps; }

  /// Triggers due attacks, serves every demand of the current step, records
  /// the reputation series and advances to the next step.
  void run_step();
  void run();

  /// One purchase by `buyer` of `good` among `responders`. Returns nullopt
  /// (and logs a NoAdmissibleSeller event) when nobody is eligible.
  std::optional<TransactionRecord> run_transaction(const BuyerId& buyer, const GoodId& good,
                                                   std::span<const SellerId> responders);

  /// Applies an attack now: logs it and performs its state change (REN
  /// re-entry, SE arming). BS/BM/VIM/REC_RET take effect while active.
  void inject_attack(const AttackScript& script);

  std::optional<double> shared_reputation(const SellerId& seller, const BuyerId& requester) const;

  /// Active sellers offering `good`, ascending id.
  std::vector<SellerId> responders_for(const GoodId& good) const;

  const ScenarioConfig& config() const noexcept { return config_; }
  const std::vector<BuyerAgent>& buyers() const noexcept { return buyers_; }
  const BuyerAgent& buyer(const BuyerId& id) const;
  const SellerAgent& seller(const SellerId& id) const;
  const std::vector<SellerAgent>& sellers() const noexcept { return sellers_; }
  const std::vector<TransactionRecord>& transcript() const noexcept { return transcript_; }
  const std::vector<MarketEvent>& events() const noexcept { return events_; }
  const std::vector<SeriesPoint>& series() const noexcept { return series_; }

 private:
  BuyerAgent& buyer_mut(const BuyerId& id);
  SellerAgent* find_seller(const SellerId& id);
  SellerId resolve(const SellerId& id) const;
  /// For injected attacks: still inside its step window.
  bool attack_active(const AttackScript& a) const;
  std::vector<SharedOverride> active_overrides() const;
  const WeightVector& subjective_for(BuyerAgent& b, const GoodId& good);
  std::vector<Tfn> deliver(SellerAgent& s, const GoodId& good, std::vector<std::string>& applied);
  void record_series();

  ScenarioConfig config_;
  SimulationRng rng_;
  std::size_t step_ = 0;
  std::vector<BuyerAgent> buyers_;
  std::vector<SellerAgent> sellers_;
  std::map<SellerId, SellerId> aliases_;  // re-entered identities
  std::vector<bool> triggered_;           // parallel to config_.attacks
  std::vector<AttackScript> injected_;    // attacks applied via inject_attack
  std::vector<TransactionRecord> transcript_;
  std::vector<MarketEvent> events_;
  std::vector<SeriesPoint> series_;
};

/// Result of a full simulation run.
struct RunResult {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<TransactionRecord> transcript;
  std::vector<MarketEvent> events;
  std::vector<SeriesPoint> series;
  std::vector<BuyerAgent> final_buyers;
  std::map<SellerId, std::size_t> orders;  // completed sales per seller
  std::size_t honest_orders = 0;           // sales by sellers that never delivered below the offer
  std::size_t dishonest_orders = 0;
};

/// Runs `config` for its step count with `seed` (config.seed when absent).
RunResult run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed = std::nullopt);

}  // namespace repute
