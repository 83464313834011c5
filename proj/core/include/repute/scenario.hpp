#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "repute/fuzzy.hpp"
#include "repute/ids.hpp"
#include "repute/reputation.hpp"
#include "repute/weights.hpp"

namespace repute {

/// How a seller turns an advertised offer into a delivered good. Deliveries
/// are the advertised terms shifted by a signed number of scale levels per
/// attribute (clamped to P..EX): 0 is honest, negative cheats, positive
/// over-delivers. A value-conditional profile switches shift above a price
/// threshold.
struct HonestyProfile {
  enum class Kind { Honest, Shift, ValueConditional };

  Kind kind = Kind::Honest;
  std::vector<int> shift;        // Shift: one entry for all attributes, or one per attribute
  double value_threshold = 0.0;  // ValueConditional: prices above this use above_shift
  std::vector<int> below_shift;
  std::vector<int> above_shift;

  static HonestyProfile honest() { return {}; }
  static HonestyProfile shifted(std::vector<int> levels);
  static HonestyProfile value_conditional(double threshold, std::vector<int> below, std::vector<int> above);

  /// Level shift applied to attribute `attribute` of a good sold at `price`.
  int level_shift(double price, std::size_t attribute) const noexcept;

  /// True if some delivery under this profile falls below the offer.
  bool can_cheat() const noexcept;
};

struct Offer {
  std::vector<PerformanceTerm> ratings;
  double price = 0.0;
};

struct GoodSpec {
  GoodId id;
  std::vector<std::string> attributes;
  std::size_t window = WeightHistory::kDefaultWindow;
  double delta_rate = WeightHistory::kDefaultDeltaRate;
};

struct SellerSpec {
  SellerId id;
  std::map<GoodId, Offer> catalog;
  HonestyProfile profile;
};

/// Prior state a buyer starts with for one seller.
struct ReputationSeed {
  SellerId seller;
  double overall = 0.0;
  std::size_t transactions = 0;
  std::optional<SellerCategory> category;  // derived from thresholds when absent
};

/// Prior purchase memory of one good: blend factor and past overall weights.
struct HistorySeed {
  double delta = 0.0;
  std::vector<std::vector<Tfn>> entries;
};

struct BuyerSpec {
  BuyerId id;
  BuyerPolicy policy;
  std::map<GoodId, std::vector<PairwiseJudgement>> preferences;  // upper triangle per good
  std::vector<ReputationSeed> reputations;
  std::map<GoodId, HistorySeed> histories;
};

/// One purchase demand. Without explicit responders every active seller
/// offering the good answers the broadcast.
struct Demand {
  std::size_t step = 0;
  BuyerId buyer;
  GoodId good;
  std::optional<std::vector<SellerId>> responders;
};

enum class AttackKind { BallotStuffing, BadMouthing, ValueImbalance, ReEntry, SuddenExit, ReciprocityRetaliation };

std::string_view to_string(AttackKind k) noexcept;

/// A scripted attack. Which fields matter depends on `kind`:
///   BS / BM   raters report `level` for target to every other buyer
///   VIM       target sells honestly (below_shift) up to value_threshold and
///             cheats (above_shift) above it
///   REN       target leaves and re-enters as `new_identity`
///   SE        target cheats maximally on its next sale, then leaves
///   REC_RET   `partner` buyer assesses every purchase from target as
///             `surprise` above (reciprocity) or below (retaliation) the
///             expected value
/// The attack is active from step `start` through `end` (inclusive, open
/// ended when absent) once the target has completed `after_transactions`
/// sales in the run.
struct AttackScript {
  std::string name;
  AttackKind kind = AttackKind::BallotStuffing;
  SellerId target;
  std::size_t start = 0;
  std::optional<std::size_t> end;
  std::size_t after_transactions = 0;

  std::vector<BuyerId> raters;
  double level = 0.0;

  double value_threshold = 0.0;
  std::vector<int> below_shift{0};
  std::vector<int> above_shift{-2};

  SellerId new_identity;

  BuyerId partner;
  bool reciprocity = true;
  double surprise = 1.0;
};

/// Everything needed to run one market simulation.
struct ScenarioConfig {
  std::string name;
  std::uint64_t seed = 0;
  std::size_t steps = 1;
  ImportanceScale importance_scale;
  PerformanceScale performance_scale;
  std::vector<GoodSpec> goods;
  std::vector<BuyerSpec> buyers;
  std::vector<SellerSpec> sellers;
  std::vector<Demand> schedule;
  std::vector<AttackScript> attacks;

  /// Optional source positions ("file:line") keyed by entity, e.g.
  /// "buyer b1", "attack bs", "demand 3". Used to prefix validation issues.
  std::map<std::string, std::string> locations;

  /// Every cross-reference and invariant problem, empty when valid.
  std::vector<std::string> validation_issues() const;

  /// Throws ConfigError listing validation_issues() when non-empty.
  void validate() const;

  const GoodSpec* find_good(const GoodId& id) const;
  const BuyerSpec* find_buyer(const BuyerId& id) const;
  const SellerSpec* find_seller(const SellerId& id) const;
};

}  // namespace repute
