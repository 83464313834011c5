#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string_view>
#include <vector>

#include "repute/ids.hpp"

namespace repute {

/// Base of the value-to-reward mapping eta = 1 - base^(-lambda * x).
inline constexpr double kValueBase = 1.01;

/// How the probability of exploring new sellers evolves. rho starts at
/// `initial` and is multiplied by `decay` after each purchase decision,
/// never dropping below `minimum`.
struct ExplorationSchedule {
  double initial = 1.0;
  double minimum = 0.05;
  double decay = 0.995;

  double next(double rho) const noexcept;
};

/// Per-buyer reputation parameters.
struct BuyerPolicy {
  double reputed_threshold = 0.45;     // sellers at or above are reputed
  double disreputed_threshold = 0.15;  // sellers at or below are dis-reputed
  double penalty = 2.0;                // gamma, > 1
  double value_scale = 0.001;          // lambda, in (0, 1)
  double alpha_rate = 0.01;
  double beta_rate = 0.001;
  ExplorationSchedule exploration;

  /// Throws PolicyError unless 0 < θ < Θ < 1, γ > 1, 0 < λ < 1, the rates
  /// are non-negative and 0 <= rho_min <= rho_0 <= 1, 0 < decay <= 1.
  void validate() const;
};

/// What buyer b holds about seller s.
struct ReputationRecord {
  double overall = 0.0;  // in [0, 1)
  std::size_t transactions = 0;
  double alpha = 0.0;  // experience gain factor, min(1, n * alpha_rate)
  double beta = 0.0;   // repeat-transaction discount, n * beta_rate

  /// Record consistent with `transactions` prior transactions.
  static ReputationRecord with_history(double overall, std::size_t transactions, double alpha_rate,
                                       double beta_rate);
};

/// eta = 1 - 1.01^(-lambda * x). Strictly increasing in x, eta(0) = 0.
/// Throws DomainError for negative or non-finite x.
double eta(double x, double lambda);

/// Effective increase factor eta / (1 + beta).
double mu(double eta_value, double beta);

/// Effective decrease factor gamma * eta / (1 + beta). Throws PolicyError
/// unless gamma > 1.
double xi(double eta_value, double beta, double gamma);

/// Largest representable reputation, just below 1.
inline constexpr double kReputationCeiling = 0.99999999999999989;

/// Signed reputation change of one transaction before clamping:
/// +mu * (1 - or_t) for positive surprise, -xi * (1 - or_t) for negative,
/// 0 otherwise.
double individual_step(double or_t, double delta, double x, double beta, double gamma, double lambda);

/// Individual reputation after one transaction with surprise `delta`
/// (actual minus expected value) of value x. Positive surprise moves
/// `or_t` towards 1 by mu, negative away from it by xi, zero leaves it
/// untouched. Result clamped to [0, 1).
double update_individual(double or_t, double delta, double x, double beta, double gamma, double lambda);

/// alpha * r + (1 - alpha) * shared, or r when no other buyer reports.
double combine_overall(double r, std::optional<double> shared, double alpha);

/// Starting reputation for a seller this buyer never traded with: the
/// shared opinion when other buyers have one, 0 for a seller new to the
/// whole market.
double bootstrap_reputation(std::optional<double> shared) noexcept;

struct ExperienceRates {
  double alpha_rate = 0.01;
  double beta_rate = 0.001;
};

/// Counts one more completed transaction and recomputes alpha and beta.
ReputationRecord advance_experience(ReputationRecord rec, ExperienceRates rates);

enum class SellerCategory { Reputed, NonReputed, DisReputed, New };

std::string_view to_string(SellerCategory c) noexcept;

/// Category after a transaction that left the seller at `or_next`.
///
/// Dis-reputed is absorbing. A new seller stays new until its reputation
/// exceeds θ; if it cheats (`cheated`) before that it is dis-reputed for
/// good. Everyone else is reputed at or above Θ, dis-reputed at or below θ
/// and non-reputed in between.
SellerCategory classify(double or_next, const BuyerPolicy& policy, SellerCategory current, bool cheated) noexcept;

/// Category for a seller loaded with a known reputation and history.
SellerCategory initial_category(double overall, std::size_t transactions, const BuyerPolicy& policy) noexcept;

struct CategoryTransition {
  SellerCategory from = SellerCategory::New;
  SellerCategory to = SellerCategory::New;

  bool changed() const noexcept { return from != to; }
};

/// A buyer's partition of the sellers it knows into reputed, non-reputed,
/// dis-reputed and new lists. Each seller is in exactly one list.
class SellerCategoryIndex {
 public:
  /// Adds `s` to the new list if it is not yet known. Returns true if added.
  bool admit(const SellerId& s);

  /// Places a seller directly (used when loading state). A dis-reputed
  /// seller cannot be moved out; attempting to is ignored.
  void place(const SellerId& s, SellerCategory c);

  /// Runs classify for `s` and stores the result.
  CategoryTransition update(const SellerId& s, double or_next, const BuyerPolicy& policy, bool cheated);

  /// Drops a seller entirely (it left the market).
  void forget(const SellerId& s);

  std::optional<SellerCategory> category(const SellerId& s) const;
  bool knows(const SellerId& s) const { return category(s).has_value(); }

  /// Members of one list in ascending id order.
  std::vector<SellerId> members(SellerCategory c) const;
  std::size_t size() const noexcept { return entries_.size(); }

 private:
  std::map<SellerId, SellerCategory> entries_;
};

}  // namespace repute
