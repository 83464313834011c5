#include "repute/reputation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "repute/errors.hpp"

namespace repute {

static_assert(kReputationCeiling < 1.0);

double ExplorationSchedule::next(double rho) const noexcept { return std::max(minimum, rho * decay); }

void BuyerPolicy::validate() const {
  auto fail = [](const std::string& what) { throw PolicyError(what); };
  if (!(disreputed_threshold > 0.0 && disreputed_threshold < reputed_threshold && reputed_threshold < 1.0)) {
    fail("thresholds must satisfy 0 < dis-reputation threshold (" + std::to_string(disreputed_threshold) +
         ") < reputation threshold (" + std::to_string(reputed_threshold) + ") < 1");
  }
  if (!(penalty > 1.0)) fail("penalty factor must exceed 1, got " + std::to_string(penalty));
  if (!(value_scale > 0.0 && value_scale < 1.0)) {
    fail("value scale lambda must lie in (0, 1), got " + std::to_string(value_scale));
  }
  if (!(alpha_rate >= 0.0) || !(beta_rate >= 0.0)) fail("experience rates must be non-negative");
  if (!(exploration.minimum >= 0.0 && exploration.minimum <= exploration.initial && exploration.initial <= 1.0)) {
    fail("exploration must satisfy 0 <= rho_min <= rho_initial <= 1");
  }
  if (!(exploration.decay > 0.0 && exploration.decay <= 1.0)) fail("exploration decay must lie in (0, 1]");
}

ReputationRecord ReputationRecord::with_history(double overall, std::size_t transactions, double alpha_rate,
                                                double beta_rate) {
  const auto n = static_cast<double>(transactions);
  return {overall, transactions, std::min(1.0, n * alpha_rate), n * beta_rate};
}

double eta(double x, double lambda) {
  if (!std::isfinite(x) || x < 0.0) {
    throw DomainError("transaction value must be a non-negative number, got " + std::to_string(x));
  }
  // 1 - b^(-y) = -expm1(-y ln b), accurate for small values.
  return -std::expm1(-lambda * x * std::log(kValueBase));
}

double mu(double eta_value, double beta) { return eta_value / (1.0 + beta); }

double xi(double eta_value, double beta, double gamma) {
  if (!(gamma > 1.0)) throw PolicyError("penalty factor must exceed 1, got " + std::to_string(gamma));
  return gamma * eta_value / (1.0 + beta);
}

double individual_step(double or_t, double delta, double x, double beta, double gamma, double lambda) {
  if (delta > 0.0) return mu(eta(x, lambda), beta) * (1.0 - or_t);
  if (delta < 0.0) return -xi(eta(x, lambda), beta, gamma) * (1.0 - or_t);
  return 0.0;
}

double update_individual(double or_t, double delta, double x, double beta, double gamma, double lambda) {
  if (delta == 0.0) return or_t;
  return std::clamp(or_t + individual_step(or_t, delta, x, beta, gamma, lambda), 0.0, kReputationCeiling);
}

double combine_overall(double r, std::optional<double> shared, double alpha) {
  if (!shared) return r;
  return std::clamp(alpha * r + (1.0 - alpha) * *shared, 0.0, kReputationCeiling);
}

double bootstrap_reputation(std::optional<double> shared) noexcept { return shared.value_or(0.0); }

ReputationRecord advance_experience(ReputationRecord rec, ExperienceRates rates) {
  return ReputationRecord::with_history(rec.overall, rec.transactions + 1, rates.alpha_rate, rates.beta_rate);
}

std::string_view to_string(SellerCategory c) noexcept {
  switch (c) {
    case SellerCategory::Reputed:
      return "reputed";
    case SellerCategory::NonReputed:
      return "non-reputed";
    case SellerCategory::DisReputed:
      return "dis-reputed";
    case SellerCategory::New:
      return "new";
  }
  return "?";
}

SellerCategory classify(double or_next, const BuyerPolicy& policy, SellerCategory current, bool cheated) noexcept {
  if (current == SellerCategory::DisReputed) return SellerCategory::DisReputed;
  if (current == SellerCategory::New && or_next <= policy.disreputed_threshold) {
    return cheated ? SellerCategory::DisReputed : SellerCategory::New;
  }
  if (or_next >= policy.reputed_threshold) return SellerCategory::Reputed;
  if (or_next <= policy.disreputed_threshold) return SellerCategory::DisReputed;
  return SellerCategory::NonReputed;
}

SellerCategory initial_category(double overall, std::size_t transactions, const BuyerPolicy& policy) noexcept {
  if (transactions == 0 && overall <= policy.disreputed_threshold) return SellerCategory::New;
  return classify(overall, policy, SellerCategory::NonReputed, false);
}

bool SellerCategoryIndex::admit(const SellerId& s) {
  return entries_.try_emplace(s, SellerCategory::New).second;
}

void SellerCategoryIndex::place(const SellerId& s, SellerCategory c) {
  auto [it, inserted] = entries_.try_emplace(s, c);
  if (!inserted && it->second != SellerCategory::DisReputed) it->second = c;
}

CategoryTransition SellerCategoryIndex::update(const SellerId& s, double or_next, const BuyerPolicy& policy,
                                               bool cheated) {
  auto [it, inserted] = entries_.try_emplace(s, SellerCategory::New);
  const CategoryTransition t{it->second, classify(or_next, policy, it->second, cheated)};
  it->second = t.to;
  return t;
}

void SellerCategoryIndex::forget(const SellerId& s) { entries_.erase(s); }

std::optional<SellerCategory> SellerCategoryIndex::category(const SellerId& s) const {
  if (auto it = entries_.find(s); it != entries_.end()) return it->second;
  return std::nullopt;
}

std::vector<SellerId> SellerCategoryIndex::members(SellerCategory c) const {
  std::vector<SellerId> out;
  for (const auto& [id, cat] : entries_) {
    if (cat == c) out.push_back(id);
  }
  return out;
}

}  // namespace repute
