#include "repute/scenario.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "repute/errors.hpp"

namespace repute {

HonestyProfile HonestyProfile::shifted(std::vector<int> levels) {
  HonestyProfile p;
  p.kind = Kind::Shift;
  p.shift = std::move(levels);
  return p;
}

HonestyProfile HonestyProfile::value_conditional(double threshold, std::vector<int> below, std::vector<int> above) {
  HonestyProfile p;
  p.kind = Kind::ValueConditional;
  p.value_threshold = threshold;
  p.below_shift = std::move(below);
  p.above_shift = std::move(above);
  return p;
}

namespace {

int pick(const std::vector<int>& levels, std::size_t attribute) noexcept {
  if (levels.empty()) return 0;
  if (levels.size() == 1) return levels.front();
  return attribute < levels.size() ? levels[attribute] : 0;
}

bool any_negative(const std::vector<int>& levels) {
  return std::any_of(levels.begin(), levels.end(), [](int l) { return l < 0; });
}

bool shift_fits(const std::vector<int>& levels, std::size_t attributes) {
  return levels.empty() || levels.size() == 1 || levels.size() == attributes;
}

}  // namespace

int HonestyProfile::level_shift(double price, std::size_t attribute) const noexcept {
  switch (kind) {
    case Kind::Honest:
      return 0;
    case Kind::Shift:
      return pick(shift, attribute);
    case Kind::ValueConditional:
      return pick(price > value_threshold ? above_shift : below_shift, attribute);
  }
  return 0;
}

bool HonestyProfile::can_cheat() const noexcept {
  switch (kind) {
    case Kind::Honest:
      return false;
    case Kind::Shift:
      return any_negative(shift);
    case Kind::ValueConditional:
      return any_negative(below_shift) || any_negative(above_shift);
  }
  return false;
}

std::string_view to_string(AttackKind k) noexcept {
  switch (k) {
    case AttackKind::BallotStuffing:
      return "BS";
    case AttackKind::BadMouthing:
      return "BM";
    case AttackKind::ValueImbalance:
      return "VIM";
    case AttackKind::ReEntry:
      return "REN";
    case AttackKind::SuddenExit:
      return "SE";
    case AttackKind::ReciprocityRetaliation:
      return "REC_RET";
  }
  return "?";
}

const GoodSpec* ScenarioConfig::find_good(const GoodId& id) const {
  auto it = std::find_if(goods.begin(), goods.end(), [&](const GoodSpec& g) { return g.id == id; });
  return it == goods.end() ? nullptr : &*it;
}

const BuyerSpec* ScenarioConfig::find_buyer(const BuyerId& id) const {
  auto it = std::find_if(buyers.begin(), buyers.end(), [&](const BuyerSpec& b) { return b.id == id; });
  return it == buyers.end() ? nullptr : &*it;
}

const SellerSpec* ScenarioConfig::find_seller(const SellerId& id) const {
  auto it = std::find_if(sellers.begin(), sellers.end(), [&](const SellerSpec& s) { return s.id == id; });
  return it == sellers.end() ? nullptr : &*it;
}

std::vector<std::string> ScenarioConfig::validation_issues() const {
  std::vector<std::string> issues;
  auto report = [&](const std::string& entity, const std::string& message) {
    auto loc = locations.find(entity);
    std::string prefix = loc != locations.end() ? loc->second + ": " : std::string();
    issues.push_back(prefix + entity + ": " + message);
  };

  if (steps == 0) report("market", "step count must be positive");

  std::set<std::string> seen;
  for (const auto& g : goods) {
    const std::string entity = "good " + g.id.str();
    if (!seen.insert(g.id.str()).second) report(entity, "declared twice");
    if (g.attributes.empty()) report(entity, "needs at least one attribute");
    if (g.window == 0) report(entity, "history window must be positive");
    if (!(g.delta_rate >= 0.0)) report(entity, "delta rate must be non-negative");
  }

  // REN identities count as sellers for reference checks.
  std::set<SellerId> seller_ids;
  seen.clear();
  for (const auto& s : sellers) {
    if (!seller_ids.insert(s.id).second) report("seller " + s.id.str(), "declared twice");
  }
  std::set<SellerId> reentry_ids;
  for (const auto& a : attacks) {
    if (a.kind == AttackKind::ReEntry && !a.new_identity.empty()) reentry_ids.insert(a.new_identity);
  }
  auto seller_known = [&](const SellerId& id) { return seller_ids.count(id) > 0 || reentry_ids.count(id) > 0; };

  std::set<BuyerId> buyer_ids;
  for (const auto& b : buyers) {
    const std::string entity = "buyer " + b.id.str();
    if (!buyer_ids.insert(b.id).second) report(entity, "declared twice");
    try {
      b.policy.validate();
    } catch (const PolicyError& e) {
      report(entity, e.what());
    }
    for (const auto& [good, judgements] : b.preferences) {
      const GoodSpec* g = find_good(good);
      if (!g) {
        report(entity, "comparison for undeclared good " + good.str());
        continue;
      }
      const std::size_t n = g->attributes.size();
      if (judgements.size() != n * (n - 1) / 2) {
        report(entity, "good " + good.str() + " needs " + std::to_string(n * (n - 1) / 2) +
                           " upper-triangle judgements, got " + std::to_string(judgements.size()));
      }
    }
    for (const auto& r : b.reputations) {
      if (!seller_known(r.seller)) report(entity, "reputation for undeclared seller " + r.seller.str());
      if (!(r.overall >= 0.0 && r.overall < 1.0)) {
        report(entity, "reputation of " + r.seller.str() + " must lie in [0, 1)");
      }
    }
    for (const auto& [good, h] : b.histories) {
      const GoodSpec* g = find_good(good);
      if (!g) {
        report(entity, "history for undeclared good " + good.str());
        continue;
      }
      if (!(h.delta >= 0.0 && h.delta <= 1.0)) report(entity, "history delta must lie in [0, 1]");
      if (h.delta > 0.0 && h.entries.empty()) {
        report(entity, "good " + good.str() + " has delta > 0 but no past weights");
      }
      for (const auto& e : h.entries) {
        if (e.size() != g->attributes.size()) {
          report(entity, "past weights for good " + good.str() + " need one entry per attribute");
          break;
        }
      }
    }
  }

  for (const auto& s : sellers) {
    const std::string entity = "seller " + s.id.str();
    for (const auto& [good, offer] : s.catalog) {
      const GoodSpec* g = find_good(good);
      if (!g) {
        report(entity, "offer for undeclared good " + good.str());
        continue;
      }
      if (offer.ratings.size() != g->attributes.size()) {
        report(entity, "offer for " + good.str() + " needs " + std::to_string(g->attributes.size()) + " ratings");
      }
      if (!(offer.price > 0.0)) report(entity, "price for " + good.str() + " must be positive");
      const auto n = g->attributes.size();
      if (!shift_fits(s.profile.shift, n) || !shift_fits(s.profile.below_shift, n) ||
          !shift_fits(s.profile.above_shift, n)) {
        report(entity, "profile shifts need one level or one per attribute of " + good.str());
      }
    }
  }

  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const auto& d = schedule[i];
    const std::string entity = "demand " + std::to_string(i + 1);
    if (d.step >= steps) report(entity, "step " + std::to_string(d.step) + " is not below the step count");
    const BuyerSpec* b = find_buyer(d.buyer);
    if (!b) report(entity, "undeclared buyer " + d.buyer.str());
    if (!find_good(d.good)) report(entity, "undeclared good " + d.good.str());
    if (b && find_good(d.good) && !b->preferences.count(d.good)) {
      report(entity, "buyer " + d.buyer.str() + " has no attribute comparison for good " + d.good.str());
    }
    if (d.responders) {
      for (const auto& s : *d.responders) {
        if (!seller_known(s)) report(entity, "undeclared seller " + s.str());
      }
    }
  }

  std::set<std::string> attack_names;
  for (const auto& a : attacks) {
    const std::string entity = "attack " + a.name;
    if (!attack_names.insert(a.name).second) report(entity, "declared twice");
    if (!seller_known(a.target)) report(entity, "undeclared seller " + a.target.str());
    if (a.end && *a.end < a.start) report(entity, "end step precedes start step");
    switch (a.kind) {
      case AttackKind::BallotStuffing:
      case AttackKind::BadMouthing:
        if (a.raters.empty()) report(entity, "needs at least one rater");
        for (const auto& r : a.raters) {
          if (!buyer_ids.count(r)) report(entity, "undeclared buyer " + r.str());
        }
        if (!(a.level >= 0.0 && a.level < 1.0)) report(entity, "stuffed level must lie in [0, 1)");
        break;
      case AttackKind::ReEntry:
        if (a.new_identity.empty()) report(entity, "needs a new identity");
        if (seller_ids.count(a.new_identity)) report(entity, "new identity " + a.new_identity.str() + " is taken");
        break;
      case AttackKind::ReciprocityRetaliation:
        if (!buyer_ids.count(a.partner)) report(entity, "undeclared buyer " + a.partner.str());
        if (!(a.surprise > 0.0)) report(entity, "surprise must be positive");
        break;
      case AttackKind::ValueImbalance:
        if (!(a.value_threshold >= 0.0)) report(entity, "value threshold must be non-negative");
        break;
      case AttackKind::SuddenExit:
        break;
    }
  }
  return issues;
}

void ScenarioConfig::validate() const {
  if (auto issues = validation_issues(); !issues.empty()) throw ConfigError(std::move(issues));
}

}  // namespace repute
