#include "repute/market.hpp"

#include <algorithm>
#include <set>

#include "repute/errors.hpp"

namespace repute {

std::string_view to_string(MarketEvent::Kind k) noexcept {
  switch (k) {
    case MarketEvent::Kind::NoAdmissibleSeller:
      return "no-admissible-seller";
    case MarketEvent::Kind::AttackTriggered:
      return "attack-triggered";
    case MarketEvent::Kind::SellerExited:
      return "seller-exited";
    case MarketEvent::Kind::SellerEntered:
      return "seller-entered";
  }
  return "?";
}

PoolDecision candidate_pool(BuyerAgent& buyer, std::span<const SellerId> responders, SimulationRng& rng) {
  std::vector<SellerId> reputed;
  std::vector<SellerId> non_reputed;
  std::vector<SellerId> fresh;
  for (const auto& s : responders) {
    buyer.categories.admit(s);
    switch (*buyer.categories.category(s)) {
      case SellerCategory::Reputed:
        reputed.push_back(s);
        break;
      case SellerCategory::NonReputed:
        non_reputed.push_back(s);
        break;
      case SellerCategory::New:
        fresh.push_back(s);
        break;
      case SellerCategory::DisReputed:
        break;
    }
  }
  const bool explore = rng.uniform() < buyer.rho;
  buyer.rho = buyer.policy.exploration.next(buyer.rho);

  if (explore && !fresh.empty()) return {std::move(fresh), true};
  if (!reputed.empty()) return {std::move(reputed), false};
  if (!non_reputed.empty()) return {std::move(non_reputed), false};
  // New sellers are never excluded, only deprioritised.
  if (!fresh.empty()) return {std::move(fresh), false};
  return {};
}

std::optional<double> aggregate_shared(const SellerId& seller, const BuyerId& requester,
                                       std::span<const BuyerAgent> buyers, std::span<const SharedOverride> overrides) {
  std::map<BuyerId, double> reports;
  for (const auto& b : buyers) {
    if (b.id == requester) continue;
    auto it = b.records.find(seller);
    if (it != b.records.end() && it->second.transactions > 0) reports[b.id] = it->second.overall;
  }
  for (const auto& o : overrides) {
    if (o.target == seller && o.rater != requester) reports[o.rater] = o.level;
  }
  if (reports.empty()) return std::nullopt;
  double sum = 0.0;
  for (const auto& [id, value] : reports) sum += value;
  return sum / static_cast<double>(reports.size());
}

std::optional<double> bs_effect_metric(double r_individual, double or_overall) noexcept {
  if (r_individual == 0.0) return std::nullopt;
  return 100.0 * (or_overall - r_individual) / r_individual;
}

Market::Market(ScenarioConfig config, std::uint64_t seed) : config_(std::move(config)), rng_(seed) {
  config_.validate();
  triggered_.assign(config_.attacks.size(), false);

  for (const auto& spec : config_.sellers) {
    sellers_.push_back({spec.id, spec.catalog, spec.profile, true, false, 0});
  }
  std::sort(sellers_.begin(), sellers_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });

  for (const auto& spec : config_.buyers) {
    BuyerAgent b;
    b.id = spec.id;
    b.policy = spec.policy;
    b.rho = spec.policy.exploration.initial;
    for (const auto& seed_rep : spec.reputations) {
      b.records[seed_rep.seller] = ReputationRecord::with_history(seed_rep.overall, seed_rep.transactions,
                                                                  spec.policy.alpha_rate, spec.policy.beta_rate);
      b.categories.place(seed_rep.seller, seed_rep.category.value_or(initial_category(
                                              seed_rep.overall, seed_rep.transactions, spec.policy)));
    }
    for (const auto& good : config_.goods) {
      auto hs = spec.histories.find(good.id);
      WeightHistory h(good.window, good.delta_rate, hs != spec.histories.end() ? hs->second.delta : 0.0);
      if (hs != spec.histories.end()) {
        for (const auto& e : hs->second.entries) h.push(WeightVector{WeightRole::Overall, e});
      }
      b.histories.emplace(good.id, std::move(h));
    }
    buyers_.push_back(std::move(b));
  }
  std::sort(buyers_.begin(), buyers_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
}

const BuyerAgent& Market::buyer(const BuyerId& id) const {
  auto it = std::find_if(buyers_.begin(), buyers_.end(), [&](const auto& b) { return b.id == id; });
  if (it == buyers_.end()) throw LookupError("unknown buyer " + id.str());
  return *it;
}

BuyerAgent& Market::buyer_mut(const BuyerId& id) { return const_cast<BuyerAgent&>(std::as_const(*this).buyer(id)); }

const SellerAgent& Market::seller(const SellerId& id) const {
  const SellerId resolved = resolve(id);
  auto it = std::find_if(sellers_.begin(), sellers_.end(), [&](const auto& s) { return s.id == resolved; });
  if (it == sellers_.end()) throw LookupError("unknown seller " + id.str());
  return *it;
}

SellerAgent* Market::find_seller(const SellerId& id) {
  auto it = std::find_if(sellers_.begin(), sellers_.end(), [&](const auto& s) { return s.id == id; });
  return it == sellers_.end() ? nullptr : &*it;
}

SellerId Market::resolve(const SellerId& id) const {
  SellerId current = id;
  for (auto it = aliases_.find(current); it != aliases_.end(); it = aliases_.find(current)) current = it->second;
  return current;
}

bool Market::attack_active(const AttackScript& a) const { return !a.end || step_ <= *a.end; }

std::vector<SharedOverride> Market::active_overrides() const {
  std::vector<SharedOverride> out;
  for (const auto& a : injected_) {
    if (!attack_active(a)) continue;
    if (a.kind != AttackKind::BallotStuffing && a.kind != AttackKind::BadMouthing) continue;
    for (const auto& r : a.raters) out.push_back({r, resolve(a.target), a.level});
  }
  return out;
}

std::optional<double> Market::shared_reputation(const SellerId& seller, const BuyerId& requester) const {
  const auto overrides = active_overrides();
  return aggregate_shared(resolve(seller), requester, buyers_, overrides);
}

std::vector<SellerId> Market::responders_for(const GoodId& good) const {
  std::vector<SellerId> out;
  for (const auto& s : sellers_) {
    if (s.active && s.catalog.count(good)) out.push_back(s.id);
  }
  return out;
}

const WeightVector& Market::subjective_for(BuyerAgent& b, const GoodId& good) {
  auto it = b.subjective.find(good);
  if (it == b.subjective.end()) {
    const BuyerSpec* spec = config_.find_buyer(b.id);
    const GoodSpec* g = config_.find_good(good);
    auto pref = spec->preferences.find(good);
    if (pref == spec->preferences.end()) {
      throw ContractError("buyer " + b.id.str() + " has no attribute comparison for good " + good.str());
    }
    auto m = matrix_from_judgements(g->attributes.size(), pref->second, config_.importance_scale);
    it = b.subjective.emplace(good, subjective_weights(m)).first;
  }
  return it->second;
}

std::vector<Tfn> Market::deliver(SellerAgent& s, const GoodId& good, std::vector<std::string>& applied) {
  const Offer& offer = s.catalog.at(good);
  std::vector<Tfn> out;
  out.reserve(offer.ratings.size());
  if (s.cheat_and_exit) {
    for (std::size_t j = 0; j < offer.ratings.size(); ++j) out.push_back(config_.performance_scale.at(PerformanceTerm::P));
    return out;
  }
  const HonestyProfile* profile = &s.profile;
  HonestyProfile vim;
  for (const auto& a : injected_) {
    if (a.kind == AttackKind::ValueImbalance && resolve(a.target) == s.id && attack_active(a)) {
      vim = HonestyProfile::value_conditional(a.value_threshold, a.below_shift, a.above_shift);
      profile = &vim;
      applied.push_back(a.name);
    }
  }
  for (std::size_t j = 0; j < offer.ratings.size(); ++j) {
    const int level = static_cast<int>(offer.ratings[j]) + profile->level_shift(offer.price, j);
    const int clamped = std::clamp(level, 0, static_cast<int>(kScaleSize) - 1);
    out.push_back(config_.performance_scale.at(static_cast<PerformanceTerm>(clamped)));
  }
  return out;
}

std::optional<TransactionRecord> Market::run_transaction(const BuyerId& buyer_id, const GoodId& good,
                                                         std::span<const SellerId> responders) {
  BuyerAgent& b = buyer_mut(buyer_id);
  if (!config_.find_good(good)) throw LookupError("unknown good " + good.str());

  std::vector<SellerId> eligible;
  for (const auto& r : responders) {
    SellerAgent* s = find_seller(resolve(r));
    if (s && s->active && s->catalog.count(good) &&
        std::find(eligible.begin(), eligible.end(), s->id) == eligible.end()) {
      eligible.push_back(s->id);
    }
  }

  PoolDecision decision = candidate_pool(b, eligible, rng_);
  if (decision.pool.empty()) {
    events_.push_back({step_, MarketEvent::Kind::NoAdmissibleSeller, b.id.str() + " wanted " + good.str()});
    return std::nullopt;
  }

  // Phase I: expected value of each eligible offer.
  const WeightVector& sw = subjective_for(b, good);
  WeightHistory& history = b.histories.at(good);
  const WeightVector w = blend_weights(sw, empirical_weights(history), history.delta());

  std::vector<PerformanceRow> rows;
  rows.reserve(decision.pool.size());
  for (const auto& id : decision.pool) {
    const Offer& offer = find_seller(id)->catalog.at(good);
    rows.push_back(PerformanceMatrix::row_from_terms(config_.performance_scale, id, offer.ratings));
  }
  const PerformanceMatrix pr(config_.performance_scale, std::move(rows));
  const auto valuations = evaluate_offers(pr, w);
  const SellerId chosen = argmax_seller(valuations);
  const auto& chosen_valuation =
      *std::find_if(valuations.begin(), valuations.end(), [&](const auto& o) { return o.seller == chosen; });

  SellerAgent& s = *find_seller(chosen);
  TransactionRecord rec;
  rec.step = step_;
  rec.buyer = b.id;
  rec.seller = chosen;
  rec.good = good;
  rec.explored = decision.explored;
  rec.x = s.catalog.at(good).price;
  rec.f = chosen_valuation.crisp_value;

  // Phase II: actual value and surprise.
  const auto delivered = deliver(s, good, rec.attacks);
  if (s.cheat_and_exit) {
    for (const auto& a : injected_) {
      if (a.kind == AttackKind::SuddenExit && resolve(a.target) == s.id) rec.attacks.push_back(a.name);
    }
  }
  rec.v = assess_actual_value(delivered, w);
  for (const auto& a : injected_) {
    if (a.kind == AttackKind::ReciprocityRetaliation && attack_active(a) && a.partner == b.id &&
        resolve(a.target) == s.id) {
      rec.v = a.reciprocity ? rec.f + a.surprise : rec.f - a.surprise;
      rec.attacks.push_back(a.name);
    }
  }
  rec.delta = rec.v - rec.f;

  const auto overrides = active_overrides();
  rec.shared = aggregate_shared(s.id, b.id, buyers_, overrides);
  for (const auto& a : injected_) {
    if ((a.kind == AttackKind::BallotStuffing || a.kind == AttackKind::BadMouthing) && attack_active(a) &&
        resolve(a.target) == s.id) {
      rec.attacks.push_back(a.name);
    }
  }

  auto existing = b.records.find(s.id);
  ReputationRecord record = existing != b.records.end()
                                ? existing->second
                                : ReputationRecord{bootstrap_reputation(rec.shared), 0, 0.0, 0.0};
  rec.or_prev = record.overall;
  rec.alpha = record.alpha;
  rec.beta = record.beta;
  rec.penalty = b.policy.penalty;
  rec.value_scale = b.policy.value_scale;
  rec.r_next = update_individual(record.overall, rec.delta, rec.x, record.beta, b.policy.penalty,
                                 b.policy.value_scale);
  rec.or_next = combine_overall(rec.r_next, rec.shared, record.alpha);

  // Phase III: lists.
  rec.category = b.categories.update(s.id, rec.or_next, b.policy, rec.delta < 0.0);

  record.overall = rec.or_next;
  b.records[s.id] = advance_experience(record, {b.policy.alpha_rate, b.policy.beta_rate});
  history = advance_delta(std::move(history), w);

  const bool stuffed = std::any_of(overrides.begin(), overrides.end(), [&](const auto& o) { return o.target == s.id; });
  if (stuffed) rec.bs_effect = bs_effect_metric(rec.r_next, rec.or_next);

  ++s.sales;
  if (s.cheat_and_exit) {
    s.cheat_and_exit = false;
    s.active = false;
    events_.push_back({step_, MarketEvent::Kind::SellerExited, s.id.str() + " exited after a sudden-exit sale"});
  }
  transcript_.push_back(rec);
  return rec;
}

void Market::inject_attack(const AttackScript& script) {
  injected_.push_back(script);
  events_.push_back({step_, MarketEvent::Kind::AttackTriggered,
                     script.name + " (" + std::string(to_string(script.kind)) + ") on " + script.target.str()});
  const SellerId target = resolve(script.target);
  SellerAgent* s = find_seller(target);
  if (!s) throw LookupError("attack " + script.name + " targets unknown seller " + script.target.str());

  switch (script.kind) {
    case AttackKind::ReEntry: {
      if (find_seller(script.new_identity)) {
        throw ContractError("attack " + script.name + ": identity " + script.new_identity.str() + " already exists");
      }
      SellerAgent fresh{script.new_identity, s->catalog, s->profile, true, false, 0};
      s->active = false;
      aliases_[target] = script.new_identity;
      events_.push_back({step_, MarketEvent::Kind::SellerExited, target.str() + " left the market"});
      sellers_.push_back(std::move(fresh));
      std::sort(sellers_.begin(), sellers_.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
      for (auto& b : buyers_) b.categories.admit(script.new_identity);
      events_.push_back({step_, MarketEvent::Kind::SellerEntered, script.new_identity.str() + " entered the market"});
      break;
    }
    case AttackKind::SuddenExit:
      s->cheat_and_exit = true;
      break;
    case AttackKind::BallotStuffing:
    case AttackKind::BadMouthing:
    case AttackKind::ValueImbalance:
    case AttackKind::ReciprocityRetaliation:
      break;
  }
}

void Market::record_series() {
  for (const auto& b : buyers_) {
    for (const auto& [seller, rec] : b.records) {
      series_.push_back({step_, b.id, seller, rec.overall, rec.transactions,
                         b.categories.category(seller).value_or(SellerCategory::New)});
    }
  }
}

void Market::run_step() {
  if (finished()) return;
  for (std::size_t i = 0; i < config_.attacks.size(); ++i) {
    if (triggered_[i]) continue;
    const auto& a = config_.attacks[i];
    if (a.start > step_) continue;
    const SellerAgent* target = find_seller(resolve(a.target));
    if (target && target->sales < a.after_transactions) continue;
    triggered_[i] = true;
    inject_attack(a);
  }

  std::vector<const Demand*> due;
  for (const auto& d : config_.schedule) {
    if (d.step == step_) due.push_back(&d);
  }
  std::stable_sort(due.begin(), due.end(), [](const Demand* a, const Demand* b) { return a->buyer < b->buyer; });
  for (const Demand* d : due) {
    const auto responders = d->responders ? *d->responders : responders_for(d->good);
    run_transaction(d->buyer, d->good, responders);
  }
  record_series();
  ++step_;
}

void Market::run() {
  while (!finished()) run_step();
}

RunResult run_scenario(const ScenarioConfig& config, std::optional<std::uint64_t> seed) {
  const std::uint64_t used_seed = seed.value_or(config.seed);
  Market market(config, used_seed);
  market.run();

  RunResult out;
  out.scenario = config.name;
  out.seed = used_seed;
  out.transcript = market.transcript();
  out.events = market.events();
  out.series = market.series();
  out.final_buyers = market.buyers();

  std::set<SellerId> dishonest;
  for (const auto& s : market.sellers()) {
    if (s.profile.can_cheat()) dishonest.insert(s.id);
  }
  for (const auto& t : out.transcript) {
    if (t.delta < 0.0) dishonest.insert(t.seller);
  }
  for (const auto& s : market.sellers()) out.orders[s.id] = 0;
  for (const auto& t : out.transcript) {
    ++out.orders[t.seller];
    if (dishonest.count(t.seller)) {
      ++out.dishonest_orders;
    } else {
      ++out.honest_orders;
    }
  }
  return out;
}

}  // namespace repute
