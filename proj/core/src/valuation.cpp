#include "repute/valuation.hpp"

#include "repute/errors.hpp"

namespace repute {

PerformanceMatrix::PerformanceMatrix(const PerformanceScale& scale, std::vector<PerformanceRow> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) return;
  attributes_ = rows_.front().ratings.size();
  for (const auto& row : rows_) {
    if (row.ratings.size() != attributes_) {
      throw ContractError("performance matrix is not rectangular: seller " + row.seller.str() + " has " +
                          std::to_string(row.ratings.size()) + " ratings, expected " +
                          std::to_string(attributes_));
    }
    for (std::size_t j = 0; j < row.ratings.size(); ++j) {
      if (!scale.find(row.ratings[j])) {
        throw DomainError("seller " + row.seller.str() + " attribute " + std::to_string(j + 1) +
                          ": rating is not a performance scale term");
      }
    }
  }
}

PerformanceRow PerformanceMatrix::row_from_terms(const PerformanceScale& scale, SellerId seller,
                                                 std::span<const PerformanceTerm> terms) {
  PerformanceRow row{std::move(seller), {}};
  row.ratings.reserve(terms.size());
  for (auto t : terms) row.ratings.push_back(scale.at(t));
  return row;
}

Tfn fuzzy_value(std::span<const Tfn> ratings, const WeightVector& w) {
  if (ratings.size() != w.size()) {
    throw ContractError("rating count " + std::to_string(ratings.size()) + " does not match weight count " +
                        std::to_string(w.size()));
  }
  Tfn sum;
  for (std::size_t j = 0; j < ratings.size(); ++j) sum = add(sum, approx_multiply(ratings[j], w[j]));
  return sum;
}

std::vector<Tfn> fuzzy_values(const PerformanceMatrix& pr, const WeightVector& w) {
  if (pr.sellers() > 0 && pr.attributes() != w.size()) {
    throw ContractError("performance matrix has " + std::to_string(pr.attributes()) +
                        " attributes but the weight vector has " + std::to_string(w.size()));
  }
  std::vector<Tfn> out;
  out.reserve(pr.sellers());
  for (const auto& row : pr.rows()) out.push_back(fuzzy_value(row.ratings, w));
  return out;
}

std::vector<double> crisp_values(std::span<const Tfn> fv) {
  std::vector<double> out;
  out.reserve(fv.size());
  for (const auto& f : fv) out.push_back(defuzzify_coa(f));
  return out;
}

std::vector<OfferValuation> evaluate_offers(const PerformanceMatrix& pr, const WeightVector& w) {
  const auto fv = fuzzy_values(pr, w);
  const auto cv = crisp_values(fv);
  std::vector<OfferValuation> out;
  out.reserve(fv.size());
  for (std::size_t i = 0; i < fv.size(); ++i) out.push_back({pr.row(i).seller, fv[i], cv[i]});
  return out;
}

SellerId argmax_seller(std::span<const OfferValuation> offers) {
  if (offers.empty()) throw ContractError("no offers");
  const OfferValuation* best = &offers.front();
  for (const auto& o : offers.subspan(1)) {
    if (o.crisp_value > best->crisp_value || (o.crisp_value == best->crisp_value && o.seller < best->seller)) {
      best = &o;
    }
  }
  return best->seller;
}

double assess_actual_value(std::span<const Tfn> delivered, const WeightVector& w) {
  return defuzzify_coa(fuzzy_value(delivered, w));
}

}  // namespace repute
