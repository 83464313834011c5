#pragma once

#include <span>
#include <vector>

#include "repute/fuzzy.hpp"
#include "repute/ids.hpp"
#include "repute/weights.hpp"

namespace repute {

/// One seller's fuzzy ratings of a good, one entry per attribute.
struct PerformanceRow {
  SellerId seller;
  std::vector<Tfn> ratings;
};

/// Sellers x attributes matrix of fuzzy performance ratings. Every entry
/// must be a quadruple of the performance scale it is built against;
/// anything else (including ratings below the P anchor) is rejected.
class PerformanceMatrix {
 public:
  PerformanceMatrix() = default;
  PerformanceMatrix(const PerformanceScale& scale, std::vector<PerformanceRow> rows);

  static PerformanceRow row_from_terms(const PerformanceScale& scale, SellerId seller,
                                       std::span<const PerformanceTerm> terms);

  std::size_t sellers() const noexcept { return rows_.size(); }
  std::size_t attributes() const noexcept { return attributes_; }
  const std::vector<PerformanceRow>& rows() const noexcept { return rows_; }
  const PerformanceRow& row(std::size_t i) const { return rows_.at(i); }

 private:
  std::size_t attributes_ = 0;
  std::vector<PerformanceRow> rows_;
};

struct OfferValuation {
  SellerId seller;
  Tfn fuzzy_value;
  double crisp_value = 0.0;
};

/// Weighted fuzzy value of a single row: sum_j approx_multiply(p_j, w_j).
Tfn fuzzy_value(std::span<const Tfn> ratings, const WeightVector& w);

/// One fuzzy value per seller row. Throws ContractError if the attribute
/// count differs from the weight vector length.
std::vector<Tfn> fuzzy_values(const PerformanceMatrix& pr, const WeightVector& w);

std::vector<double> crisp_values(std::span<const Tfn> fv);

/// fuzzy_values + crisp_values, paired with seller identities.
std::vector<OfferValuation> evaluate_offers(const PerformanceMatrix& pr, const WeightVector& w);

/// Seller with the highest crisp value; ties go to the lowest seller id.
/// Throws ContractError("no offers") on an empty list.
SellerId argmax_seller(std::span<const OfferValuation> offers);

/// Crisp value of a delivered good, assessed with the same weights that
/// produced the expected value.
double assess_actual_value(std::span<const Tfn> delivered, const WeightVector& w);

}  // namespace repute
