#pragma once

#include <cstddef>
#include <deque>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repute/fuzzy.hpp"

namespace repute {

/// n x n matrix of fuzzy pairwise attribute comparisons, row-major.
/// Entry (i, j) says how much more important attribute i is than j.
/// Construction only checks squareness; call validate_fpm for the
/// diagonal and reciprocity invariants.
class FuzzyPairwiseMatrix {
 public:
  FuzzyPairwiseMatrix() = default;
  FuzzyPairwiseMatrix(std::size_t n, std::vector<Tfn> entries);

  /// All-(1,1,1,1) matrix: every attribute equally important.
  static FuzzyPairwiseMatrix identity(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  const Tfn& at(std::size_t i, std::size_t j) const { return entries_.at(i * n_ + j); }

  friend bool operator==(const FuzzyPairwiseMatrix&, const FuzzyPairwiseMatrix&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<Tfn> entries_;
};

/// One upper-triangle judgement as written in scenario files: a scale term,
/// optionally inverted ("1/M" means the column attribute is moderately more
/// important than the row attribute).
struct PairwiseJudgement {
  ImportanceTerm term = ImportanceTerm::E;
  bool reciprocal = false;
};

/// Parses "M", "VH", "1/H", ... Throws LookupError on anything else.
PairwiseJudgement parse_judgement(std::string_view text);
std::string to_string(const PairwiseJudgement& j);

/// Builds a reciprocal matrix from the n(n-1)/2 upper-triangle judgements in
/// row-major order; the lower triangle is filled with exact inverses.
FuzzyPairwiseMatrix matrix_from_judgements(std::size_t n, const std::vector<PairwiseJudgement>& upper,
                                           const ImportanceScale& scale);

/// First violated invariant. Indices are 1-based, matching the usual
/// a_ij notation.
struct FpmViolation {
  std::size_t row = 0;
  std::size_t col = 0;
  std::string reason;
};

/// Checks diagonal = (1,1,1,1), a_ji = inverse(a_ij) bitwise and strict
/// positivity. Scans row-major and reports the first offending entry.
std::optional<FpmViolation> validate_fpm(const FuzzyPairwiseMatrix& m);

enum class WeightRole { Subjective, Empirical, Overall };

/// Per-attribute fuzzy weights tagged with how they were obtained.
struct WeightVector {
  WeightRole role = WeightRole::Overall;
  std::vector<Tfn> weights;

  std::size_t size() const noexcept { return weights.size(); }
  const Tfn& operator[](std::size_t i) const { return weights[i]; }

  friend bool operator==(const WeightVector&, const WeightVector&) = default;
};

/// Extent-analysis weights: each fuzzy row sum approx-multiplied by the
/// inverse of the fuzzy grand sum. Throws ContractError when the matrix
/// fails validate_fpm.
WeightVector subjective_weights(const FuzzyPairwiseMatrix& m);

/// delta * ew + (1 - delta) * sw, per attribute. `ew` may be absent only
/// while delta == 0. The result is tagged Overall.
WeightVector blend_weights(const WeightVector& sw, const std::optional<WeightVector>& ew, double delta);

/// Per (buyer, good) purchase memory: the most recent overall weight
/// vectors (at most `window` of them) and the blend factor delta.
class WeightHistory {
 public:
  static constexpr std::size_t kDefaultWindow = 100;
  static constexpr double kDefaultDeltaRate = 0.01;

  WeightHistory() = default;
  WeightHistory(std::size_t window, double delta_rate, double delta = 0.0);

  std::size_t window() const noexcept { return window_; }
  double delta() const noexcept { return delta_; }
  double delta_rate() const noexcept { return delta_rate_; }
  const std::deque<WeightVector>& entries() const noexcept { return entries_; }
  bool empty() const noexcept { return entries_.empty(); }

  /// Appends a vector without touching delta (used to seed past purchases).
  void push(WeightVector overall);

 private:
  friend WeightHistory advance_delta(WeightHistory h, WeightVector overall);

  std::size_t window_ = kDefaultWindow;
  double delta_rate_ = kDefaultDeltaRate;
  double delta_ = 0.0;
  std::deque<WeightVector> entries_;
};

/// Component-wise mean of the stored vectors, or nullopt when there is no
/// purchase history yet (callers must then blend with delta = 0).
std::optional<WeightVector> empirical_weights(const WeightHistory& h);

/// Records a completed purchase: appends `overall`, evicting the oldest
/// entry beyond the window, and raises delta by its rate (capped at 1).
WeightHistory advance_delta(WeightHistory h, WeightVector overall);

}  // namespace repute
