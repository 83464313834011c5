#include "repute/weights.hpp"

#include <algorithm>
#include <sstream>

#include "repute/errors.hpp"

namespace repute {

namespace {

const Tfn kUnit = Tfn::crisp(1.0);

bool same_components(const Tfn& a, const Tfn& b) noexcept { return a.components() == b.components(); }

std::string entry_text(const Tfn& a) {
  std::ostringstream os;
  os << a;
  return os.str();
}

}  // namespace

FuzzyPairwiseMatrix::FuzzyPairwiseMatrix(std::size_t n, std::vector<Tfn> entries)
    : n_(n), entries_(std::move(entries)) {
  if (entries_.size() != n_ * n_) {
    throw ContractError("pairwise matrix needs " + std::to_string(n_ * n_) + " entries, got " +
                        std::to_string(entries_.size()));
  }
}

FuzzyPairwiseMatrix FuzzyPairwiseMatrix::identity(std::size_t n) {
  return FuzzyPairwiseMatrix(n, std::vector<Tfn>(n * n, kUnit));
}

PairwiseJudgement parse_judgement(std::string_view text) {
  PairwiseJudgement j;
  if (text.starts_with("1/")) {
    j.reciprocal = true;
    text.remove_prefix(2);
  }
  j.term = parse_importance_term(text);
  return j;
}

std::string to_string(const PairwiseJudgement& j) {
  return (j.reciprocal ? "1/" : "") + std::string(to_string(j.term));
}

FuzzyPairwiseMatrix matrix_from_judgements(std::size_t n, const std::vector<PairwiseJudgement>& upper,
                                           const ImportanceScale& scale) {
  const std::size_t expected = n * (n - (n > 0 ? 1 : 0)) / 2;
  if (upper.size() != expected) {
    throw ContractError("a " + std::to_string(n) + "-attribute comparison needs " + std::to_string(expected) +
                        " upper-triangle judgements, got " + std::to_string(upper.size()));
  }
  std::vector<Tfn> entries(n * n, kUnit);
  std::size_t k = 0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j, ++k) {
      const Tfn& base = scale.at(upper[k].term);
      const Tfn upper_entry = upper[k].reciprocal ? inverse(base) : base;
      entries[i * n + j] = upper_entry;
      entries[j * n + i] = inverse(upper_entry);
    }
  }
  return FuzzyPairwiseMatrix(n, std::move(entries));
}

std::optional<FpmViolation> validate_fpm(const FuzzyPairwiseMatrix& m) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Tfn& a = m.at(i, j);
      if (i == j) {
        if (!same_components(a, kUnit)) {
          return FpmViolation{i + 1, j + 1, "diagonal entry " + entry_text(a) + " is not (1,1,1,1)"};
        }
        continue;
      }
      if (!a.strictly_positive()) {
        return FpmViolation{i + 1, j + 1, "entry " + entry_text(a) + " is not strictly positive"};
      }
      if (j < i) {
        const Tfn& mirror = m.at(j, i);
        if (!mirror.strictly_positive() || !same_components(a, inverse(mirror))) {
          return FpmViolation{i + 1, j + 1,
                              "entry " + entry_text(a) + " is not the inverse of " + entry_text(mirror)};
        }
      }
    }
  }
  return std::nullopt;
}

WeightVector subjective_weights(const FuzzyPairwiseMatrix& m) {
  if (auto violation = validate_fpm(m)) {
    throw ContractError("invalid pairwise matrix at (" + std::to_string(violation->row) + "," +
                        std::to_string(violation->col) + "): " + violation->reason);
  }
  const std::size_t n = m.size();
  std::vector<Tfn> row_sums;
  row_sums.reserve(n);
  Tfn grand;
  for (std::size_t i = 0; i < n; ++i) {
    Tfn row;
    for (std::size_t j = 0; j < n; ++j) row = add(row, m.at(i, j));
    row_sums.push_back(row);
    grand = add(grand, row);
  }
  WeightVector out{WeightRole::Subjective, {}};
  if (n == 0) return out;
  const Tfn grand_inverse = inverse(grand);
  out.weights.reserve(n);
  for (const auto& row : row_sums) out.weights.push_back(approx_multiply(row, grand_inverse));
  return out;
}

WeightVector blend_weights(const WeightVector& sw, const std::optional<WeightVector>& ew, double delta) {
  if (!(delta >= 0.0 && delta <= 1.0)) {
    throw ContractError("blend factor delta must lie in [0, 1], got " + std::to_string(delta));
  }
  WeightVector out{WeightRole::Overall, {}};
  if (delta == 0.0) {
    out.weights = sw.weights;
    return out;
  }
  if (!ew) {
    throw ContractError("blend factor delta > 0 requires empirical weights");
  }
  if (ew->size() != sw.size()) {
    throw ContractError("empirical and subjective weight vectors differ in length");
  }
  if (delta == 1.0) {
    out.weights = ew->weights;
    return out;
  }
  out.weights.reserve(sw.size());
  for (std::size_t i = 0; i < sw.size(); ++i) {
    out.weights.push_back(add(scale((*ew)[i], delta), scale(sw[i], 1.0 - delta)));
  }
  return out;
}

WeightHistory::WeightHistory(std::size_t window, double delta_rate, double delta)
    : window_(window), delta_rate_(delta_rate), delta_(delta) {
  if (window_ == 0) throw ContractError("weight history window must be positive");
  if (!(delta_rate_ >= 0.0)) throw ContractError("delta rate must be non-negative");
  if (!(delta_ >= 0.0 && delta_ <= 1.0)) throw ContractError("delta must lie in [0, 1]");
}

void WeightHistory::push(WeightVector overall) {
  if (!entries_.empty() && entries_.front().size() != overall.size()) {
    throw ContractError("weight history entries must share one attribute count");
  }
  overall.role = WeightRole::Overall;
  entries_.push_back(std::move(overall));
  while (entries_.size() > window_) entries_.pop_front();
}

std::optional<WeightVector> empirical_weights(const WeightHistory& h) {
  if (h.empty()) return std::nullopt;
  const std::size_t n = h.entries().front().size();
  // Running mean: exact when every entry is identical.
  std::vector<std::array<double, 4>> mean(n);
  std::size_t count = 0;
  for (const auto& entry : h.entries()) {
    ++count;
    for (std::size_t i = 0; i < n; ++i) {
      const auto& c = entry[i].components();
      for (std::size_t k = 0; k < 4; ++k) {
        mean[i][k] += (c[k] - mean[i][k]) / static_cast<double>(count);
      }
    }
  }
  WeightVector out{WeightRole::Empirical, {}};
  out.weights.reserve(n);
  for (const auto& m : mean) out.weights.emplace_back(m[0], m[1], m[2], m[3]);
  return out;
}

WeightHistory advance_delta(WeightHistory h, WeightVector overall) {
  h.push(std::move(overall));
  h.delta_ = std::min(1.0, h.delta_ + h.delta_rate_);
  return h;
}

}  // namespace repute
