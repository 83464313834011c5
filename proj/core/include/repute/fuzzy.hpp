#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string_view>

namespace repute {

/// Trapezoidal fuzzy number (a1, a2, a3, a4) with a1 <= a2 <= a3 <= a4.
///
/// Construction rejects unordered or non-finite components with a
/// DomainError, so every live value satisfies the invariant. Values are
/// immutable; all arithmetic returns new numbers.
class TrapezoidalFuzzyNumber {
 public:
  /// The additive identity (0, 0, 0, 0).
  constexpr TrapezoidalFuzzyNumber() = default;
  TrapezoidalFuzzyNumber(double a1, double a2, double a3, double a4);

  /// Degenerate crisp number (c, c, c, c).
  static TrapezoidalFuzzyNumber crisp(double c);

  double a1() const noexcept { return c_[0]; }
  double a2() const noexcept { return c_[1]; }
  double a3() const noexcept { return c_[2]; }
  double a4() const noexcept { return c_[3]; }
  const std::array<double, 4>& components() const noexcept { return c_; }

  bool strictly_positive() const noexcept { return c_[0] > 0.0; }

  friend bool operator==(const TrapezoidalFuzzyNumber&, const TrapezoidalFuzzyNumber&) = default;

 private:
  std::array<double, 4> c_{0.0, 0.0, 0.0, 0.0};
};

using Tfn = TrapezoidalFuzzyNumber;

std::ostream& operator<<(std::ostream& os, const Tfn& a);

/// Component-wise sum.
Tfn add(const Tfn& a, const Tfn& b);

/// (1/a4, 1/a3, 1/a2, 1/a1). Throws DomainError unless a1 > 0.
Tfn inverse(const Tfn& a);

/// Raw output of the trapezoidal product approximation, before the
/// ordering repair. c2 = a2*b2 and c3 = a3*b3 exactly.
std::array<double, 4> approx_product_components(const Tfn& a, const Tfn& b) noexcept;

/// Trapezoidal approximation of the fuzzy product. The outer components
/// follow the quadratic-branch approximation; the core is the exact
/// product of the cores. If the approximation ever leaves c1 > c2 or
/// c4 < c3 the outer component is clamped onto the core and the repair
/// counter is incremented. Intended for non-negative operands, for which
/// the repair provably never fires.
Tfn approx_multiply(const Tfn& a, const Tfn& b);

/// Number of times approx_multiply had to repair its output, process-wide.
std::uint64_t product_repair_count() noexcept;
void reset_product_repair_count() noexcept;

/// (c*a1, c*a2, c*a3, c*a4). Throws DomainError for c < 0.
Tfn scale(const Tfn& a, double c);

/// Centre of area of the trapezoid as used throughout: (a1+a2+a3+a4)/4.
double defuzzify_coa(const Tfn& a) noexcept;

// ---------------------------------------------------------------------------
// Linguistic scales
// ---------------------------------------------------------------------------

/// Relative importance of one attribute over another.
enum class ImportanceTerm { E, M, H, VH, EI };
/// Linguistic performance of a seller's offer on one attribute.
enum class PerformanceTerm { P, A, H, VH, EX };

inline constexpr std::size_t kScaleSize = 5;

std::string_view to_string(ImportanceTerm t) noexcept;
std::string_view to_string(PerformanceTerm t) noexcept;

/// Throw LookupError for anything but the exact abbreviations.
ImportanceTerm parse_importance_term(std::string_view s);
PerformanceTerm parse_performance_term(std::string_view s);

/// Maps {E, M, H, VH, EI} to fuzzy numbers. All five quadruples must be
/// strictly positive and strictly increasing by centroid.
class ImportanceScale {
 public:
  using Term = ImportanceTerm;

  /// E=(1,1,1,1) M=(1,3,3,5) H=(3,5,5,7) VH=(5,7,7,9) EI=(7,9,9,11).
  ImportanceScale();
  explicit ImportanceScale(const std::array<Tfn, kScaleSize>& terms);

  const Tfn& at(Term t) const noexcept { return terms_[static_cast<std::size_t>(t)]; }
  const std::array<Tfn, kScaleSize>& terms() const noexcept { return terms_; }

 private:
  std::array<Tfn, kScaleSize> terms_;
};

/// Maps {P, A, H, VH, EX} to fuzzy numbers. Quadruples must be
/// non-negative with a positive upper bound, strictly increasing by
/// centroid.
class PerformanceScale {
 public:
  using Term = PerformanceTerm;

  /// P=(0,1,2,4) A=(1,3,4,6) H=(4,6,7,9) VH=(7,9,10,12) EX=(10,12,13,13).
  PerformanceScale();
  explicit PerformanceScale(const std::array<Tfn, kScaleSize>& terms);

  const Tfn& at(Term t) const noexcept { return terms_[static_cast<std::size_t>(t)]; }
  const std::array<Tfn, kScaleSize>& terms() const noexcept { return terms_; }

  /// Index of the term whose quadruple equals `value`, if any.
  std::optional<Term> find(const Tfn& value) const noexcept;

 private:
  std::array<Tfn, kScaleSize> terms_;
};

inline const Tfn& term_to_fuzzy(const ImportanceScale& scale, ImportanceTerm t) { return scale.at(t); }
inline const Tfn& term_to_fuzzy(const PerformanceScale& scale, PerformanceTerm t) { return scale.at(t); }
const Tfn& term_to_fuzzy(const ImportanceScale& scale, std::string_view term);
const Tfn& term_to_fuzzy(const PerformanceScale& scale, std::string_view term);

}  // namespace repute
