#include "repute/fuzzy.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <ostream>
#include <sstream>
#include <string>

#include "repute/errors.hpp"

namespace repute {

namespace {

std::atomic<std::uint64_t> g_repair_count{0};

std::string describe(double a1, double a2, double a3, double a4) {
  std::ostringstream os;
  os << '(' << a1 << ", " << a2 << ", " << a3 << ", " << a4 << ')';
  return os.str();
}

constexpr std::array<std::string_view, kScaleSize> kImportanceNames{"E", "M", "H", "VH", "EI"};
constexpr std::array<std::string_view, kScaleSize> kPerformanceNames{"P", "A", "H", "VH", "EX"};

template <typename Term>
Term parse_term(std::string_view s, const std::array<std::string_view, kScaleSize>& names,
                std::string_view scale_name) {
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (names[i] == s) return static_cast<Term>(i);
  }
  throw LookupError("unknown " + std::string(scale_name) + " term '" + std::string(s) + "'");
}

void check_centroid_order(const std::array<Tfn, kScaleSize>& terms,
                          const std::array<std::string_view, kScaleSize>& names,
                          std::string_view scale_name) {
  for (std::size_t i = 1; i < terms.size(); ++i) {
    if (!(defuzzify_coa(terms[i - 1]) < defuzzify_coa(terms[i]))) {
      throw DomainError(std::string(scale_name) + " scale: centroid of " + std::string(names[i - 1]) +
                        " must be below centroid of " + std::string(names[i]));
    }
  }
}

}  // namespace

TrapezoidalFuzzyNumber::TrapezoidalFuzzyNumber(double a1, double a2, double a3, double a4)
    : c_{a1, a2, a3, a4} {
  if (!std::isfinite(a1) || !std::isfinite(a2) || !std::isfinite(a3) || !std::isfinite(a4)) {
    throw DomainError("fuzzy number has a non-finite component " + describe(a1, a2, a3, a4));
  }
  if (!(a1 <= a2 && a2 <= a3 && a3 <= a4)) {
    throw DomainError("fuzzy number components out of order " + describe(a1, a2, a3, a4));
  }
}

Tfn TrapezoidalFuzzyNumber::crisp(double c) { return Tfn(c, c, c, c); }

std::ostream& operator<<(std::ostream& os, const Tfn& a) {
  return os << '(' << a.a1() << ", " << a.a2() << ", " << a.a3() << ", " << a.a4() << ')';
}

Tfn add(const Tfn& a, const Tfn& b) {
  return Tfn(a.a1() + b.a1(), a.a2() + b.a2(), a.a3() + b.a3(), a.a4() + b.a4());
}

Tfn inverse(const Tfn& a) {
  if (!a.strictly_positive()) {
    std::ostringstream os;
    os << "inverse undefined for non-positive fuzzy number " << a;
    throw DomainError(os.str());
  }
  return Tfn(1.0 / a.a4(), 1.0 / a.a3(), 1.0 / a.a2(), 1.0 / a.a1());
}

std::array<double, 4> approx_product_components(const Tfn& a, const Tfn& b) noexcept {
  // Expanded, the outer formulas collapse to
  //   c1 = a1*b1 - (a2 - a1)(b2 - b1)/2
  //   c4 = a4*b4 - (a4 - a3)(b4 - b3)/2
  // which is exact when either operand has a crisp left (right) spread.
  const double c1 = a.a1() * b.a1() - 0.5 * (a.a2() - a.a1()) * (b.a2() - b.a1());
  const double c4 = a.a4() * b.a4() - 0.5 * (a.a4() - a.a3()) * (b.a4() - b.a3());
  return {c1, a.a2() * b.a2(), a.a3() * b.a3(), c4};
}

Tfn approx_multiply(const Tfn& a, const Tfn& b) {
  auto [c1, c2, c3, c4] = approx_product_components(a, b);
  if (c1 > c2 || c4 < c3) {
    g_repair_count.fetch_add(1, std::memory_order_relaxed);
    c1 = std::min(c1, c2);
    c4 = std::max(c4, c3);
  }
  return Tfn(c1, c2, c3, c4);
}

std::uint64_t product_repair_count() noexcept { return g_repair_count.load(std::memory_order_relaxed); }

void reset_product_repair_count() noexcept { g_repair_count.store(0, std::memory_order_relaxed); }

Tfn scale(const Tfn& a, double c) {
  if (!(c >= 0.0)) {
    throw DomainError("fuzzy scale factor must be non-negative, got " + std::to_string(c));
  }
  return Tfn(c * a.a1(), c * a.a2(), c * a.a3(), c * a.a4());
}

double defuzzify_coa(const Tfn& a) noexcept { return (a.a1() + a.a2() + a.a3() + a.a4()) / 4.0; }

std::string_view to_string(ImportanceTerm t) noexcept { return kImportanceNames[static_cast<std::size_t>(t)]; }

std::string_view to_string(PerformanceTerm t) noexcept { return kPerformanceNames[static_cast<std::size_t>(t)]; }

ImportanceTerm parse_importance_term(std::string_view s) {
  return parse_term<ImportanceTerm>(s, kImportanceNames, "importance");
}

PerformanceTerm parse_performance_term(std::string_view s) {
  return parse_term<PerformanceTerm>(s, kPerformanceNames, "performance");
}

ImportanceScale::ImportanceScale()
    : ImportanceScale({Tfn(1, 1, 1, 1), Tfn(1, 3, 3, 5), Tfn(3, 5, 5, 7), Tfn(5, 7, 7, 9), Tfn(7, 9, 9, 11)}) {}

ImportanceScale::ImportanceScale(const std::array<Tfn, kScaleSize>& terms) : terms_(terms) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (!terms_[i].strictly_positive()) {
      throw DomainError("importance scale: term " + std::string(kImportanceNames[i]) + " must be strictly positive");
    }
  }
  check_centroid_order(terms_, kImportanceNames, "importance");
}

PerformanceScale::PerformanceScale()
    : PerformanceScale(
          {Tfn(0, 1, 2, 4), Tfn(1, 3, 4, 6), Tfn(4, 6, 7, 9), Tfn(7, 9, 10, 12), Tfn(10, 12, 13, 13)}) {}

PerformanceScale::PerformanceScale(const std::array<Tfn, kScaleSize>& terms) : terms_(terms) {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i].a1() < 0.0 || !(terms_[i].a4() > 0.0)) {
      throw DomainError("performance scale: term " + std::string(kPerformanceNames[i]) +
                        " must be non-negative with a positive upper bound");
    }
  }
  check_centroid_order(terms_, kPerformanceNames, "performance");
}

std::optional<PerformanceTerm> PerformanceScale::find(const Tfn& value) const noexcept {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    if (terms_[i] == value) return static_cast<PerformanceTerm>(i);
  }
  return std::nullopt;
}

const Tfn& term_to_fuzzy(const ImportanceScale& scale, std::string_view term) {
  return scale.at(parse_importance_term(term));
}

const Tfn& term_to_fuzzy(const PerformanceScale& scale, std::string_view term) {
  return scale.at(parse_performance_term(term));
}

}  // namespace repute
