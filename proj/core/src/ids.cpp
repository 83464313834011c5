#include "repute/ids.hpp"

#include <cctype>

namespace repute {

namespace {

bool is_digit(char c) noexcept { return std::isdigit(static_cast<unsigned char>(c)) != 0; }

}  // namespace

std::strong_ordering natural_compare(std::string_view lhs, std::string_view rhs) noexcept {
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < lhs.size() && j < rhs.size()) {
    if (is_digit(lhs[i]) && is_digit(rhs[j])) {
      std::size_t ei = i;
      std::size_t ej = j;
      while (ei < lhs.size() && is_digit(lhs[ei])) ++ei;
      while (ej < rhs.size() && is_digit(rhs[ej])) ++ej;
      // Strip leading zeros, then longer run is larger.
      std::size_t zi = i;
      std::size_t zj = j;
      while (zi + 1 < ei && lhs[zi] == '0') ++zi;
      while (zj + 1 < ej && rhs[zj] == '0') ++zj;
      if (auto len = (ei - zi) <=> (ej - zj); len != 0) return len;
      if (auto digits = lhs.substr(zi, ei - zi).compare(rhs.substr(zj, ej - zj)); digits != 0) {
        return digits < 0 ? std::strong_ordering::less : std::strong_ordering::greater;
      }
      // "s01" vs "s1": fall back to run length so the order stays total.
      if (auto raw = (ei - i) <=> (ej - j); raw != 0) return raw;
      i = ei;
      j = ej;
      continue;
    }
    if (lhs[i] != rhs[j]) {
      return static_cast<unsigned char>(lhs[i]) <=> static_cast<unsigned char>(rhs[j]);
    }
    ++i;
    ++j;
  }
  return (lhs.size() - i) <=> (rhs.size() - j);
}

}  // namespace repute
