#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace repute {

/// Orders strings so that embedded digit runs compare numerically:
/// "s2" < "s10". Used for every agent ordering in the simulator.
std::strong_ordering natural_compare(std::string_view lhs, std::string_view rhs) noexcept;

/// Strongly typed agent/good identifier. Tag keeps buyer, seller and good
/// ids from being mixed up.
template <typename Tag>
class Id {
 public:
  Id() = default;
  explicit Id(std::string value) : value_(std::move(value)) {}

  const std::string& str() const noexcept { return value_; }
  bool empty() const noexcept { return value_.empty(); }

  friend bool operator==(const Id& a, const Id& b) noexcept { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const Id& a, const Id& b) noexcept {
    return natural_compare(a.value_, b.value_);
  }
  friend std::ostream& operator<<(std::ostream& os, const Id& id) { return os << id.value_; }

 private:
  std::string value_;
};

struct BuyerTag {};
struct SellerTag {};
struct GoodTag {};

using BuyerId = Id<BuyerTag>;
using SellerId = Id<SellerTag>;
using GoodId = Id<GoodTag>;

}  // namespace repute

template <typename Tag>
struct std::hash<repute::Id<Tag>> {
  std::size_t operator()(const repute::Id<Tag>& id) const noexcept {
    return std::hash<std::string>{}(id.str());
  }
};
