#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "repute/market.hpp"

namespace repute {

struct TableCell {
  std::string row;
  std::string quantity;
  double computed = 0.0;
  std::optional<double> published;
  double tolerance = 0.0;
  bool checked = true;  // false: shown for comparison, not part of the verdict

  std::optional<double> delta() const;
  bool pass() const;
};

struct TableCheck {
  std::string description;
  bool passed = false;
};

struct ReproductionTable {
  std::string id;  // t1, t2, t6
  std::string title;
  std::vector<TableCell> cells;
  std::vector<TableCheck> checks;
  std::vector<std::string> notes;

  bool passed() const;
};

inline constexpr double kReputationTolerance = 0.005;
inline constexpr double kPercentTolerance = 0.5;

/// Transaction values of the growth and decline tables.
inline constexpr double kTableValues[] = {100, 500, 2000, 5000, 10000, 20000};
inline constexpr double kTablePrior = 0.37;

/// One ballot-stuffing experiment: a buyer with `transactions` prior
/// purchases from the target buys once more at `value` while colluders
/// report `stuffed`.
struct StuffingCase {
  double prior = 0.0;
  std::size_t transactions = 0;
  double value = 0.0;
  double stuffed = 0.0;
};

/// The five experiments of the ballot-stuffing table.
std::vector<StuffingCase> stuffing_cases();

/// Market with one buyer (b4), three colluding buyers and the target seller
/// s2, which over-delivers so the purchase is satisfactory.
ScenarioConfig stuffing_scenario(const StuffingCase& c);

/// Runs stuffing_scenario and returns the single transaction.
TransactionRecord simulate_stuffing(const StuffingCase& c);

ReproductionTable reproduce_growth_table();    // t1
ReproductionTable reproduce_decline_table();   // t2
ReproductionTable reproduce_stuffing_table();  // t6

/// Accepts t1/t2/t6 and table1/table2/table6. Throws LookupError otherwise.
ReproductionTable reproduce_table(std::string_view which);

void print_table(std::ostream& out, const ReproductionTable& table);
void write_table_csv(std::ostream& out, const ReproductionTable& table);

}  // namespace repute
