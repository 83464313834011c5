#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>

#include "repute/market.hpp"

namespace repute {

inline constexpr std::array<std::string_view, 14> kTranscriptColumns = {
    "step", "buyer", "seller", "good", "x",     "f",     "v",
    "delta", "r_next", "shared", "alpha", "beta", "or_next", "category"};

inline constexpr std::array<std::string_view, 6> kSeriesColumns = {"step",    "buyer",        "seller",
                                                                   "overall", "transactions", "category"};

/// Shortest decimal text that reads back to the same double. Never depends
/// on the global locale.
std::string format_real(double v);

/// "from->to" for a changed category, otherwise just the category.
std::string format_transition(const CategoryTransition& t);

void write_transcript_csv(std::ostream& out, std::span<const TransactionRecord> transcript);
void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series);

/// Human-readable run report: final category sets per buyer, final overall
/// reputations, order shares, ballot-stuffing effects and market events.
void write_summary(std::ostream& out, const RunResult& result);

struct RunFiles {
  std::filesystem::path transcript;
  std::filesystem::path series;
  std::filesystem::path summary;
};

/// Writes transcript.csv, reputation_series.csv and summary.txt into `dir`,
/// creating it if needed. Throws Error when the directory is not writable.
RunFiles write_run(const RunResult& result, const std::filesystem::path& dir);

}  // namespace repute
