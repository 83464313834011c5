#include "repute/report.hpp"

#include <fmt/format.h>
#include <fmt/ostream.h>

#include <fstream>
#include <map>
#include <ostream>

#include "repute/errors.hpp"

namespace repute {

std::string format_real(double v) { return fmt::format("{}", v); }

std::string format_transition(const CategoryTransition& t) {
  if (!t.changed()) return std::string(to_string(t.to));
  return fmt::format("{}->{}", to_string(t.from), to_string(t.to));
}

namespace {

template <std::size_t N>
void header(std::ostream& out, const std::array<std::string_view, N>& columns) {
  for (std::size_t i = 0; i < N; ++i) out << (i ? "," : "") << columns[i];
  out << '\n';
}

std::string report_real(double v) { return fmt::format("{:.4f}", v); }

}  // namespace

void write_transcript_csv(std::ostream& out, std::span<const TransactionRecord> transcript) {
  header(out, kTranscriptColumns);
  for (const auto& t : transcript) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{},{}\n", t.step, t.buyer.str(), t.seller.str(),
                       t.good.str(), format_real(t.x), format_real(t.f), format_real(t.v), format_real(t.delta),
                       format_real(t.r_next), t.shared ? format_real(*t.shared) : std::string(),
                       format_real(t.alpha), format_real(t.beta), format_real(t.or_next),
                       format_transition(t.category));
  }
}

void write_series_csv(std::ostream& out, std::span<const SeriesPoint> series) {
  header(out, kSeriesColumns);
  for (const auto& p : series) {
    out << fmt::format("{},{},{},{},{},{}\n", p.step, p.buyer.str(), p.seller.str(), format_real(p.overall),
                       p.transactions, to_string(p.category));
  }
}

void write_summary(std::ostream& out, const RunResult& r) {
  out << fmt::format("scenario: {}\nseed: {}\ntransactions: {}\n", r.scenario.empty() ? "(unnamed)" : r.scenario,
                     r.seed, r.transcript.size());

  out << "\nfinal categories\n";
  constexpr SellerCategory kOrder[] = {SellerCategory::Reputed, SellerCategory::NonReputed,
                                       SellerCategory::DisReputed, SellerCategory::New};
  for (const auto& b : r.final_buyers) {
    out << "  " << b.id.str() << ":";
    for (auto c : kOrder) {
      out << "  " << to_string(c) << " {";
      const auto members = b.categories.members(c);
      for (std::size_t i = 0; i < members.size(); ++i) out << (i ? ", " : "") << members[i].str();
      out << "}";
    }
    out << '\n';
  }

  out << "\nfinal overall reputation\n";
  for (const auto& b : r.final_buyers) {
    for (const auto& [seller, rec] : b.records) {
      out << fmt::format("  or({}, {}) = {}  after {} transactions\n", b.id.str(), seller.str(),
                         report_real(rec.overall), rec.transactions);
    }
  }

  out << "\norders\n";
  for (const auto& [seller, n] : r.orders) out << fmt::format("  {}: {}\n", seller.str(), n);
  const std::size_t total = r.honest_orders + r.dishonest_orders;
  const double share = total ? static_cast<double>(r.honest_orders) / static_cast<double>(total) : 0.0;
  out << fmt::format("  honest share: {} ({} of {})\n", report_real(share), r.honest_orders, total);

  bool any_bs = false;
  for (const auto& t : r.transcript) {
    if (!t.bs_effect) continue;
    if (!any_bs) out << "\nballot stuffing effect\n";
    any_bs = true;
    out << fmt::format("  step {} {}/{}: r = {}, shared = {}, or = {}, effect = {}%\n", t.step, t.buyer.str(),
                       t.seller.str(), report_real(t.r_next), t.shared ? report_real(*t.shared) : "-",
                       report_real(t.or_next), report_real(*t.bs_effect));
  }

  if (!r.events.empty()) {
    out << "\nevents\n";
    for (const auto& e : r.events) out << fmt::format("  step {} {}: {}\n", e.step, to_string(e.kind), e.detail);
  }
}

RunFiles write_run(const RunResult& result, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir.string() + ": " + ec.message());

  RunFiles files{dir / "transcript.csv", dir / "reputation_series.csv", dir / "summary.txt"};
  auto open = [](const std::filesystem::path& p) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write " + p.string());
    return f;
  };
  auto finish = [](std::ofstream& f, const std::filesystem::path& p) {
    f.flush();
    if (!f) throw Error("failed writing " + p.string());
  };
  {
    auto f = open(files.transcript);
    write_transcript_csv(f, result.transcript);
    finish(f, files.transcript);
  }
  {
    auto f = open(files.series);
    write_series_csv(f, result.series);
    finish(f, files.series);
  }
  {
    auto f = open(files.summary);
    write_summary(f, result);
    finish(f, files.summary);
  }
  return files;
}

}  // namespace repute
