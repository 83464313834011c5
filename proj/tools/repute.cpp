#include <CLI11.hpp>
#include <fmt/format.h>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "repute/config.hpp"
#include "repute/errors.hpp"
#include "repute/market.hpp"
#include "repute/report.hpp"
#include "repute/tables.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;  // invalid config or a reproduction outside tolerance
constexpr int kError = 2;   // usage or I/O problem

constexpr const char* kOutDirVariable = "REPUTE_OUT_DIR";

fs::path default_out_dir() {
  if (const char* env = std::getenv(kOutDirVariable); env && *env) return env;
  return "repute-out";
}

void print_issues(const repute::ConfigError& e) {
  for (const auto& issue : e.issues()) std::cerr << "error: " << issue << '\n';
}

struct Job {
  fs::path config;
  std::uint64_t seed = 0;
  fs::path out;
};

struct JobOutcome {
  int status = kOk;
  std::string message;
};

JobOutcome execute(const Job& job, const repute::ScenarioConfig& config) {
  try {
    const auto result = repute::run_scenario(config, job.seed);
    const auto files = repute::write_run(result, job.out);
    return {kOk, fmt::format("{} seed {}: {} transactions -> {}", job.config.string(), job.seed,
                             result.transcript.size(), files.transcript.parent_path().string())};
  } catch (const repute::Error& e) {
    return {kError, fmt::format("{} seed {}: {}", job.config.string(), job.seed, e.what())};
  }
}

int cmd_run(const std::vector<fs::path>& configs, std::optional<std::uint64_t> seed, std::size_t replicates,
            std::optional<fs::path> out, unsigned jobs) {
  std::vector<repute::ScenarioConfig> loaded;
  bool invalid = false;
  for (const auto& path : configs) {
    try {
      loaded.push_back(repute::load_config(path));
    } catch (const repute::ConfigError& e) {
      print_issues(e);
      invalid = true;
    }
  }
  if (invalid) return kFailed;

  const fs::path root = out.value_or(default_out_dir());
  std::vector<Job> work;
  std::vector<std::size_t> config_of;
  const bool single = configs.size() == 1 && replicates == 1;
  for (std::size_t c = 0; c < configs.size(); ++c) {
    const std::uint64_t base = seed.value_or(loaded[c].seed);
    for (std::size_t k = 0; k < replicates; ++k) {
      const std::uint64_t s = base + k;
      const fs::path dir = single ? root : root / fmt::format("{}-seed{}", configs[c].stem().string(), s);
      work.push_back({configs[c], s, dir});
      config_of.push_back(c);
    }
  }

  std::vector<JobOutcome> outcomes(work.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < work.size(); i = next++) outcomes[i] = execute(work[i], loaded[config_of[i]]);
  };
  const unsigned threads = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(work.size())));
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int status = kOk;
  for (const auto& o : outcomes) {
    (o.status == kOk ? std::cout : std::cerr) << o.message << '\n';
    status = std::max(status, o.status);
  }
  return status;
}

int cmd_tables(const std::vector<std::string>& which, bool check, std::optional<fs::path> csv) {
  std::vector<repute::ReproductionTable> tables;
  for (const auto& w : which) {
    try {
      tables.push_back(repute::reproduce_table(w));
    } catch (const repute::LookupError& e) {
      std::cerr << "error: " << e.what() << '\n';
      return kError;
    }
  }
  bool all_passed = true;
  for (std::size_t i = 0; i < tables.size(); ++i) {
    if (i) std::cout << '\n';
    repute::print_table(std::cout, tables[i]);
    all_passed = all_passed && tables[i].passed();
  }
  if (csv) {
    std::ofstream f;
    std::ostream* os = &std::cout;
    if (*csv != "-") {
      f.open(*csv, std::ios::binary | std::ios::trunc);
      if (!f) {
        std::cerr << "error: cannot write " << csv->string() << '\n';
        return kError;
      }
      os = &f;
    }
    for (std::size_t i = 0; i < tables.size(); ++i) {
      std::ostringstream one;
      repute::write_table_csv(one, tables[i]);
      std::string text = one.str();
      if (i) text.erase(0, text.find('\n') + 1);  // header once
      *os << text;
    }
  }
  return check && !all_passed ? kFailed : kOk;
}

int cmd_validate(const std::vector<fs::path>& configs) {
  int status = kOk;
  for (const auto& path : configs) {
    try {
      const auto cfg = repute::load_config(path);
      std::cout << fmt::format("{}: ok ({} buyers, {} sellers, {} goods, {} demands, {} attacks, {} steps)\n",
                               path.string(), cfg.buyers.size(), cfg.sellers.size(), cfg.goods.size(),
                               cfg.schedule.size(), cfg.attacks.size(), cfg.steps);
    } catch (const repute::ConfigError& e) {
      print_issues(e);
      status = kFailed;
    }
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dynamic reputation market simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "repute 0.1.0");

  auto* run = app.add_subcommand("run", "Simulate a scenario and write transcript, series and summary");
  std::vector<fs::path> run_configs;
  std::optional<std::uint64_t> seed;
  std::size_t replicates = 1;
  std::optional<fs::path> out;
  unsigned jobs = 1;
  run->add_option("config", run_configs, "Scenario file(s)")->required()->check(CLI::ExistingFile);
  run->add_option("--seed", seed, "Random seed (default: the scenario's own)");
  run->add_option("--replicates", replicates, "Runs per scenario with consecutive seeds")->check(CLI::PositiveNumber);
  run->add_option("--out", out, fmt::format("Output directory (default: ${} or ./repute-out)", kOutDirVariable));
  run->add_option("--jobs,-j", jobs, "Parallel runs")->check(CLI::PositiveNumber);

  auto* tables = app.add_subcommand("tables", "Recompute the published reputation tables");
  std::vector<std::string> which;
  bool check = false;
  std::optional<fs::path> csv;
  tables->add_option("table", which, "t1, t2, t6 (or table1, table2, table6)")->required();
  tables->add_flag("--check", check, "Exit nonzero if any cell is outside tolerance");
  tables->add_option("--csv", csv, "Also write the cells as CSV ('-' for stdout)");

  auto* validate = app.add_subcommand("validate", "Check scenario files and list every problem");
  std::vector<fs::path> validate_configs;
  validate->add_option("config", validate_configs, "Scenario file(s)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kError;
  }

  try {
    if (*run) return cmd_run(run_configs, seed, replicates, out, jobs);
    if (*tables) return cmd_tables(which, check, csv);
    if (*validate) return cmd_validate(validate_configs);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kError;
  }
  return kError;
}
