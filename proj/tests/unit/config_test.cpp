#include <doctest.h>

#include <filesystem>
#include <string>
#include <vector>

#include "repute/config.hpp"
#include "repute/errors.hpp"

using namespace repute;

namespace {

const std::string kData = REPUTE_DATA_DIR;

const char* kMinimal = R"(
[market]
name = minimal
steps = 5

[good g]
attributes = Q DP SO

[buyer b1]
compare g = M 1/H E
reputation s1 = 0.5 transactions 3

[seller s1]
offer g = H VH A price 1200

[schedule]
demand 0 b1 g
)";

std::vector<std::string> issues_of(const std::string& text, const std::string& source = "test.cfg") {
  try {
    parse_config(text, source);
  } catch (const ConfigError& e) {
    return e.issues();
  }
  return {};
}

bool mentions(const std::vector<std::string>& issues, const std::string& needle) {
  for (const auto& i : issues) {
    if (i.find(needle) != std::string::npos) return true;
  }
  return false;
}

std::string with(const std::string& extra) { return std::string(kMinimal) + extra; }

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("minimal scenario") {
    const auto cfg = parse_config(kMinimal);
    CHECK(cfg.name == "minimal");
    CHECK(cfg.steps == 5);
    REQUIRE(cfg.goods.size() == 1);
    CHECK(cfg.goods[0].attributes == std::vector<std::string>{"Q", "DP", "SO"});
    REQUIRE(cfg.buyers.size() == 1);
    CHECK(cfg.buyers[0].preferences.at(GoodId("g")).size() == 3);
    REQUIRE(cfg.buyers[0].reputations.size() == 1);
    CHECK(cfg.buyers[0].reputations[0].overall == 0.5);
    CHECK(cfg.buyers[0].reputations[0].transactions == 3);
    REQUIRE(cfg.sellers.size() == 1);
    CHECK(cfg.sellers[0].catalog.at(GoodId("g")).price == 1200);
    CHECK(cfg.sellers[0].profile.kind == HonestyProfile::Kind::Honest);
    REQUIRE(cfg.schedule.size() == 1);
    CHECK_FALSE(cfg.schedule[0].responders.has_value());
  }

  TEST_CASE("policy keys") {
    const auto cfg = parse_config(R"(
[market]
steps = 1
[good g]
attributes = Q
[buyer b1]
reputed_threshold = 0.6
disreputed_threshold = 1/5
penalty = 3
value_scale = 0.002
alpha_rate = 0.02
beta_rate = 0
rho = 0.5
rho_min = 0.1
rho_decay = 0.9
)");
    const auto& p = cfg.buyers[0].policy;
    CHECK(p.reputed_threshold == 0.6);
    CHECK(p.disreputed_threshold == 0.2);
    CHECK(p.penalty == 3);
    CHECK(p.value_scale == 0.002);
    CHECK(p.alpha_rate == 0.02);
    CHECK(p.beta_rate == 0.0);
    CHECK(p.exploration.initial == 0.5);
    CHECK(p.exploration.minimum == 0.1);
    CHECK(p.exploration.decay == 0.9);
  }

  TEST_CASE("inverted thresholds are rejected with a location") {
    const auto issues = issues_of(R"([market]
steps = 1
[good g]
attributes = Q
[buyer b1]
reputed_threshold = 0.1
disreputed_threshold = 0.2
)");
    REQUIRE(issues.size() == 1);
    CHECK(issues[0].rfind("test.cfg:5: buyer b1: ", 0) == 0);
    CHECK(mentions(issues, "threshold"));
  }

  TEST_CASE("unknown references") {
    const auto attack = issues_of(with(R"(
[attack a]
kind = BS
target = s9
raters = b1
level = 0.9
)"));
    CHECK(mentions(attack, "attack a: undeclared seller s9"));

    CHECK(mentions(issues_of(with("demand 1 b7 g\n")), "undeclared buyer b7"));
    CHECK(mentions(issues_of(with("demand 1 b1 h\n")), "undeclared good h"));
    CHECK(mentions(issues_of(with("demand 1 b1 g : s1 s4\n")), "undeclared seller s4"));
    CHECK(mentions(issues_of(with("demand 9 b1 g\n")), "not below the step count"));
  }

  TEST_CASE("syntax errors carry line numbers") {
    const auto issues = issues_of("[market]\nsteps = 1\nbogus = 3\n[wat]\n[good g\nfoo\n");
    CHECK(mentions(issues, "test.cfg:3: unknown market setting 'bogus'"));
    CHECK(mentions(issues, "test.cfg:4: unknown section [wat]"));
    CHECK(mentions(issues, "test.cfg:5: unterminated section header"));
    CHECK(mentions(issues, "test.cfg:6:"));
  }

  TEST_CASE("every problem is reported at once") {
    const auto issues = issues_of(with(R"(
[seller s2]
offer g = H H price 100
[attack x]
kind = ZZ
)"));
    CHECK(mentions(issues, "needs 3 ratings"));
    CHECK(mentions(issues, "unknown attack kind 'ZZ'"));
  }

  TEST_CASE("comparison and offer shapes") {
    CHECK(mentions(issues_of(R"([market]
steps = 1
[good g]
attributes = Q DP SO
[buyer b1]
compare g = M H
)"),
                   "needs 3 upper-triangle judgements, got 2"));
    CHECK_FALSE(issues_of(with("")).size());
    CHECK(mentions(issues_of(with("[seller s3]\noffer g = H H H price 0\n")), "must be positive"));
  }

  TEST_CASE("profiles") {
    const auto cfg = parse_config(with(R"(
[seller s2]
offer g = H H H price 10
profile = shift 0 -1 1
[seller s3]
offer g = H H H price 10
profile = value 3000 below 0 above -2
)"));
    const auto& shift = cfg.find_seller(SellerId("s2"))->profile;
    CHECK(shift.kind == HonestyProfile::Kind::Shift);
    CHECK(shift.shift == std::vector<int>{0, -1, 1});
    const auto& vc = cfg.find_seller(SellerId("s3"))->profile;
    CHECK(vc.kind == HonestyProfile::Kind::ValueConditional);
    CHECK(vc.value_threshold == 3000);
    CHECK(vc.level_shift(2000, 0) == 0);
    CHECK(vc.level_shift(4000, 0) == -2);
    CHECK(mentions(issues_of(with("[seller s4]\noffer g = H H H price 1\nprofile = shift 1 2\n")),
                   "one level or one per attribute"));
  }

  TEST_CASE("repeat expansion") {
    const auto cfg = parse_config(R"(
[schedule]
repeat b1 g every 2 from 1
repeat b1 g every 3 to 3 : s1
[market]
steps = 8
[good g]
attributes = Q DP
[buyer b1]
compare g = H
[seller s1]
offer g = H A price 5
)");
    std::vector<std::size_t> open;
    std::vector<std::size_t> bounded;
    for (const auto& d : cfg.schedule) (d.responders ? bounded : open).push_back(d.step);
    CHECK(open == std::vector<std::size_t>{1, 3, 5, 7});
    CHECK(bounded == std::vector<std::size_t>{0, 3});
    CHECK(mentions(issues_of(with("repeat b1 g every 0\n")), "must be positive"));
  }

  TEST_CASE("scale overrides") {
    const auto cfg = parse_config(with(R"(
[scales]
performance P = 0 1 2 3
performance A = 2 3 4 5
performance H = 4 5 6 7
performance VH = 6 7 8 9
performance EX = 8 9 10 10
)"));
    CHECK(cfg.performance_scale.at(PerformanceTerm::H).a2() == 5);
    CHECK(mentions(issues_of(with("[scales]\nimportance E = 1 1 1 1\n")), "needs all five terms"));
    CHECK(mentions(issues_of(with("[scales]\nperformance P = 1 2 3\n")), "four components"));
  }

  TEST_CASE("attacks") {
    const auto cfg = parse_config(with(R"(
[buyer b2]
compare g = E E E
[attack pact]
kind = REC_RET
target = s1
partner = b2
mode = retaliation
surprise = 2
start = 1
end = 3
[attack rebrand]
kind = REN
target = s1
new_id = s8
)"));
    REQUIRE(cfg.attacks.size() == 2);
    const auto& pact = cfg.attacks[0];
    CHECK(pact.kind == AttackKind::ReciprocityRetaliation);
    CHECK_FALSE(pact.reciprocity);
    CHECK(pact.surprise == 2);
    CHECK(pact.start == 1);
    CHECK(*pact.end == 3);
    CHECK(cfg.attacks[1].new_identity.str() == "s8");
  }

  TEST_CASE("files") {
    CHECK_THROWS_AS(load_config("/nonexistent/x.cfg"), ConfigError);
    for (const auto& entry : std::filesystem::directory_iterator(kData + "/scenarios")) {
      CAPTURE(entry.path().string());
      CHECK_NOTHROW(load_config(entry.path()));
    }
  }
}
