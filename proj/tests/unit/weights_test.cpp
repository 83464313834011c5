#include <doctest.h>

#include <numeric>
#include <random>

#include "approx.hpp"
#include "oracle.hpp"
#include "repute/errors.hpp"
#include "repute/weights.hpp"

using namespace repute;
using testing::close;

namespace {

std::vector<PairwiseJudgement> judgements(std::initializer_list<const char*> terms) {
  std::vector<PairwiseJudgement> out;
  for (const char* t : terms) out.push_back(parse_judgement(t));
  return out;
}

// Price, quality, delivery period, service offered.
FuzzyPairwiseMatrix case_study_matrix() {
  return matrix_from_judgements(4, judgements({"1/M", "1/H", "1/M", "M", "1/M", "1/M"}), ImportanceScale{});
}

// Direct evaluation: row sums times the inverse of the grand sum.
std::vector<oracle::Quad> oracle_weights(const FuzzyPairwiseMatrix& m) {
  const std::size_t n = m.size();
  std::vector<oracle::Quad> rows(n, oracle::Quad{0, 0, 0, 0});
  oracle::Quad grand{0, 0, 0, 0};
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) rows[i] = oracle::sum(rows[i], m.at(i, j).components());
    grand = oracle::sum(grand, rows[i]);
  }
  std::vector<oracle::Quad> out;
  for (const auto& r : rows) out.push_back(oracle::product(r, oracle::inverse(grand)));
  return out;
}

std::vector<PairwiseJudgement> random_judgements(std::size_t n, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> term(0, static_cast<int>(kScaleSize) - 1);
  std::bernoulli_distribution flip(0.5);
  std::vector<PairwiseJudgement> out;
  for (std::size_t k = 0; k < n * (n - 1) / 2; ++k) out.push_back({static_cast<ImportanceTerm>(term(rng)), flip(rng)});
  return out;
}

WeightVector overall(std::vector<Tfn> w) { return {WeightRole::Overall, std::move(w)}; }

}  // namespace

TEST_SUITE("weights") {
  TEST_CASE("judgement parsing") {
    CHECK(parse_judgement("M").term == ImportanceTerm::M);
    CHECK_FALSE(parse_judgement("M").reciprocal);
    CHECK(parse_judgement("1/VH").term == ImportanceTerm::VH);
    CHECK(parse_judgement("1/VH").reciprocal);
    CHECK(to_string(parse_judgement("1/EI")) == "1/EI");
    CHECK_THROWS_AS(parse_judgement("1/"), LookupError);
    CHECK_THROWS_AS(parse_judgement("X"), LookupError);
  }

  TEST_CASE("matrix from judgements derives reciprocals") {
    const auto m = case_study_matrix();
    CHECK(m.at(0, 1) == Tfn(1.0 / 5, 1.0 / 3, 1.0 / 3, 1.0));
    CHECK(m.at(1, 0) == Tfn(1, 3, 3, 5));
    CHECK(m.at(0, 2) == Tfn(1.0 / 7, 1.0 / 5, 1.0 / 5, 1.0 / 3));
    CHECK(m.at(2, 0) == inverse(Tfn(1.0 / 7, 1.0 / 5, 1.0 / 5, 1.0 / 3)));
    CHECK(m.at(3, 3) == Tfn(1, 1, 1, 1));
    CHECK_THROWS_AS(matrix_from_judgements(4, judgements({"M"}), ImportanceScale{}), ContractError);
  }

  TEST_CASE("validate_fpm") {
    CHECK_FALSE(validate_fpm(FuzzyPairwiseMatrix::identity(2)).has_value());
    const Tfn m(1, 3, 3, 5);
    CHECK_FALSE(validate_fpm(FuzzyPairwiseMatrix(2, {Tfn(1, 1, 1, 1), m, inverse(m), Tfn(1, 1, 1, 1)})).has_value());

    const auto broken = validate_fpm(FuzzyPairwiseMatrix(2, {Tfn(1, 1, 1, 1), m, m, Tfn(1, 1, 1, 1)}));
    REQUIRE(broken.has_value());
    CHECK(broken->row == 2);
    CHECK(broken->col == 1);

    const auto diagonal = validate_fpm(FuzzyPairwiseMatrix(2, {Tfn(1, 3, 3, 5), m, inverse(m), Tfn(1, 1, 1, 1)}));
    REQUIRE(diagonal.has_value());
    CHECK(diagonal->row == 1);
    CHECK(diagonal->col == 1);

    CHECK_THROWS_AS(FuzzyPairwiseMatrix(2, {Tfn(1, 1, 1, 1)}), ContractError);
    CHECK_THROWS_AS(subjective_weights(FuzzyPairwiseMatrix(2, {Tfn(1, 1, 1, 1), m, m, Tfn(1, 1, 1, 1)})),
                    ContractError);
  }

  TEST_CASE("subjective weights of all-equal matrices") {
    for (std::size_t n = 1; n <= 8; ++n) {
      const std::vector<PairwiseJudgement> equal(n * (n - 1) / 2, {ImportanceTerm::E, false});
      const auto sw = subjective_weights(matrix_from_judgements(n, equal, ImportanceScale{}));
      CHECK(sw.role == WeightRole::Subjective);
      REQUIRE(sw.size() == n);
      for (const auto& w : sw.weights) CHECK(close(w, Tfn::crisp(1.0 / static_cast<double>(n)), 1e-15));
    }
    const auto two = subjective_weights(FuzzyPairwiseMatrix::identity(2));
    CHECK(two[0] == Tfn(0.5, 0.5, 0.5, 0.5));
    CHECK(two[1] == Tfn(0.5, 0.5, 0.5, 0.5));
  }

  TEST_CASE("case study subjective weights") {
    const auto m = case_study_matrix();
    const auto sw = subjective_weights(m);
    const auto want = oracle_weights(m);
    for (std::size_t i = 0; i < 4; ++i) {
      for (std::size_t k = 0; k < 4; ++k) CHECK(sw[i].components()[k] == doctest::Approx(want[i][k]).epsilon(1e-12));
    }
    // Frozen from the oracle.
    CHECK(close(sw[0], Tfn(0.0349850349, 0.0721649485, 0.0721649485, 0.2261766024), 1e-10));
    CHECK(close(sw[1], Tfn(0.0475224476, 0.2835051546, 0.2835051546, 0.8257134319), 1e-10));
    CHECK(close(sw[2], Tfn(0.0900565348, 0.2577319588, 0.2577319588, 0.6984909607), 1e-10));
    CHECK(close(sw[3], Tfn(0.0533754573, 0.3865979381, 0.3865979381, 1.1051098162), 1e-10));

    // Service offered and quality rank above delivery period, which ranks above price.
    const double p = defuzzify_coa(sw[0]);
    const double q = defuzzify_coa(sw[1]);
    const double dp = defuzzify_coa(sw[2]);
    const double so = defuzzify_coa(sw[3]);
    CHECK(so > dp);
    CHECK(q > dp);
    CHECK(dp > p);
  }

  TEST_CASE("subjective weights follow a permutation of attributes") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 200; ++trial) {
      const std::size_t n = 2 + trial % 5;
      const auto m = matrix_from_judgements(n, random_judgements(n, rng), ImportanceScale{});
      std::vector<std::size_t> perm(n);
      std::iota(perm.begin(), perm.end(), 0);
      std::shuffle(perm.begin(), perm.end(), rng);
      std::vector<Tfn> entries;
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) entries.push_back(m.at(perm[i], perm[j]));
      }
      const auto original = subjective_weights(m);
      const auto permuted = subjective_weights(FuzzyPairwiseMatrix(n, entries));
      for (std::size_t i = 0; i < n; ++i) REQUIRE(close(permuted[i], original[perm[i]], 1e-12));
    }
  }

  TEST_CASE("empirical weights") {
    WeightHistory empty(100, 0.01);
    CHECK_FALSE(empirical_weights(empty).has_value());

    const Tfn v(0.0405, 0.115, 0.115, 0.2435);
    WeightHistory one(100, 0.01);
    one.push(overall({v}));
    CHECK(empirical_weights(one)->weights.front() == v);
    CHECK(empirical_weights(one)->role == WeightRole::Empirical);

    WeightHistory two(100, 0.01);
    two.push(overall({Tfn(0.1, 0.2, 0.2, 0.3)}));
    two.push(overall({Tfn(0.3, 0.4, 0.4, 0.5)}));
    CHECK(close(empirical_weights(two)->weights.front(), Tfn(0.2, 0.3, 0.3, 0.4), 1e-15));

    // A two-element history averaging to the stated price weight.
    WeightHistory pair(100, 0.01);
    pair.push(overall({Tfn(0.0305, 0.1, 0.1, 0.2235)}));
    pair.push(overall({Tfn(0.0505, 0.13, 0.13, 0.2635)}));
    CHECK(close(empirical_weights(pair)->weights.front(), v, 1e-15));

    std::mt19937_64 rng(22);
    std::uniform_real_distribution<double> d(0.0, 2.0);
    for (int i = 0; i < 200; ++i) {
      std::array<double, 4> c{d(rng), d(rng), d(rng), d(rng)};
      std::sort(c.begin(), c.end());
      const Tfn same(c[0], c[1], c[2], c[3]);
      WeightHistory h(100, 0.01);
      for (int k = 0; k < 1 + i % 37; ++k) h.push(overall({same, same}));
      REQUIRE(empirical_weights(h)->weights == std::vector<Tfn>{same, same});
    }
  }

  TEST_CASE("history window evicts the oldest entries") {
    WeightHistory h(3, 0.01);
    for (int i = 1; i <= 5; ++i) h.push(overall({Tfn::crisp(i)}));
    REQUIRE(h.entries().size() == 3);
    CHECK(h.entries().front().weights.front() == Tfn::crisp(3));
    CHECK(close(empirical_weights(h)->weights.front(), Tfn::crisp(4), 1e-15));
  }

  TEST_CASE("blend weights") {
    const WeightVector sw{WeightRole::Subjective, {Tfn(0.1, 0.2, 0.2, 0.3), Tfn(0.2, 0.3, 0.4, 0.5)}};
    const WeightVector ew{WeightRole::Empirical, {Tfn(0.3, 0.3, 0.3, 0.3), Tfn(0.0, 0.1, 0.1, 0.2)}};
    CHECK(blend_weights(sw, std::nullopt, 0.0).weights == sw.weights);
    CHECK(blend_weights(sw, ew, 0.0).weights == sw.weights);
    CHECK(blend_weights(sw, ew, 1.0).weights == ew.weights);
    CHECK(blend_weights(sw, ew, 0.5).role == WeightRole::Overall);
    CHECK_THROWS_AS(blend_weights(sw, std::nullopt, 0.3), ContractError);
    CHECK_THROWS_AS(blend_weights(sw, ew, 1.5), ContractError);
    CHECK_THROWS_AS(blend_weights(sw, WeightVector{WeightRole::Empirical, {Tfn::crisp(1)}}, 0.5), ContractError);

    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
      const double delta = unit(rng);
      const auto w = blend_weights(sw, ew, delta);
      for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t k = 0; k < 4; ++k) {
          const double s = sw[a].components()[k];
          const double e = ew[a].components()[k];
          REQUIRE(w[a].components()[k] >= std::min(s, e) - 1e-15);
          REQUIRE(w[a].components()[k] <= std::max(s, e) + 1e-15);
        }
      }
    }
  }

  TEST_CASE("case study overall weights") {
    const auto sw = subjective_weights(case_study_matrix());
    const WeightVector ew{WeightRole::Empirical,
                          {Tfn(0.0405, 0.115, 0.115, 0.2435), Tfn(0.11, 0.46, 0.46, 0.87),
                           Tfn(0.074, 0.196, 0.196, 0.443), Tfn(0.0875, 0.367, 0.367, 0.718)}};
    const auto w = blend_weights(sw, ew, 0.27);
    for (std::size_t i = 0; i < 4; ++i) {
      const auto want = oracle::sum(oracle::scaled(ew[i].components(), 0.27), oracle::scaled(sw[i].components(), 0.73));
      CHECK(close(w[i], Tfn(want[0], want[1], want[2], want[3]), 1e-15));
    }
    CHECK(close(w[0], Tfn(0.0364740755, 0.0837304124, 0.0837304124, 0.2308539198), 1e-10));
    CHECK(close(w[1], Tfn(0.0643913868, 0.3311587629, 0.3311587629, 0.8376708053), 1e-10));
    CHECK(close(w[2], Tfn(0.0857212704, 0.2410643299, 0.2410643299, 0.6295084013), 1e-10));
    CHECK(close(w[3], Tfn(0.0625890838, 0.3813064948, 0.3813064948, 1.0005901658), 1e-10));
  }

  TEST_CASE("advance delta") {
    const auto w = overall({Tfn::crisp(0.5)});
    CHECK(advance_delta(WeightHistory(100, 0.01, 0.0), w).delta() == doctest::Approx(0.01));
    CHECK(advance_delta(WeightHistory(100, 0.01, 1.0), w).delta() == 1.0);

    WeightHistory h(100, 0.01);
    double previous = h.delta();
    for (int i = 0; i < 100; ++i) {
      h = advance_delta(std::move(h), w);
      REQUIRE(h.delta() >= previous);
      REQUIRE(h.delta() <= 1.0);
      previous = h.delta();
    }
    CHECK(h.delta() == 1.0);
    CHECK(h.entries().size() == 100);
    h = advance_delta(std::move(h), w);
    CHECK(h.entries().size() == 100);
    CHECK(h.delta() == 1.0);
  }
}
