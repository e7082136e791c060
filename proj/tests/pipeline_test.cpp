#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "shorsim/arithmetic.hpp"
#include "shorsim/pipeline.hpp"
#include "shorsim/verify.hpp"

namespace shorsim {
namespace {

TEST(Convergents, ThirtyThreeOverOneThirty) {
  const auto cv = convergents(33, 130);
  const std::vector<Convergent> expected{{0, 1}, {1, 3}, {1, 4}, {16, 63}, {33, 130}};
  EXPECT_EQ(cv, expected);
}

TEST(Convergents, WholeAndZero) {
  EXPECT_EQ(convergents(0, 7), (std::vector<Convergent>{{0, 1}}));
  EXPECT_EQ(convergents(14, 7), (std::vector<Convergent>{{2, 1}}));
  EXPECT_THROW(convergents(1, 0), std::invalid_argument);
}

TEST(OrderFinding, Examples) {
  const OrderAttempt a = continued_fraction_order(33, 130, 15, 7);
  ASSERT_TRUE(a.order);
  EXPECT_EQ(*a.order, 4u);
  EXPECT_EQ(a.tried.front(), (Convergent{1, 3}));

  const OrderAttempt half = continued_fraction_order(65, 130, 15, 7);
  ASSERT_TRUE(half.order);
  EXPECT_EQ(*half.order, 4u);

  EXPECT_FALSE(continued_fraction_order(0, 130, 15, 7).order);
  EXPECT_THROW(continued_fraction_order(130, 130, 15, 7), std::invalid_argument);
}

TEST(OrderFinding, ReturnedOrdersAlwaysVerify) {
  for (std::uint64_t x : {2, 4, 7, 8, 11, 13, 14}) {
    for (std::uint64_t c = 0; c < 130; ++c) {
      const OrderAttempt a = continued_fraction_order(c, 130, 15, x);
      if (a.order) {
        EXPECT_EQ(verify::modpow(x, *a.order, 15), 1u);
        EXPECT_EQ(*a.order % verify::multiplicative_order(x, 15), 0u);
      }
    }
  }
}

TEST(OrderFinding, EveryCoprimePeakRecoversOrder) {
  // Nearest integers to d q / r for d coprime to r = 4.
  for (std::uint64_t d : {1, 3}) {
    const double exact = static_cast<double>(d) * 130.0 / 4.0;
    for (std::uint64_t c : {static_cast<std::uint64_t>(std::floor(exact)),
                            static_cast<std::uint64_t>(std::ceil(exact))}) {
      const OrderAttempt a = continued_fraction_order(c, 130, 15, 7);
      ASSERT_TRUE(a.order) << c;
      EXPECT_EQ(*a.order, 4u) << c;
    }
  }
}

TEST(Factors, Examples) {
  const FactorOutcome ok = extract_factors(7, 4, 15);
  EXPECT_TRUE(ok.ok());
  EXPECT_EQ(ok.factors, (std::vector<std::uint64_t>{3, 5}));

  const FactorOutcome odd = extract_factors(4, 3, 7);
  ASSERT_TRUE(odd.failure);
  EXPECT_EQ(*odd.failure, FactorFailure::OddOrder);
  EXPECT_EQ(to_string(*odd.failure), "r odd");

  const FactorOutcome minus = extract_factors(14, 2, 15);
  ASSERT_TRUE(minus.failure);
  EXPECT_EQ(*minus.failure, FactorFailure::MinusOneRoot);

  EXPECT_THROW(extract_factors(7, 3, 15), InvalidOrder);
}

TEST(Factors, AlwaysDivideN) {
  for (std::uint64_t n : {15, 21, 33, 35, 91}) {
    for (std::uint64_t x = 2; x < n; ++x) {
      if (gcd(x, n) != 1) continue;
      const std::uint64_t r = verify::multiplicative_order(x, n);
      const FactorOutcome out = extract_factors(x, r, n);
      for (std::uint64_t f : out.factors) {
        EXPECT_EQ(n % f, 0u);
        EXPECT_GT(f, 1u);
        EXPECT_LT(f, n);
      }
      EXPECT_EQ(out.ok(), !out.factors.empty());
    }
  }
}

TEST(Factors, RandomBaseSucceedsAtLeastHalfTheTime) {
  std::size_t units = 0, good = 0;
  for (std::uint64_t x = 1; x < 15; ++x) {
    if (gcd(x, 15) != 1) continue;
    ++units;
    if (extract_factors(x, verify::multiplicative_order(x, 15), 15).ok()) ++good;
  }
  EXPECT_GE(2 * good, units);
  EXPECT_EQ(good, 6u);
}

TEST(IdealDistribution, PeaksForSevenSlice) {
  const auto p = ideal_distribution(15, 7, 130, 7);
  ASSERT_EQ(p.size(), 130u);
  // 130/4 is not an integer, so the outer peaks are split evenly over two outcomes.
  std::vector<std::uint64_t> above;
  for (std::uint64_t c = 0; c < 130; ++c) {
    if (p[c] > 0.01) above.push_back(c);
  }
  EXPECT_EQ(above, (std::vector<std::uint64_t>{0, 32, 33, 65, 97, 98}));
  EXPECT_NEAR(p[32], p[33], 1e-12);
  // Height of an exact peak: (33/130)^2, the 33 terms of the sum at c = 65.
  EXPECT_NEAR(p[65], std::pow(33.0 / 130.0, 2), 1e-12);
  EXPECT_TRUE(ideal_distribution(15, 7, 130, 2).empty());
  EXPECT_TRUE(ideal_distribution(15, 7, 130, 99).empty());
}

TEST(Experiment, NoiselessRunFactorsFifteen) {
  ExperimentConfig cfg;
  cfg.repetitions = 3;
  const FactorReport r = run_experiment(cfg);
  EXPECT_FALSE(r.classical_shortcut);
  ASSERT_TRUE(r.order);
  EXPECT_EQ(*r.order, 4u);
  EXPECT_EQ(r.factors, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_EQ(r.stats.samples, 60u);
  EXPECT_TRUE(r.warnings.empty());
  ASSERT_EQ(r.repetitions.size(), 3u);
  for (const auto& rep : r.repetitions) {
    EXPECT_TRUE(rep.success());
    ASSERT_TRUE(rep.distributions);
    EXPECT_LT(max_abs_difference(rep.distributions->ned, verify::probc2_oracle(15, 7, 130)), 1e-10);
  }
}

TEST(Experiment, SharedFactorShortcut) {
  ExperimentConfig cfg;
  cfg.x = 5;
  const FactorReport r = run_experiment(cfg);
  EXPECT_TRUE(r.classical_shortcut);
  EXPECT_EQ(r.factors, (std::vector<std::uint64_t>{3, 5}));
  EXPECT_TRUE(r.repetitions.empty());
}

TEST(Experiment, WarningsForEvenAndPrime) {
  ExperimentConfig even;
  even.n = 16;
  even.x = 3;
  even.q = 32;
  even.samples = 4;
  const FactorReport e = run_experiment(even);
  ASSERT_FALSE(e.warnings.empty());
  EXPECT_NE(e.warnings[0].find("even"), std::string::npos);

  ExperimentConfig prime;
  prime.n = 13;
  prime.x = 2;
  prime.q = 32;
  prime.samples = 4;
  const FactorReport p = run_experiment(prime);
  ASSERT_FALSE(p.warnings.empty());
  EXPECT_NE(p.warnings[0].find("prime"), std::string::npos);
  EXPECT_TRUE(p.factors.empty());
}

TEST(Experiment, RandomBaseIsDeterministic) {
  ExperimentConfig cfg;
  cfg.x.reset();
  cfg.seed = 99;
  cfg.keep_distributions = false;
  const FactorReport a = run_experiment(cfg);
  const FactorReport b = run_experiment(cfg);
  EXPECT_EQ(a.x, b.x);
  EXPECT_GT(a.x, 1u);
  EXPECT_LT(a.x, 15u);
  EXPECT_EQ(to_json(a), to_json(b));
}

TEST(Experiment, NoisyRunsAreSeedDeterministic) {
  ExperimentConfig cfg;
  cfg.events = 10;
  cfg.law = ExponentialClock{2.5};
  cfg.watchdog = Watchdog::On;
  cfg.repetitions = 2;
  const FactorReport a = run_experiment(cfg);
  const FactorReport b = run_experiment(cfg);
  EXPECT_EQ(to_json(a), to_json(b));
  EXPECT_NE(a.repetitions[0].seed, a.repetitions[1].seed);
  EXPECT_LT(max_abs_difference(a.repetitions[0].distributions->ned,
                               b.repetitions[0].distributions->ned),
            1e-300);
}

TEST(Experiment, ErrorDetectionSampling) {
  ExperimentConfig cfg;
  cfg.events = 10;
  cfg.law = StaticLaw{0.5};
  cfg.sampling = SamplingMode::ErrorDetection;
  cfg.repetitions = 2;
  const FactorReport r = run_experiment(cfg);
  for (const auto& rep : r.repetitions) {
    for (const auto& s : rep.samples) EXPECT_GT(rep.distributions->ed.at(s.c, s.r2), 0.0);
  }
}

TEST(Experiment, JsonShape) {
  ExperimentConfig cfg;
  cfg.samples = 5;
  const auto doc = nlohmann::json::parse(to_json(run_experiment(cfg)));
  EXPECT_EQ(doc["order"], 4);
  EXPECT_EQ(doc["factors"], nlohmann::json::array({3, 5}));
  ASSERT_EQ(doc["samples"].size(), 5u);
  EXPECT_TRUE(doc["samples"][0].contains("convergents"));
  EXPECT_TRUE(doc["samples"][0].contains("verified_r"));
  EXPECT_EQ(doc["stats"]["repetitions"], 1);
}

TEST(Experiment, MeanDistributions) {
  ExperimentConfig cfg;
  cfg.events = 4;
  cfg.law = StaticLaw{0.5};
  cfg.repetitions = 3;
  const FactorReport r = run_experiment(cfg);
  const auto mean = r.mean_distributions();
  ASSERT_TRUE(mean);
  EXPECT_NEAR(mean->ned.total(), 1.0, 1e-10);
  const double v = (r.repetitions[0].distributions->ned.at(10, 7) +
                    r.repetitions[1].distributions->ned.at(10, 7) +
                    r.repetitions[2].distributions->ned.at(10, 7)) / 3.0;
  EXPECT_NEAR(mean->ned.at(10, 7), v, 1e-15);
}

TEST(Prediction, TwentySamplesAlmostSurelySucceed) {
  const double p1 = predicted_success(15, 7, 130, 1);
  EXPECT_GT(p1, 0.3);
  EXPECT_LT(p1, 1.0);
  EXPECT_GT(predicted_success(15, 7, 130, 20), 0.999);
  EXPECT_EQ(predicted_success(15, 14, 130, 20), 0.0);
}

TEST(Seeds, RepetitionSeedsDiffer) {
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(1, 1));
  EXPECT_NE(repetition_seed(1, 0), repetition_seed(2, 0));
  EXPECT_EQ(repetition_seed(5, 3), repetition_seed(5, 3));
}

}  // namespace
}  // namespace shorsim
