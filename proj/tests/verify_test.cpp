#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

#include "shorsim/arithmetic.hpp"
#include "shorsim/verify.hpp"

namespace shorsim::verify {
namespace {

TEST(Modpow, Examples) {
  EXPECT_EQ(modpow(7, 4, 15), 1u);
  EXPECT_EQ(modpow(7, 5, 15), 7u);
  for (std::uint64_t n = 2; n < 20; ++n) EXPECT_EQ(modpow(n + 3, 0, n), 1u);
  EXPECT_EQ(modpow(3, 200, 1), 0u);
}

TEST(Order, Examples) {
  EXPECT_EQ(multiplicative_order(7, 15), 4u);
  EXPECT_EQ(multiplicative_order(4, 15), 2u);
  EXPECT_EQ(multiplicative_order(14, 15), 2u);
  EXPECT_EQ(multiplicative_order(1, 15), 1u);
  EXPECT_EQ(multiplicative_order(5, 15), 0u);
}

std::vector<Basis> adder_inputs(const RegisterLayout& layout, std::uint64_t limit) {
  std::vector<Basis> in;
  const auto target = layout.adder_target(layout.reg2);
  for (Basis ctl = 0; ctl < 2; ++ctl) {
    for (std::uint64_t x = 0; x < limit; ++x) in.push_back(deposit(ctl ? bit(layout.reg1[0]) : 0, target, x));
  }
  return in;
}

TEST(Exhaustive, AdderOfFive) {
  const auto layout = RegisterLayout::for_factoring(4);
  const auto target = layout.adder_target(layout.reg2);
  const Network net = build_adder(5, layout.reg1[0], layout);
  const auto inputs = adder_inputs(layout, 27);
  const CheckReport r = exhaustive_network_check(
      net, inputs,
      [&](Basis b) {
        if (!(b & bit(layout.reg1[0]))) return b;
        return deposit(b, target, extract(b, target) + 5);
      },
      layout.add_work.mask() & ~bit(layout.overflow_high()), "S(5)");
  EXPECT_TRUE(r.passed());
  EXPECT_EQ(r.cases, 54u);
}

TEST(Exhaustive, ModAdderOfEight) {
  const auto layout = RegisterLayout::for_factoring(4);
  const auto target = layout.adder_target(layout.reg2);
  const Network net = build_mod_adder(8, 15, layout.reg1[0], layout);
  const CheckReport r = exhaustive_network_check(
      net, adder_inputs(layout, 15),
      [&](Basis b) {
        if (!(b & bit(layout.reg1[0]))) return b;
        return deposit(b, target, (extract(b, target) + 8) % 15);
      },
      layout.work_mask(), "S_15(8)");
  EXPECT_TRUE(r.passed());
}

TEST(Exhaustive, CorruptedNetworkFails) {
  const auto layout = RegisterLayout::for_factoring(4);
  const auto target = layout.adder_target(layout.reg2);
  Network net = build_mod_adder(8, 15, layout.reg1[0], layout);
  net.gates.erase(net.gates.begin() + static_cast<std::ptrdiff_t>(net.gates.size() / 2));
  net.checkpoints.clear();
  const CheckReport r = exhaustive_network_check(
      net, adder_inputs(layout, 15),
      [&](Basis b) {
        if (!(b & bit(layout.reg1[0]))) return b;
        return deposit(b, target, (extract(b, target) + 8) % 15);
      },
      layout.work_mask());
  EXPECT_FALSE(r.passed());
  ASSERT_FALSE(r.examples.empty());
  EXPECT_NE(r.examples[0].expected, r.examples[0].actual);
}

TEST(Exhaustive, DirtyAncillaIsReported) {
  Network net(3);
  net.add(Gate({0}, 2));
  const std::vector<Basis> inputs{0, 1};
  const CheckReport r = exhaustive_network_check(
      net, inputs, [](Basis b) { return b | (b << 2); }, bit(2));
  EXPECT_EQ(r.failures, 1u);
  ASSERT_EQ(r.examples.size(), 1u);
  EXPECT_TRUE(r.examples[0].ancilla_dirty);
}

TEST(Suites, BlocksForFifteen) {
  EXPECT_TRUE(check_adder(4, 13).passed());
  EXPECT_TRUE(check_mod_adder(15, 14).passed());
  EXPECT_TRUE(check_multiplier(15, 7).passed());
  EXPECT_TRUE(check_modexp(15, 7, 130).passed());
  EXPECT_EQ(check_modexp(15, 7, 130).cases, 130u);
}

TEST(Suites, OtherModuli) {
  const std::vector<std::uint64_t> bases{2, 5};
  for (const auto& r : check_all(21, bases, 64)) EXPECT_TRUE(r.passed()) << r.name;
  const std::vector<std::uint64_t> three{2};
  for (const auto& r : check_all(3, three, 8)) EXPECT_TRUE(r.passed()) << r.name;
}

TEST(Probability, TablesAgree) {
  for (std::uint64_t x : {2, 4, 7, 8, 11, 13, 14}) {
    const Distribution a = probc1_table(15, x, 130);
    const Distribution b = probc2_table(15, x, 130);
    EXPECT_LT(max_abs_difference(a, b), 1e-12) << x;
  }
  EXPECT_NO_THROW(probc2_oracle(21, 2, 441));
}

TEST(Probability, NormalizedTable) {
  const Distribution d = probc2_oracle(15, 7, 130);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
  for (double p : d.values()) EXPECT_GE(p, 0.0);
}

TEST(Probability, ExactPeaksWhenRDividesQ) {
  const Distribution d = probc2_oracle(15, 7, 132);
  for (std::uint64_t c = 0; c < 132; ++c) {
    const double p = d.at(c, 7);
    if (c % 33 == 0) {
      EXPECT_NEAR(p, 1.0 / 16.0, 1e-12) << c;
    } else {
      EXPECT_NEAR(p, 0.0, 1e-12) << c;
    }
  }
}

TEST(Probability, OrderOneConcentratesAtZero) {
  const Distribution d = probc2_table(15, 1, 130);
  EXPECT_NEAR(d.at(0, 1), 1.0, 1e-12);
  EXPECT_NEAR(d.total(), 1.0, 1e-12);
}

TEST(CenteredResidue, Range) {
  EXPECT_EQ(centered_residue(0, 130), 0);
  EXPECT_EQ(centered_residue(65, 130), 65);
  EXPECT_EQ(centered_residue(66, 130), -64);
  EXPECT_EQ(centered_residue(132, 130), 2);
  EXPECT_EQ(centered_residue(4, 7), -3);
  EXPECT_EQ(centered_residue(3, 7), 3);
}

}  // namespace
}  // namespace shorsim::verify
