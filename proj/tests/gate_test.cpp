#include <gtest/gtest.h>

#include <random>
#include <sstream>

#include "shorsim/arithmetic.hpp"
#include "shorsim/gate.hpp"

namespace shorsim {
namespace {

TEST(Gate, ToffoliFlipsTargetWhenControlsSet) {
  const Gate g({0, 1}, 2);
  EXPECT_EQ(g.apply(0b011), 0b111u);
  EXPECT_EQ(g.apply(0b010), 0b010u);
  EXPECT_EQ(g.control_count(), 2u);
  EXPECT_EQ(g.span_width(), 3u);
}

TEST(Gate, ZeroAndOneControlAreNotAndCnot) {
  const Gate inv({}, 3);
  EXPECT_EQ(inv.apply(0), 0b1000u);
  const Gate cnot({1}, 0);
  EXPECT_EQ(cnot.apply(0b10), 0b11u);
  EXPECT_EQ(cnot.apply(0b00), 0b00u);
}

TEST(Gate, EveryThreeQubitGateIsAnInvolution) {
  for (Qubit t = 0; t < 3; ++t) {
    for (Basis mask = 0; mask < 8; ++mask) {
      if (mask & bit(t)) continue;
      const Gate g = Gate::from_mask(mask, t);
      for (Basis b = 0; b < 8; ++b) EXPECT_EQ(g.apply(g.apply(b)), b);
    }
  }
}

TEST(Gate, RejectsIndicesBeyondSixtyFour) {
  EXPECT_THROW(Gate({64}, 0), StructuralError);
  EXPECT_THROW(Gate({0}, 70), StructuralError);
}

TEST(Gate, ApplyGateChecksWidth) {
  EXPECT_THROW(apply_gate(0, Gate({0}, 5), 4), StructuralError);
  EXPECT_EQ(apply_gate(1, Gate({0}, 3), 4), 0b1001u);
}

TEST(Network, EmptyNetworkIsIdentity) {
  Network net(6);
  for (Basis b = 0; b < 64; ++b) EXPECT_EQ(apply_network(b, net), b);
}

TEST(Network, RepeatedGateCancels) {
  Network net(3);
  net.add(Gate({0, 1}, 2));
  net.add(Gate({0, 1}, 2));
  for (Basis b = 0; b < 8; ++b) EXPECT_EQ(apply_network(b, net), b);
}

TEST(Network, AppendShiftsCheckpoints) {
  Network a(4);
  a.add(Gate({}, 0));
  a.mark_checkpoint({3, 1});
  Network b(4);
  b.add(Gate({0}, 1));
  b.mark_checkpoint({2});
  a.append(b);
  ASSERT_EQ(a.checkpoints.size(), 2u);
  EXPECT_EQ(a.checkpoints[0].position, 1u);
  EXPECT_EQ(a.checkpoints[0].qubits, (std::vector<Qubit>{1, 3}));
  EXPECT_EQ(a.checkpoints[1].position, 2u);
}

TEST(Network, MirroredReversesGates) {
  Network net(3);
  net.add(Gate({}, 0));
  net.add(Gate({0}, 1));
  const Network m = net.mirrored();
  ASSERT_EQ(m.gates.size(), 2u);
  EXPECT_EQ(m.gates[0], Gate({0}, 1));
  EXPECT_EQ(m.gates[1], Gate({}, 0));
}

TEST(Layout, FactoringLayoutSizes) {
  const auto l4 = RegisterLayout::for_factoring(4);
  EXPECT_EQ(l4.qubit_count(), 28u);
  EXPECT_TRUE(l4.check().empty());
  EXPECT_EQ(l4.reg1.width, 9u);
  EXPECT_EQ(l4.mult_work.width, 5u);
  EXPECT_EQ(l4.add_work.width, 8u);
  EXPECT_EQ(RegisterLayout::for_factoring(1).qubit_count(), 13u);
  EXPECT_EQ(std::popcount(l4.work_mask()), 15);
}

TEST(Layout, CustomExponentWidth) {
  const auto l = RegisterLayout::for_factoring(4, 3);
  EXPECT_EQ(l.qubit_count(), 22u);
  EXPECT_TRUE(l.check().empty());
}

TEST(Layout, RangeReadWrite) {
  const QubitRange r{3, 4};
  const Basis b = r.write(0, 0b1011);
  EXPECT_EQ(b, Basis{0b1011} << 3);
  EXPECT_EQ(r.read(b | 1), 0b1011u);
  const std::vector<Qubit> qs{5, 1};
  EXPECT_EQ(deposit(0, qs, 0b10), bit(1));
  EXPECT_EQ(extract(bit(5), qs), 1u);
}

TEST(Validate, BuilderOutputIsClean) {
  const auto layout = RegisterLayout::for_factoring(4);
  const Network net = build_adder(5, layout.reg1[0], layout);
  EXPECT_TRUE(validate_network(net, layout).empty());
}

TEST(Validate, TargetAmongControlsIsReported) {
  Network net(3);
  net.add(Gate({}, 0));
  net.gates.push_back(Gate::from_mask(0b011, 1));
  const auto diags = validate_network(net);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].kind, Diagnostic::Kind::TargetIsControl);
  EXPECT_EQ(diags[0].index, 1u);
}

TEST(Validate, CheckpointBeyondGateCountIsReported) {
  Network net(3);
  net.add(Gate({}, 0));
  net.checkpoints.push_back({2, {1}});
  const auto diags = validate_network(net);
  ASSERT_EQ(diags.size(), 1u);
  EXPECT_EQ(diags[0].kind, Diagnostic::Kind::CheckpointPosition);
}

TEST(Validate, OutOfRangeAndOrderAndCount) {
  Network net(3);
  net.add(Gate({4}, 0));
  net.add(Gate({}, 1));
  net.checkpoints.push_back({2, {1}});
  net.checkpoints.push_back({1, {1}});
  const auto diags = validate_network(net);
  ASSERT_EQ(diags.size(), 2u);
  EXPECT_EQ(diags[0].kind, Diagnostic::Kind::QubitOutOfRange);
  EXPECT_EQ(diags[1].kind, Diagnostic::Kind::CheckpointOrder);

  const auto layout = RegisterLayout::for_factoring(2);
  Network small(5);
  const auto with_layout = validate_network(small, layout);
  ASSERT_EQ(with_layout.size(), 1u);
  EXPECT_EQ(with_layout[0].kind, Diagnostic::Kind::QubitCountMismatch);
}

TEST(TextFormat, RoundTrip) {
  const auto params = ArithParams::make(3, 2, 8);
  const Network net = build_modexp(params, RegisterLayout::for_factoring(2, 3));
  const std::string text = to_text(net);
  EXPECT_EQ(parse_network(text), net);
  EXPECT_EQ(to_text(parse_network(text)), text);
}

TEST(TextFormat, ParsesCommentsAndCheckpoints) {
  const Network net = parse_network(
      "# header\nQUBITS 4\nT 2 0 1\nCHK 1 3\nT 0\n\nCHK 2 1 3  # trailing\n");
  EXPECT_EQ(net.qubit_count, 4u);
  ASSERT_EQ(net.gates.size(), 2u);
  EXPECT_EQ(net.gates[0], Gate({0, 1}, 2));
  ASSERT_EQ(net.checkpoints.size(), 2u);
  EXPECT_EQ(net.checkpoints[1].position, 2u);
  EXPECT_EQ(net.checkpoints[1].qubits, (std::vector<Qubit>{1, 3}));
}

TEST(TextFormat, RejectsMalformedInput) {
  EXPECT_THROW(parse_network("T 1 0\n"), StructuralError);
  EXPECT_THROW(parse_network("QUBITS 2\nX 1\n"), StructuralError);
  EXPECT_THROW(parse_network("QUBITS 2\nT one\n"), StructuralError);
}

}  // namespace
}  // namespace shorsim
