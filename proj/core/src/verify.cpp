#include "shorsim/verify.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "shorsim/arithmetic.hpp"

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

namespace shorsim::verify {

namespace {

constexpr std::size_t kKeptExamples = 8;

std::uint64_t mul(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % n);
}

Basis mask_of(std::span<const Qubit> qs) {
  Basis m = 0;
  for (Qubit q : qs) m |= bit(q);
  return m;
}

}  // namespace

std::uint64_t modpow(std::uint64_t x, std::uint64_t a, std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("modulus must be positive");
  std::uint64_t result = 1 % n;
  std::uint64_t base = x % n;
  while (a != 0) {
    if (a & 1U) result = mul(result, base, n);
    base = mul(base, base, n);
    a >>= 1;
  }
  return result;
}

std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t n) {
  if (n < 2 || std::gcd(x, n) != 1) return 0;
  std::uint64_t v = x % n;
  for (std::uint64_t r = 1; r <= n; ++r) {
    if (v == 1) return r;
    v = mul(v, x, n);
  }
  return 0;
}

CheckReport exhaustive_network_check(const Network& net, std::span<const Basis> inputs,
                                     const std::function<Basis(Basis)>& expected,
                                     Basis ancilla_mask, std::string name) {
  CheckReport report;
  report.name = std::move(name);
  for (Basis in : inputs) {
    ++report.cases;
    const Basis want = expected(in);
    const Basis got = apply_network(in, net);
    const bool dirty = (got & ancilla_mask) != 0;
    if (got != want || dirty) {
      ++report.failures;
      if (report.examples.size() < kKeptExamples) report.examples.push_back({in, want, got, dirty});
    }
  }
  return report;
}

CheckReport check_adder(std::size_t bits, std::uint64_t y) {
  const auto layout = RegisterLayout::for_factoring(bits);
  const Qubit ctl = layout.reg1[0];
  const auto target = layout.adder_target(layout.reg2);
  const std::uint64_t modulus = std::uint64_t{1} << target.size();
  const Network net = build_adder(y, ctl, layout);

  std::vector<Basis> inputs;
  for (std::uint64_t x = 0; x < modulus; ++x) {
    const Basis b = deposit(0, target, x);
    inputs.push_back(b);
    inputs.push_back(b | bit(ctl));
  }
  auto expect = [&](Basis in) {
    if ((in & bit(ctl)) == 0) return in;
    return deposit(in, target, (extract(in, target) + y) % modulus);
  };
  return exhaustive_network_check(net, inputs, expect, layout.work_mask() & ~mask_of(target),
                                  "S(" + std::to_string(y) + ") L=" + std::to_string(bits));
}

CheckReport check_mod_adder(std::uint64_t n, std::uint64_t y) {
  const auto layout = RegisterLayout::for_factoring(bits_for(n));
  const Qubit ctl = layout.reg1[0];
  const Network net = build_mod_adder(y, n, ctl, layout);
  std::vector<Basis> inputs;
  for (std::uint64_t x = 0; x < n; ++x) {
    const Basis b = layout.reg2.write(0, x);
    inputs.push_back(b);
    inputs.push_back(b | bit(ctl));
  }
  auto expect = [&](Basis in) {
    if ((in & bit(ctl)) == 0) return in;
    return layout.reg2.write(in, (layout.reg2.read(in) + y) % n);
  };
  return exhaustive_network_check(net, inputs, expect, layout.work_mask(),
                                  "S_N(" + std::to_string(y) + ") N=" + std::to_string(n));
}

CheckReport check_multiplier(std::uint64_t n, std::uint64_t c) {
  const auto layout = RegisterLayout::for_factoring(bits_for(n));
  const Qubit ctl = layout.reg1[0];
  const Network net = build_controlled_multiplier(c, n, ctl, layout);
  std::vector<Basis> inputs;
  for (std::uint64_t i = 0; i < n; ++i) {
    const Basis b = layout.reg2.write(0, i);
    inputs.push_back(b);
    inputs.push_back(b | bit(ctl));
  }
  auto expect = [&](Basis in) {
    if ((in & bit(ctl)) == 0) return in;
    return layout.reg2.write(in, mul(layout.reg2.read(in), c, n));
  };
  return exhaustive_network_check(net, inputs, expect, layout.work_mask(),
                                  "Pi_N(" + std::to_string(c) + ") N=" + std::to_string(n));
}

CheckReport check_modexp(std::uint64_t n, std::uint64_t x, std::uint64_t q) {
  const auto params = ArithParams::make(n, x, q);
  const auto layout = layout_for(params);
  const Network net = build_modexp(params, layout);
  std::vector<Basis> inputs;
  for (std::uint64_t a = 0; a < q; ++a) inputs.push_back(layout.reg1.write(0, a));
  auto expect = [&](Basis in) {
    return layout.reg2.write(in, modpow(x, layout.reg1.read(in), n));
  };
  return exhaustive_network_check(net, inputs, expect, layout.work_mask(),
                                  "modexp x=" + std::to_string(x) + " N=" + std::to_string(n));
}

std::vector<CheckReport> check_all(std::uint64_t n, std::span<const std::uint64_t> bases,
                                   std::uint64_t q) {
  std::vector<CheckReport> out;
  const std::size_t bits = bits_for(n);
  for (std::uint64_t y = 0; y < (std::uint64_t{1} << (bits + 1)); ++y) out.push_back(check_adder(bits, y));
  for (std::uint64_t y = 0; y < n; ++y) out.push_back(check_mod_adder(n, y));
  for (std::uint64_t c = 1; c < n; ++c) {
    if (std::gcd(c, n) == 1) out.push_back(check_multiplier(n, c));
  }
  for (std::uint64_t x : bases) out.push_back(check_modexp(n, x, q));
  return out;
}

std::int64_t centered_residue(std::uint64_t v, std::uint64_t q) {
  const std::uint64_t m = v % q;
  return 2 * m > q ? static_cast<std::int64_t>(m) - static_cast<std::int64_t>(q)
                   : static_cast<std::int64_t>(m);
}

Distribution probc1_table(std::uint64_t n, std::uint64_t x, std::uint64_t q) {
  const std::size_t bits = bits_for(n);
  Distribution d(q, bits, DistributionKind::Exact);
  const double two_pi_over_q = 2.0 * std::numbers::pi / static_cast<double>(q);
  std::vector<std::complex<double>> sums(d.r2_count());
  for (std::uint64_t c = 0; c < q; ++c) {
    std::fill(sums.begin(), sums.end(), std::complex<double>{});
    for (std::uint64_t a = 0; a < q; ++a) {
      // Reduce a*c mod q before scaling so the phase stays exact.
      const double phase = two_pi_over_q * static_cast<double>(mul(a, c, q));
      sums[modpow(x, a, n)] += std::polar(1.0, phase);
    }
    for (std::size_t r2 = 0; r2 < sums.size(); ++r2) {
      d.at(c, r2) = std::norm(sums[r2] / static_cast<double>(q));
    }
  }
  return d;
}

Distribution probc2_table(std::uint64_t n, std::uint64_t x, std::uint64_t q) {
  const std::size_t bits = bits_for(n);
  Distribution d(q, bits, DistributionKind::Exact);
  const std::uint64_t r = multiplicative_order(x, n);
  if (r == 0) throw std::invalid_argument("x has no order modulo N");
  const double two_pi_over_q = 2.0 * std::numbers::pi / static_cast<double>(q);
  for (std::uint64_t k = 0; k < r && k < q; ++k) {
    const std::uint64_t r2 = modpow(x, k, n);
    const std::uint64_t terms = (q - 1 - k) / r + 1;
    for (std::uint64_t c = 0; c < q; ++c) {
      const std::int64_t rc = centered_residue(mul(r, c, q), q);
      std::complex<double> sum{};
      for (std::uint64_t b = 0; b < terms; ++b) {
        // b * {rc}_q is reduced mod q for the same reason as above.
        const std::int64_t prod = (static_cast<std::int64_t>(b) * rc) % static_cast<std::int64_t>(q);
        sum += std::polar(1.0, two_pi_over_q * static_cast<double>(prod));
      }
      d.at(c, r2) = std::norm(sum / static_cast<double>(q));
    }
  }
  return d;
}

Distribution probc2_oracle(std::uint64_t n, std::uint64_t x, std::uint64_t q) {
  Distribution closed = probc2_table(n, x, q);
  const Distribution direct = probc1_table(n, x, q);
  const double diff = max_abs_difference(closed, direct);
  if (diff > 1e-12) {
    throw std::logic_error("probability oracles disagree by " + std::to_string(diff));
  }
  return closed;
}

}  // namespace shorsim::verify
