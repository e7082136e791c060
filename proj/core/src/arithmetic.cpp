#include "shorsim/arithmetic.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <string>

namespace {
__extension__ typedef unsigned __int128 u128;
__extension__ typedef __int128 i128;
}  // namespace

namespace shorsim {

namespace {

void require_distinct(std::initializer_list<Qubit> qs, const char* what) {
  std::set<Qubit> seen(qs);
  if (seen.size() != qs.size()) {
    throw StructuralError(std::string(what) + ": qubit indices must be distinct");
  }
}

void check_wiring(const AdderWiring& w) {
  if (w.target.empty() || w.carries.size() != w.target.size() + 1) {
    throw StructuralError("adder wiring needs m target qubits and m+1 carries");
  }
  std::set<Qubit> seen(w.target.begin(), w.target.end());
  seen.insert(w.carries.begin(), w.carries.end());
  if (seen.size() != w.target.size() + w.carries.size()) {
    throw StructuralError("adder wiring reuses a qubit");
  }
}

// Sum of target and the classical constant into the carries, one Sigma per bit.
void append_sigma_chain(Network& net, std::uint64_t constant, Qubit ctl, const AdderWiring& w) {
  for (std::size_t i = 0; i < w.target.size(); ++i) {
    net.add(build_sigma(((constant >> i) & 1U) != 0, ctl, w.carries[i], w.target[i], w.carries[i + 1]));
  }
}

}  // namespace

ArithParams ArithParams::make(std::uint64_t n, std::uint64_t x, std::uint64_t q) {
  if (n < 3) throw ArithmeticError("N must be at least 3");
  if (x <= 1 || x >= n) throw ArithmeticError("x must satisfy 1 < x < N");
  if (gcd(x, n) != 1) {
    throw ArithmeticError("x = " + std::to_string(x) + " shares the factor " +
                          std::to_string(gcd(x, n)) + " with N");
  }
  if (q < 2) throw ArithmeticError("q must be at least 2");
  return ArithParams{n, x, q, bits_for(n)};
}

std::size_t bits_for(std::uint64_t n) {
  return n <= 1 ? 1 : static_cast<std::size_t>(std::bit_width(n - 1));
}

std::uint64_t gcd(std::uint64_t a, std::uint64_t b) {
  while (b != 0) {
    a %= b;
    std::swap(a, b);
  }
  return a;
}

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n) {
  return static_cast<std::uint64_t>((static_cast<u128>(a) * b) % n);
}

std::uint64_t powmod(std::uint64_t x, std::uint64_t e, std::uint64_t n) {
  std::uint64_t acc = 1 % n;
  for (x %= n; e != 0; e >>= 1) {
    if (e & 1U) acc = mulmod(acc, x, n);
    x = mulmod(x, x, n);
  }
  return acc;
}

std::variant<std::uint64_t, SharedFactor> mod_inverse(std::uint64_t c, std::uint64_t n) {
  if (n == 0) throw ArithmeticError("modulus must be positive");
  if (n == 1) return std::uint64_t{0};
  // Extended Euclid on signed 128-bit to avoid overflow of the Bezout terms.
  i128 old_r = static_cast<i128>(c % n), r = n;
  i128 old_s = 1, s = 0;
  while (r != 0) {
    const i128 quot = old_r / r;
    old_r -= quot * r;
    std::swap(old_r, r);
    old_s -= quot * s;
    std::swap(old_s, s);
  }
  if (old_r != 1) return SharedFactor{static_cast<std::uint64_t>(old_r == 0 ? n : old_r)};
  i128 inv = old_s % static_cast<i128>(n);
  if (inv < 0) inv += n;
  return static_cast<std::uint64_t>(inv);
}

std::vector<Gate> build_sigma(bool sigma, Qubit ctl, Qubit i1, Qubit i2, Qubit work) {
  require_distinct({ctl, i1, i2, work}, "two-qubit adder");
  std::vector<Gate> g;
  g.emplace_back(std::initializer_list<Qubit>{ctl, i1, i2}, work);  // carry = i1 & i2
  g.emplace_back(std::initializer_list<Qubit>{ctl, i2}, i1);        // i1 ^= i2
  if (sigma) {
    g.emplace_back(std::initializer_list<Qubit>{ctl, i1}, work);    // carry = i1 | i2
    g.emplace_back(std::initializer_list<Qubit>{ctl}, i1);          // i1 ^= 1
  }
  return g;
}

std::vector<Gate> build_controlled_swap(Qubit ctl, Qubit a, Qubit b) {
  require_distinct({ctl, a, b}, "controlled swap");
  return {Gate({ctl, a}, b), Gate({ctl, b}, a), Gate({ctl, a}, b)};
}

void append_adder(Network& net, std::uint64_t y, Qubit ctl, const AdderWiring& w) {
  check_wiring(w);
  const std::size_t m = w.target.size();
  if (m >= 63 || y >= (std::uint64_t{1} << m)) {
    throw ArithmeticError("adder constant " + std::to_string(y) + " does not fit in " +
                          std::to_string(m) + " bits");
  }
  if (std::find(w.target.begin(), w.target.end(), ctl) != w.target.end() ||
      std::find(w.carries.begin(), w.carries.end(), ctl) != w.carries.end()) {
    throw StructuralError("adder control overlaps its operands");
  }

  // Stage 1: carries <- X + Y (low m bits), carries[m] <- overflow k.
  append_sigma_chain(net, y, ctl, w);

  // Stage 2: target <-> low carries.
  for (std::size_t i = 0; i < m; ++i) net.add(build_controlled_swap(ctl, w.target[i], w.carries[i]));

  // Stage 3: carries now hold X with k on top. W maps |R>|0> to |R>|R + 2^m - Y>,
  // which equals X + (1-k) 2^m, so flip the top carry and run W backwards.
  const std::uint64_t complement = (std::uint64_t{1} << m) - y;
  Network forward(net.qubit_count);
  append_sigma_chain(forward, complement, ctl, w);
  if ((complement >> m) & 1U) forward.add(Gate({ctl}, w.carries[m]));

  net.add(Gate({ctl}, w.carries[m]));
  net.append(forward.mirrored());
}

void append_mod_adder(Network& net, std::uint64_t y, std::uint64_t n, Qubit ctl,
                      const AdderWiring& w, Qubit flag) {
  check_wiring(w);
  if (w.target.size() < 3) throw StructuralError("mod-N adder needs at least L+2 = 3 target bits");
  const std::size_t bits = w.target.size() - 2;
  if (n < 2 || n > (std::uint64_t{1} << bits)) {
    throw ArithmeticError("modulus " + std::to_string(n) + " does not fit in " +
                          std::to_string(bits) + " bits");
  }
  if (y >= n) throw ArithmeticError("mod-N adder constant must be below N");
  const Qubit second_msb = w.target[bits];
  const Qubit msb = w.target[bits + 1];

  append_adder(net, y, ctl, w);
  append_adder(net, (std::uint64_t{1} << (bits + 1)) - n, ctl, w);
  // Bit L is set exactly when X + Y < N.
  net.add(Gate({second_msb}, flag));
  append_adder(net, n, flag, w);
  // Low bits now hold S = (X+Y) mod N. Bit L of S + 2^L - Y equals the flag.
  append_adder(net, (std::uint64_t{1} << bits) - y, ctl, w);
  net.add(Gate({second_msb}, flag));
  append_adder(net, y, ctl, w);
  // Both overflow bits are now 1 whenever ctl is.
  net.add(Gate({ctl}, second_msb));
  net.add(Gate({ctl}, msb));
}

void append_multiplier(Network& net, std::uint64_t c, std::uint64_t n, Qubit ctl, QubitRange reg,
                       const RegisterLayout& layout) {
  const std::size_t bits = layout.value_bits;
  if (reg.width != bits) throw StructuralError("multiplier register must be L bits wide");
  const auto inv = mod_inverse(c % n, n);
  if (const auto* f = std::get_if<SharedFactor>(&inv)) {
    throw ArithmeticError("multiplier constant " + std::to_string(c) + " shares the factor " +
                          std::to_string(f->divisor) + " with N");
  }
  const std::uint64_t c_inv = std::get<std::uint64_t>(inv);
  const QubitRange acc = layout.accumulator();
  const Qubit anc = layout.control_ancilla;
  const std::vector<Qubit> scratch = layout.adder_scratch();
  const AdderWiring into_acc{layout.adder_target(acc), layout.adder_carries().qubits()};
  const AdderWiring into_reg{layout.adder_target(reg), layout.adder_carries().qubits()};

  // Part 1: acc <- I*C mod N, one S_N(2^i C) per bit of I gated by ctl & I_i.
  std::uint64_t addend = c % n;
  for (std::size_t i = 0; i < bits; ++i) {
    net.add(Gate({ctl, reg[i]}, anc));
    append_mod_adder(net, addend, n, anc, into_acc, layout.modn_flag);
    net.add(Gate({ctl, reg[i]}, anc));
    net.mark_checkpoint(scratch);
    addend = mulmod(addend, 2, n);
  }

  // Part 2: the mirror of the circuit taking |0>|I'> to |I' C^-1>|I'>
  // clears the input copy from the register.
  std::vector<Network> erase(bits, Network(net.qubit_count));
  addend = c_inv;
  for (std::size_t i = 0; i < bits; ++i) {
    erase[i].add(Gate({ctl, acc[i]}, anc));
    append_mod_adder(erase[i], addend, n, anc, into_reg, layout.modn_flag);
    erase[i].add(Gate({ctl, acc[i]}, anc));
    addend = mulmod(addend, 2, n);
  }
  for (std::size_t i = bits; i-- > 0;) {
    net.append(erase[i].mirrored());
    net.mark_checkpoint(scratch);
  }

  // Part 3: move the product back into the register.
  for (std::size_t i = 0; i < bits; ++i) net.add(build_controlled_swap(ctl, reg[i], acc[i]));
  net.mark_checkpoint(layout.work_qubits());
}

Network build_adder(std::uint64_t y, Qubit ctl, const RegisterLayout& layout) {
  Network net(layout.qubit_count());
  append_adder(net, y, ctl, {layout.adder_target(layout.reg2), layout.adder_carries().qubits()});
  net.mark_checkpoint(layout.add_work.qubits());
  return net;
}

Network build_mod_adder(std::uint64_t y, std::uint64_t n, Qubit ctl, const RegisterLayout& layout) {
  Network net(layout.qubit_count());
  append_mod_adder(net, y, n, ctl,
                   {layout.adder_target(layout.reg2), layout.adder_carries().qubits()},
                   layout.modn_flag);
  net.mark_checkpoint(layout.adder_scratch());
  return net;
}

Network build_controlled_multiplier(std::uint64_t c, std::uint64_t n, Qubit ctl,
                                    const RegisterLayout& layout) {
  Network net(layout.qubit_count());
  append_multiplier(net, c, n, ctl, layout.reg2, layout);
  return net;
}

Network build_modexp(const ArithParams& params, const RegisterLayout& layout) {
  if (layout.value_bits != params.bits) {
    throw StructuralError("layout has L = " + std::to_string(layout.value_bits) + " but N needs " +
                          std::to_string(params.bits) + " bits");
  }
  if (layout.reg1.width < 64 && params.q > (std::uint64_t{1} << layout.reg1.width)) {
    throw StructuralError("q = " + std::to_string(params.q) + " does not fit in register 1");
  }
  Network net(layout.qubit_count());
  net.add(Gate({}, layout.reg2[0]));
  std::uint64_t factor = params.x % params.n;
  for (std::size_t i = 0; i < layout.reg1.width; ++i) {
    append_multiplier(net, factor, params.n, layout.reg1[i], layout.reg2, layout);
    factor = mulmod(factor, factor, params.n);
  }
  return net;
}

RegisterLayout layout_for(const ArithParams& params) {
  const std::size_t needed = static_cast<std::size_t>(std::bit_width(params.q - 1));
  return RegisterLayout::for_factoring(params.bits, std::max(2 * params.bits + 1, needed));
}

std::size_t qubit_formula(std::size_t bits) { return 5 * bits + 8; }

double gate_formula(std::size_t bits) {
  const double l = static_cast<double>(bits);
  return 240.0 * l * l * l + 484.0 * l * l + 182.0 * l;
}

ResourceReport resource_estimate(std::size_t bits) {
  if (bits == 0) throw ArithmeticError("L must be at least 1");
  ResourceReport r{qubit_formula(bits), 0, gate_formula(bits)};
  if (bits >= 2) {
    const std::uint64_t n = (std::uint64_t{1} << bits) - 1;
    const auto params = ArithParams::make(n, 2, 2);
    r.elementary_gates = build_modexp(params, layout_for(params)).size();
  }
  return r;
}

ResourceReport resource_report(const Network& modexp, std::size_t bits) {
  return {modexp.qubit_count, modexp.size(), gate_formula(bits)};
}

}  // namespace shorsim
