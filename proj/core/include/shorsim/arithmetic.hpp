#pragma once

#include <cstdint>
#include <variant>
#include <vector>

#include "shorsim/gate.hpp"

namespace shorsim {

class ArithmeticError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Classical inputs of the factoring computer.
struct ArithParams {
  std::uint64_t n = 0;  // number to factor
  std::uint64_t x = 0;  // base, coprime to n
  std::uint64_t q = 0;  // size of the Fourier transform on register 1
  std::size_t bits = 0; // L = ceil(log2 n)

  /// Throws ArithmeticError unless 1 < x < n, gcd(x, n) = 1 and q >= 2.
  /// The usual n^2 <= q <= 2n^2 window is not enforced.
  static ArithParams make(std::uint64_t n, std::uint64_t x, std::uint64_t q);
};

std::size_t bits_for(std::uint64_t n);

std::uint64_t gcd(std::uint64_t a, std::uint64_t b);
std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t n);
std::uint64_t powmod(std::uint64_t x, std::uint64_t e, std::uint64_t n);

/// Returned by mod_inverse when c and n share a factor.
struct SharedFactor {
  std::uint64_t divisor;
};

/// Multiplicative inverse of c modulo n via extended Euclid.
std::variant<std::uint64_t, SharedFactor> mod_inverse(std::uint64_t c, std::uint64_t n);

/// Wiring of a simple adder over an m-bit target. carries.size() == m + 1.
struct AdderWiring {
  std::vector<Qubit> target;
  std::vector<Qubit> carries;
};

/// Controlled two-qubit adder. With ctl = 1 and work = 0 on entry:
/// i1 <- LSB(i1 + i2 + sigma), work <- MSB, i2 unchanged. Identity if ctl = 0.
std::vector<Gate> build_sigma(bool sigma, Qubit ctl, Qubit i1, Qubit i2, Qubit work);

/// Controlled swap of a and b as three Toffoli gates.
std::vector<Gate> build_controlled_swap(Qubit ctl, Qubit a, Qubit b);

/// Appends S(Y): target <- (target + Y) mod 2^m when ctl = 1, carries restored
/// to 0. Three stages: sum into the carries, controlled swap, then the inverse
/// of the circuit adding 2^m - Y to erase the input copy.
void append_adder(Network& net, std::uint64_t y, Qubit ctl, const AdderWiring& wiring);

/// Appends S_N(Y) on an (L+2)-bit target whose low L bits hold X < n and whose
/// top two bits are 0. Needs y < n. Leaves (X + Y) mod n and all scratch at 0.
void append_mod_adder(Network& net, std::uint64_t y, std::uint64_t n, Qubit ctl,
                      const AdderWiring& wiring, Qubit flag);

/// Appends Pi_N(C): register <- register * C mod n when ctl = 1, identity
/// otherwise. Adds a checkpoint after every inner mod-N addition and at the end.
void append_multiplier(Network& net, std::uint64_t c, std::uint64_t n, Qubit ctl,
                       QubitRange reg, const RegisterLayout& layout);

// Standalone blocks on the factoring layout. The adder target is reg2 plus the
// two overflow bits; `ctl` must lie outside the block (reg1 is a good choice).
Network build_adder(std::uint64_t y, Qubit ctl, const RegisterLayout& layout);
Network build_mod_adder(std::uint64_t y, std::uint64_t n, Qubit ctl, const RegisterLayout& layout);
Network build_controlled_multiplier(std::uint64_t c, std::uint64_t n, Qubit ctl,
                                    const RegisterLayout& layout);

/// |a>|0> -> |a>|x^a mod n> over the whole of reg1.
Network build_modexp(const ArithParams& params, const RegisterLayout& layout);

/// Layout for `params`: a 2L+1 exponent register, widened if q needs more bits.
RegisterLayout layout_for(const ArithParams& params);

struct ResourceReport {
  std::size_t qubits = 0;
  std::size_t elementary_gates = 0;
  double formula_gates = 0.0;
};

std::size_t qubit_formula(std::size_t bits);
double gate_formula(std::size_t bits);

/// Counts gates of the canonical instance n = 2^L - 1, x = 2 (L >= 2).
/// For L = 1 no such instance exists and elementary_gates is 0.
ResourceReport resource_estimate(std::size_t bits);
ResourceReport resource_report(const Network& modexp, std::size_t bits);

}  // namespace shorsim
