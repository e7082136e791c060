#pragma once

// Brute-force oracles. Nothing here reuses the circuit builders' arithmetic:
// expected values come from plain integer operations.

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "shorsim/distribution.hpp"
#include "shorsim/gate.hpp"

namespace shorsim::verify {

/// x^a mod n by repeated squaring.
std::uint64_t modpow(std::uint64_t x, std::uint64_t a, std::uint64_t n);

/// Least r > 0 with x^r = 1 (mod n), by enumeration. 0 if none exists.
std::uint64_t multiplicative_order(std::uint64_t x, std::uint64_t n);

struct Counterexample {
  Basis input = 0;
  Basis expected = 0;
  Basis actual = 0;
  bool ancilla_dirty = false;
};

struct CheckReport {
  std::string name;
  std::size_t cases = 0;
  std::size_t failures = 0;
  std::vector<Counterexample> examples;  // first few failures

  bool passed() const { return failures == 0; }
};

/// Runs `net` on every input and compares the whole output string with
/// `expected(input)`. Any set bit under `ancilla_mask` in the output is also
/// reported.
CheckReport exhaustive_network_check(const Network& net, std::span<const Basis> inputs,
                                     const std::function<Basis(Basis)>& expected,
                                     Basis ancilla_mask, std::string name = {});

// Suites over the factoring layout for modulus n (L = bits of n). Each covers
// both control values.
CheckReport check_adder(std::size_t bits, std::uint64_t y);
CheckReport check_mod_adder(std::uint64_t n, std::uint64_t y);
CheckReport check_multiplier(std::uint64_t n, std::uint64_t c);
CheckReport check_modexp(std::uint64_t n, std::uint64_t x, std::uint64_t q);

/// Every block for modulus n: all adder constants below 2^(L+1), all mod-N
/// constants, every unit multiplier and the given modular-exponentiation bases.
std::vector<CheckReport> check_all(std::uint64_t n, std::span<const std::uint64_t> bases,
                                   std::uint64_t q);

/// P(c, r2) by direct summation over every a < q with x^a = r2 (mod n).
Distribution probc1_table(std::uint64_t n, std::uint64_t x, std::uint64_t q);

/// Closed form summing over b <= (q-1-k)/r with the centred residue of r*c.
Distribution probc2_table(std::uint64_t n, std::uint64_t x, std::uint64_t q);

/// probc2_table after checking it against probc1_table to 1e-12.
/// Throws std::logic_error on disagreement.
Distribution probc2_oracle(std::uint64_t n, std::uint64_t x, std::uint64_t q);

/// Representative of v mod q in (-q/2, q/2].
std::int64_t centered_residue(std::uint64_t v, std::uint64_t q);

}  // namespace shorsim::verify
