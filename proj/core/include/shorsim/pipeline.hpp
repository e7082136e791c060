#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "shorsim/distribution.hpp"
#include "shorsim/simulator.hpp"

namespace shorsim {

class InvalidOrder : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// P(c, r2) for every c < q from the closed-form peak formula. Empty when r2 is
/// not a power of x modulo n.
std::vector<double> ideal_distribution(std::uint64_t n, std::uint64_t x, std::uint64_t q,
                                       std::uint64_t r2);

struct Convergent {
  std::uint64_t numerator = 0;
  std::uint64_t denominator = 0;

  friend bool operator==(const Convergent&, const Convergent&) = default;
};

/// Convergents of c/q in order, starting with floor(c/q)/1.
std::vector<Convergent> convergents(std::uint64_t c, std::uint64_t q);

struct OrderAttempt {
  std::uint64_t c = 0;
  std::vector<Convergent> tried;
  std::optional<std::uint64_t> order;
};

/// Tries each convergent d/r' of c/q with 0 < d and r' < n, testing multiples
/// r' m < n for x^(r' m) = 1 (mod n). Keeps the least verified value.
OrderAttempt continued_fraction_order(std::uint64_t c, std::uint64_t q, std::uint64_t n,
                                      std::uint64_t x);

enum class FactorFailure { OddOrder, MinusOneRoot, TrivialDivisors };

std::string_view to_string(FactorFailure f);

struct FactorOutcome {
  std::vector<std::uint64_t> factors;  // distinct nontrivial divisors of n, ascending
  std::optional<FactorFailure> failure;

  bool ok() const { return !failure.has_value(); }
};

/// gcd(x^(r/2) -+ 1, n). Throws InvalidOrder unless x^r = 1 (mod n).
FactorOutcome extract_factors(std::uint64_t x, std::uint64_t r, std::uint64_t n);

enum class SamplingMode {
  NoErrorDetection,  // draw (r1, r2) from P_NED
  ErrorDetection,    // draw from P_ED renormalized (work qubits post-selected to 0)
};

struct ExperimentConfig {
  std::uint64_t n = 15;
  std::optional<std::uint64_t> x = 7;  // nullopt picks x at random
  std::uint64_t q = 130;
  std::size_t events = 0;
  DecayLaw law = StaticLaw{1.0};
  Watchdog watchdog = Watchdog::Off;
  DecayPolarity polarity = DecayPolarity::OneDecaysToZero;
  std::uint64_t seed = 1;
  std::size_t repetitions = 1;
  std::size_t samples = 20;
  SamplingMode sampling = SamplingMode::NoErrorDetection;
  bool keep_distributions = true;
};

struct SampleRecord {
  std::uint64_t c = 0;
  std::uint64_t r2 = 0;
  std::vector<Convergent> convergents;
  std::optional<std::uint64_t> verified_r;
  std::vector<std::uint64_t> factors;
};

struct RepetitionResult {
  std::uint64_t seed = 0;
  NoiseSchedule schedule;
  std::vector<SampleRecord> samples;
  std::optional<std::uint64_t> order;  // least order verified in this repetition
  std::vector<std::uint64_t> factors;
  std::optional<FinalDistributions> distributions;

  bool success() const { return !factors.empty(); }
};

struct ExperimentStats {
  std::size_t repetitions = 0;
  std::size_t successes = 0;
  std::size_t samples = 0;
  std::size_t informative_samples = 0;  // samples yielding a verified order
  double success_rate = 0.0;
  double mean_discarded = 0.0;          // strict watchdog only
};

struct FactorReport {
  std::uint64_t n = 0;
  std::uint64_t x = 0;
  std::uint64_t q = 0;
  bool classical_shortcut = false;      // gcd(x, n) > 1 already split n
  std::optional<std::uint64_t> order;   // most frequently verified order
  std::vector<std::uint64_t> factors;
  std::vector<std::string> warnings;
  std::vector<RepetitionResult> repetitions;
  ExperimentStats stats;

  /// Mean of the kept per-repetition distributions; nullopt if none were kept.
  std::optional<FinalDistributions> mean_distributions() const;
};

FactorReport run_experiment(const ExperimentConfig& cfg);

/// {order, factors, samples: [{c, r2, convergents, verified_r}], stats, ...}
std::string to_json(const FactorReport& report);

/// Probability that at least one of `samples` draws from the noiseless
/// distribution splits n, computed from the closed-form table.
double predicted_success(std::uint64_t n, std::uint64_t x, std::uint64_t q, std::size_t samples);

/// Derived seed of repetition `rep` (splitmix64 of seed and index).
std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep);

}  // namespace shorsim
