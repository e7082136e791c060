#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <variant>
#include <vector>

#include "shorsim/distribution.hpp"
#include "shorsim/gate.hpp"

namespace shorsim {

using Amplitude = std::complex<double>;

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One branch: computer basis string, environment excitation record
/// (bit k set iff the k-th decay event excited its environment qubit).
struct Component {
  Basis computer = 0;
  std::uint64_t env = 0;
  Amplitude amplitude;
};

/// Computer plus environment state as a list of nonzero branches.
///
/// Gates permute computer strings and each decay event records its outcome
/// in a fresh environment bit, so (computer, env) keys never collide and the
/// list needs no merging.
class SparseState {
 public:
  SparseState() = default;
  SparseState(std::size_t qubit_count, std::size_t env_count, std::vector<Component> components);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t env_count() const { return env_count_; }
  std::size_t size() const { return components_.size(); }
  std::span<const Component> components() const { return components_; }
  std::span<Component> components() { return components_; }

  double norm_squared() const;
  /// Sorted by (computer, env); the order of components carries no meaning.
  void canonicalize();

  /// Every gate applied to every branch, in order.
  void apply(std::span<const Gate> gates);

  std::vector<Component>& mutable_components() { return components_; }
  /// Reserves the next environment bit and returns its index.
  std::size_t add_env_bit();

 private:
  std::size_t qubit_count_ = 0;
  std::size_t env_count_ = 0;
  std::vector<Component> components_;
};

/// Uniform superposition over a < q in register 1, everything else |0>.
SparseState init_state(std::uint64_t q, const RegisterLayout& layout);

enum class DecayPolarity {
  OneDecaysToZero,  // |1> is the excited state
  ZeroDecaysToOne,  // mirrored rules
};

/// One sudden interaction with a fresh environment qubit: a branch whose qubit
/// is excited keeps amplitude sqrt(p_persist) and spawns a decayed branch with
/// sqrt(1 - p_persist) and the new environment bit set. Zero-weight branches
/// are dropped.
SparseState apply_decay(SparseState s, Qubit qubit, double p_persist,
                        bool excited_is_one = true);

struct DecayEvent {
  double time = 0.0;  // fraction of the program, in (0, 1)
  Qubit qubit = 0;
};

struct StaticLaw {
  double p_persist = 0.5;
};

/// p_persist = exp(-gamma * (t - last reset of the qubit)).
struct ExponentialClock {
  double gamma = 2.5;
};

using DecayLaw = std::variant<StaticLaw, ExponentialClock>;

struct NoiseSchedule {
  std::vector<DecayEvent> events;
  DecayLaw law = StaticLaw{1.0};

  /// Empty iff times are strictly increasing inside (0, 1) and qubits < qubit_count.
  std::vector<std::string> check(std::size_t qubit_count) const;
};

/// Times uniform on (0, 1) then sorted; qubits uniform over [0, n_qubits).
/// Deterministic for a given seed.
NoiseSchedule sample_schedule(std::size_t n_events, std::size_t n_qubits, std::uint64_t seed,
                              DecayLaw law = StaticLaw{0.5});

enum class Watchdog {
  Off,
  On,      // checkpoints reset the decay clocks of their work qubits
  Strict,  // as On, and checkpoint qubits are projected onto |0>
};

struct WatchdogClocks {
  std::vector<double> last_reset;

  explicit WatchdogClocks(std::size_t qubit_count = 0) : last_reset(qubit_count, 0.0) {}
};

struct RunOptions {
  Watchdog watchdog = Watchdog::Off;
  DecayPolarity polarity = DecayPolarity::OneDecaysToZero;
};

struct DecayRecord {
  double time = 0.0;
  Qubit qubit = 0;
  std::size_t boundary = 0;  // applied before this gate index
  double elapsed = 0.0;      // clock argument t - last_reset
  double p_decay = 0.0;
};

struct RunTrace {
  std::vector<DecayRecord> decays;
  std::size_t checkpoints_seen = 0;
  double discarded_probability = 0.0;  // strict watchdog only
};

enum class StepKind { Gate, Decay, Checkpoint };

/// Called after each gate (with the gate index), decay event and checkpoint.
/// Installing an observer switches the run to gate-by-gate evolution.
using StepObserver = std::function<void(StepKind, std::size_t, const SparseState&)>;

/// Evolves `s` through `net`. The event at time t is applied before gate
/// ceil(t * G); checkpoints at the same boundary follow the events there.
SparseState run(SparseState s, const Network& net, const NoiseSchedule& schedule,
                const RunOptions& options, WatchdogClocks& clocks, RunTrace* trace = nullptr,
                const StepObserver& observer = {});

/// Size-q DFT (or its inverse) over register 1, independently for every
/// assignment of the remaining qubits and environment. Throws SimulationError
/// if a branch holds register-1 value >= q.
SparseState fourier_first_register(const SparseState& s, std::uint64_t q, QubitRange reg1,
                                   bool inverse = false);

Distribution distribution_ned(const SparseState& s, std::uint64_t q, const RegisterLayout& layout);
Distribution distribution_ed(const SparseState& s, std::uint64_t q, const RegisterLayout& layout);

struct FinalDistributions {
  Distribution ned;
  Distribution ed;
};

/// Equivalent to fourier_first_register followed by both distributions, but
/// streams each transformed group into the tables instead of storing it.
FinalDistributions transform_and_measure(const SparseState& s, std::uint64_t q,
                                         const RegisterLayout& layout);

/// Lines "<computer bits> <env bits> <re> <im>", qubit 0 rightmost,
/// sorted lexicographically.
void dump_state(std::ostream& out, const SparseState& s);

}  // namespace shorsim
