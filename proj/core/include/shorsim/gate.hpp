#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace shorsim {

using Qubit = std::uint32_t;

/// Computational basis string. Qubit k is bit k (qubit 0 is the LSB).
using Basis = std::uint64_t;

inline constexpr std::size_t kMaxQubits = 64;

class StructuralError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr Basis bit(Qubit q) { return Basis{1} << q; }

/// Generalized Toffoli gate: flips `target` iff every control is 1.
/// Zero controls is a NOT, one control a CNOT.
class Gate {
 public:
  Gate(std::initializer_list<Qubit> controls, Qubit target);
  Gate(std::span<const Qubit> controls, Qubit target);

  static Gate from_mask(Basis control_mask, Qubit target);

  Qubit target() const { return target_; }
  Basis control_mask() const { return controls_; }
  std::vector<Qubit> controls() const;
  std::size_t control_count() const;

  /// Target is not also a control.
  bool well_formed() const { return (controls_ & bit(target_)) == 0; }
  /// Highest qubit index touched, plus one.
  std::size_t span_width() const;

  Basis apply(Basis b) const {
    return (b & controls_) == controls_ ? b ^ bit(target_) : b;
  }

  friend bool operator==(const Gate&, const Gate&) = default;

 private:
  Gate(Basis mask, Qubit target, int);

  Basis controls_ = 0;
  Qubit target_ = 0;
};

/// Position `position` means "after the first `position` gates".
struct Checkpoint {
  std::size_t position = 0;
  std::vector<Qubit> qubits;

  friend bool operator==(const Checkpoint&, const Checkpoint&) = default;
};

/// Ordered gate list plus the points where listed work qubits are known to
/// be |0>. Time flows from the front of `gates` to the back.
struct Network {
  std::size_t qubit_count = 0;
  std::vector<Gate> gates;
  std::vector<Checkpoint> checkpoints;

  Network() = default;
  explicit Network(std::size_t qubits) : qubit_count(qubits) {}

  std::size_t size() const { return gates.size(); }
  bool empty() const { return gates.empty(); }

  void add(const Gate& g) { gates.push_back(g); }
  void add(std::span<const Gate> gs) { gates.insert(gates.end(), gs.begin(), gs.end()); }
  /// Appends `other`, shifting its checkpoint positions.
  void append(const Network& other);
  void mark_checkpoint(std::vector<Qubit> qubits);

  /// Gate list reversed. Every gate is an involution, so this is the inverse.
  Network mirrored() const;

  friend bool operator==(const Network&, const Network&) = default;
};

/// Contiguous run of qubits holding one binary number, LSB first.
struct QubitRange {
  Qubit first = 0;
  std::size_t width = 0;

  Qubit operator[](std::size_t i) const { return first + static_cast<Qubit>(i); }
  Qubit end() const { return first + static_cast<Qubit>(width); }
  bool contains(Qubit q) const { return q >= first && q < end(); }
  Basis mask() const;
  std::vector<Qubit> qubits() const;
  std::uint64_t read(Basis b) const;
  Basis write(Basis b, std::uint64_t value) const;
};

/// Qubit roles of the factoring computer.
///
/// The controlled mod-N adder works on an (L+2)-bit target: L value bits
/// (register 2 or the multiplier accumulator) and two overflow bits. The
/// overflow bits live at the top of `mult_work` and `add_work`.
struct RegisterLayout {
  std::size_t value_bits = 0;  // L
  QubitRange reg1;             // exponent a
  QubitRange reg2;             // L bits, ends holding x^a mod N
  QubitRange mult_work;        // L+1: accumulator (L) + overflow bit 2^L
  QubitRange add_work;         // L+4: adder carries (L+3) + overflow bit 2^(L+1)
  Qubit modn_flag = 0;
  Qubit control_ancilla = 0;   // holds (multiplier control AND selector bit)

  /// reg1 width defaults to 2L+1, giving 5L+8 qubits in total.
  static RegisterLayout for_factoring(std::size_t value_bits, std::size_t reg1_width = 0);

  std::size_t qubit_count() const;

  QubitRange accumulator() const { return {mult_work.first, value_bits}; }
  Qubit overflow_low() const { return mult_work[value_bits]; }
  Qubit overflow_high() const { return add_work[value_bits + 3]; }
  QubitRange adder_carries() const { return {add_work.first, value_bits + 3}; }

  /// Adder target built from an L-bit value range plus the overflow bits.
  std::vector<Qubit> adder_target(QubitRange value) const;

  /// Every qubit outside the two registers.
  Basis work_mask() const;
  std::vector<Qubit> work_qubits() const;
  /// Work qubits that are |0> between controlled mod-N additions.
  std::vector<Qubit> adder_scratch() const;

  /// Empty iff the roles are disjoint and cover [0, qubit_count()).
  std::vector<std::string> check() const;
};

Basis deposit(Basis b, std::span<const Qubit> qubits, std::uint64_t value);
std::uint64_t extract(Basis b, std::span<const Qubit> qubits);

/// Throws StructuralError if `g` touches a qubit at or above `width`.
Basis apply_gate(Basis b, const Gate& g, std::size_t width);
Basis apply_gates(Basis b, std::span<const Gate> gates);
/// Validates every gate against net.qubit_count first.
Basis apply_network(Basis b, const Network& net);

struct Diagnostic {
  enum class Kind { QubitOutOfRange, TargetIsControl, CheckpointOrder, CheckpointPosition, QubitCountMismatch };
  Kind kind;
  std::size_t index;  // gate or checkpoint index; 0 for network-level issues
  std::string message;
};

std::vector<Diagnostic> validate_network(const Network& net);
std::vector<Diagnostic> validate_network(const Network& net, const RegisterLayout& layout);

// Text format: "QUBITS n", then "T <target> <controls...>" per gate with
// "CHK <position> <qubits...>" lines interleaved at their positions.
void write_network(std::ostream& out, const Network& net);
std::string to_text(const Network& net);
Network read_network(std::istream& in);
Network parse_network(const std::string& text);

}  // namespace shorsim
