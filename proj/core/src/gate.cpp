#include "shorsim/gate.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>

namespace shorsim {

namespace {

Basis mask_of(std::span<const Qubit> qubits) {
  Basis m = 0;
  for (Qubit q : qubits) {
    if (q >= kMaxQubits) {
      throw StructuralError("qubit index " + std::to_string(q) + " exceeds the 64-qubit limit");
    }
    m |= bit(q);
  }
  return m;
}

std::vector<Qubit> qubits_of(Basis mask) {
  std::vector<Qubit> out;
  while (mask != 0) {
    out.push_back(static_cast<Qubit>(std::countr_zero(mask)));
    mask &= mask - 1;
  }
  return out;
}

}  // namespace

Gate::Gate(Basis mask, Qubit target, int) : controls_(mask), target_(target) {
  if (target >= kMaxQubits) {
    throw StructuralError("target index " + std::to_string(target) + " exceeds the 64-qubit limit");
  }
}

Gate::Gate(std::initializer_list<Qubit> controls, Qubit target)
    : Gate(std::span<const Qubit>(controls.begin(), controls.size()), target) {}

Gate::Gate(std::span<const Qubit> controls, Qubit target) : Gate(mask_of(controls), target, 0) {}

Gate Gate::from_mask(Basis control_mask, Qubit target) { return Gate(control_mask, target, 0); }

std::vector<Qubit> Gate::controls() const { return qubits_of(controls_); }

std::size_t Gate::control_count() const { return static_cast<std::size_t>(std::popcount(controls_)); }

std::size_t Gate::span_width() const {
  return static_cast<std::size_t>(std::bit_width(controls_ | bit(target_)));
}

void Network::append(const Network& other) {
  const std::size_t offset = gates.size();
  gates.insert(gates.end(), other.gates.begin(), other.gates.end());
  for (const Checkpoint& c : other.checkpoints) {
    checkpoints.push_back({c.position + offset, c.qubits});
  }
}

void Network::mark_checkpoint(std::vector<Qubit> qubits) {
  std::sort(qubits.begin(), qubits.end());
  checkpoints.push_back({gates.size(), std::move(qubits)});
}

Network Network::mirrored() const {
  Network out(qubit_count);
  out.gates.assign(gates.rbegin(), gates.rend());
  const std::size_t n = gates.size();
  for (auto it = checkpoints.rbegin(); it != checkpoints.rend(); ++it) {
    out.checkpoints.push_back({n - it->position, it->qubits});
  }
  return out;
}

Basis QubitRange::mask() const {
  if (width == 0) return 0;
  const Basis ones = width >= 64 ? ~Basis{0} : (Basis{1} << width) - 1;
  return ones << first;
}

std::vector<Qubit> QubitRange::qubits() const {
  std::vector<Qubit> out(width);
  for (std::size_t i = 0; i < width; ++i) out[i] = (*this)[i];
  return out;
}

std::uint64_t QubitRange::read(Basis b) const { return (b & mask()) >> first; }

Basis QubitRange::write(Basis b, std::uint64_t value) const {
  return (b & ~mask()) | ((value << first) & mask());
}

RegisterLayout RegisterLayout::for_factoring(std::size_t value_bits, std::size_t reg1_width) {
  if (value_bits == 0) throw StructuralError("register width L must be at least 1");
  if (reg1_width == 0) reg1_width = 2 * value_bits + 1;
  RegisterLayout l;
  l.value_bits = value_bits;
  Qubit next = 0;
  auto take = [&next](std::size_t w) {
    QubitRange r{next, w};
    next += static_cast<Qubit>(w);
    return r;
  };
  l.reg1 = take(reg1_width);
  l.reg2 = take(value_bits);
  l.mult_work = take(value_bits + 1);
  l.add_work = take(value_bits + 4);
  l.modn_flag = next++;
  l.control_ancilla = next++;
  if (l.qubit_count() > kMaxQubits) {
    throw StructuralError("layout needs " + std::to_string(l.qubit_count()) +
                          " qubits, more than the 64-qubit limit");
  }
  return l;
}

std::size_t RegisterLayout::qubit_count() const {
  return reg1.width + reg2.width + mult_work.width + add_work.width + 2;
}

std::vector<Qubit> RegisterLayout::adder_target(QubitRange value) const {
  std::vector<Qubit> t = value.qubits();
  t.push_back(overflow_low());
  t.push_back(overflow_high());
  return t;
}

Basis RegisterLayout::work_mask() const {
  return mult_work.mask() | add_work.mask() | bit(modn_flag) | bit(control_ancilla);
}

std::vector<Qubit> RegisterLayout::work_qubits() const { return qubits_of(work_mask()); }

std::vector<Qubit> RegisterLayout::adder_scratch() const {
  Basis m = add_work.mask() | bit(overflow_low()) | bit(modn_flag) | bit(control_ancilla);
  return qubits_of(m);
}

std::vector<std::string> RegisterLayout::check() const {
  std::vector<std::string> issues;
  const std::size_t n = qubit_count();
  std::vector<int> owners(n, 0);
  auto claim = [&](Qubit q, const char* role) {
    if (q >= n) {
      issues.push_back(std::string(role) + " qubit " + std::to_string(q) + " outside layout");
      return;
    }
    if (++owners[q] > 1) {
      issues.push_back(std::string(role) + " qubit " + std::to_string(q) + " already assigned");
    }
  };
  auto claim_range = [&](const QubitRange& r, const char* role) {
    for (std::size_t i = 0; i < r.width; ++i) claim(r[i], role);
  };
  claim_range(reg1, "reg1");
  claim_range(reg2, "reg2");
  claim_range(mult_work, "mult_work");
  claim_range(add_work, "add_work");
  claim(modn_flag, "modn_flag");
  claim(control_ancilla, "control_ancilla");
  for (std::size_t q = 0; q < n; ++q) {
    if (owners[q] == 0) issues.push_back("qubit " + std::to_string(q) + " has no role");
  }
  if (reg2.width != value_bits) issues.push_back("reg2 width differs from L");
  if (mult_work.width != value_bits + 1) issues.push_back("mult_work width must be L+1");
  if (add_work.width != value_bits + 4) issues.push_back("add_work width must be L+4");
  return issues;
}

Basis deposit(Basis b, std::span<const Qubit> qubits, std::uint64_t value) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    const Basis m = bit(qubits[i]);
    b = ((value >> i) & 1U) ? (b | m) : (b & ~m);
  }
  return b;
}

std::uint64_t extract(Basis b, std::span<const Qubit> qubits) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    v |= ((b >> qubits[i]) & 1U) << i;
  }
  return v;
}

Basis apply_gate(Basis b, const Gate& g, std::size_t width) {
  if (g.span_width() > width) {
    throw StructuralError("gate on qubit " + std::to_string(g.span_width() - 1) +
                          " applied to a " + std::to_string(width) + "-qubit string");
  }
  return g.apply(b);
}

Basis apply_gates(Basis b, std::span<const Gate> gates) {
  for (const Gate& g : gates) b = g.apply(b);
  return b;
}

Basis apply_network(Basis b, const Network& net) {
  for (const Gate& g : net.gates) b = apply_gate(b, g, net.qubit_count);
  return b;
}

std::vector<Diagnostic> validate_network(const Network& net) {
  std::vector<Diagnostic> out;
  using K = Diagnostic::Kind;
  if (net.qubit_count > kMaxQubits) {
    out.push_back({K::QubitCountMismatch, 0, "qubit count exceeds 64"});
  }
  for (std::size_t i = 0; i < net.gates.size(); ++i) {
    const Gate& g = net.gates[i];
    if (!g.well_formed()) {
      out.push_back({K::TargetIsControl, i,
                     "gate " + std::to_string(i) + ": target " + std::to_string(g.target()) +
                         " is also a control"});
    }
    if (g.span_width() > net.qubit_count) {
      out.push_back({K::QubitOutOfRange, i,
                     "gate " + std::to_string(i) + " touches qubit " +
                         std::to_string(g.span_width() - 1)});
    }
  }
  std::size_t last = 0;
  for (std::size_t i = 0; i < net.checkpoints.size(); ++i) {
    const Checkpoint& c = net.checkpoints[i];
    if (c.position > net.gates.size()) {
      out.push_back({K::CheckpointPosition, i,
                     "checkpoint " + std::to_string(i) + " at position " +
                         std::to_string(c.position) + " beyond " +
                         std::to_string(net.gates.size()) + " gates"});
    } else if (c.position < last) {
      out.push_back({K::CheckpointOrder, i,
                     "checkpoint " + std::to_string(i) + " precedes its predecessor"});
    }
    last = std::max(last, c.position);
    for (Qubit q : c.qubits) {
      if (q >= net.qubit_count) {
        out.push_back({K::QubitOutOfRange, i,
                       "checkpoint " + std::to_string(i) + " names qubit " + std::to_string(q)});
      }
    }
  }
  return out;
}

std::vector<Diagnostic> validate_network(const Network& net, const RegisterLayout& layout) {
  std::vector<Diagnostic> out = validate_network(net);
  if (net.qubit_count != layout.qubit_count()) {
    out.push_back({Diagnostic::Kind::QubitCountMismatch, 0,
                   "network has " + std::to_string(net.qubit_count) + " qubits, layout " +
                       std::to_string(layout.qubit_count())});
  }
  return out;
}

void write_network(std::ostream& out, const Network& net) {
  out << "QUBITS " << net.qubit_count << '\n';
  std::size_t next_chk = 0;
  auto flush_checkpoints = [&](std::size_t pos) {
    while (next_chk < net.checkpoints.size() && net.checkpoints[next_chk].position <= pos) {
      const Checkpoint& c = net.checkpoints[next_chk++];
      out << "CHK " << c.position;
      for (Qubit q : c.qubits) out << ' ' << q;
      out << '\n';
    }
  };
  for (std::size_t i = 0; i < net.gates.size(); ++i) {
    flush_checkpoints(i);
    const Gate& g = net.gates[i];
    out << "T " << g.target();
    for (Qubit q : g.controls()) out << ' ' << q;
    out << '\n';
  }
  flush_checkpoints(static_cast<std::size_t>(-1));
}

std::string to_text(const Network& net) {
  std::ostringstream os;
  write_network(os, net);
  return os.str();
}

Network read_network(std::istream& in) {
  Network net;
  bool have_count = false;
  std::string line;
  std::size_t lineno = 0;
  auto fail = [&](const std::string& what) {
    throw StructuralError("network text line " + std::to_string(lineno) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag)) continue;
    std::vector<std::uint64_t> nums;
    std::uint64_t v = 0;
    while (ls >> v) nums.push_back(v);
    if (!ls.eof()) fail("unparsable token");
    if (tag == "QUBITS") {
      if (nums.size() != 1) fail("QUBITS takes one value");
      net.qubit_count = nums[0];
      have_count = true;
    } else if (tag == "T") {
      if (nums.empty()) fail("gate line needs a target");
      std::vector<Qubit> ctl;
      for (std::size_t i = 1; i < nums.size(); ++i) {
        if (nums[i] >= kMaxQubits) fail("qubit index out of range");
        ctl.push_back(static_cast<Qubit>(nums[i]));
      }
      if (nums[0] >= kMaxQubits) fail("qubit index out of range");
      net.gates.emplace_back(std::span<const Qubit>(ctl), static_cast<Qubit>(nums[0]));
    } else if (tag == "CHK") {
      if (nums.empty()) fail("checkpoint line needs a position");
      Checkpoint c{nums[0], {}};
      for (std::size_t i = 1; i < nums.size(); ++i) c.qubits.push_back(static_cast<Qubit>(nums[i]));
      net.checkpoints.push_back(std::move(c));
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!have_count) throw StructuralError("network text has no QUBITS line");
  return net;
}

Network parse_network(const std::string& text) {
  std::istringstream is(text);
  return read_network(is);
}

}  // namespace shorsim
