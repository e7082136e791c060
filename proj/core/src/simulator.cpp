#include "shorsim/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>
#include <string>

namespace {
__extension__ typedef unsigned __int128 u128;
}  // namespace

namespace shorsim {

SparseState::SparseState(std::size_t qubit_count, std::size_t env_count,
                         std::vector<Component> components)
    : qubit_count_(qubit_count), env_count_(env_count), components_(std::move(components)) {
  if (qubit_count_ > kMaxQubits) throw SimulationError("more than 64 computer qubits");
  if (env_count_ > 64) throw SimulationError("more than 64 environment records");
}

double SparseState::norm_squared() const {
  double sum = 0.0;
  for (const Component& c : components_) sum += std::norm(c.amplitude);
  return sum;
}

void SparseState::canonicalize() {
  std::sort(components_.begin(), components_.end(), [](const Component& a, const Component& b) {
    return a.computer != b.computer ? a.computer < b.computer : a.env < b.env;
  });
}

void SparseState::apply(std::span<const Gate> gates) {
  if (gates.empty()) return;
  for (Component& c : components_) c.computer = apply_gates(c.computer, gates);
}

std::size_t SparseState::add_env_bit() {
  if (env_count_ >= 64) throw SimulationError("environment record limited to 64 decay events");
  return env_count_++;
}

SparseState init_state(std::uint64_t q, const RegisterLayout& layout) {
  if (q < 2) throw SimulationError("q must be at least 2");
  if (layout.reg1.width < 64 && q > (std::uint64_t{1} << layout.reg1.width)) {
    throw SimulationError("q = " + std::to_string(q) + " exceeds the capacity of a " +
                          std::to_string(layout.reg1.width) + "-qubit register");
  }
  const Amplitude amp(1.0 / std::sqrt(static_cast<double>(q)), 0.0);
  std::vector<Component> comps;
  comps.reserve(q);
  for (std::uint64_t a = 0; a < q; ++a) comps.push_back({layout.reg1.write(0, a), 0, amp});
  return SparseState(layout.qubit_count(), 0, std::move(comps));
}

SparseState apply_decay(SparseState s, Qubit qubit, double p_persist, bool excited_is_one) {
  if (!(p_persist >= 0.0 && p_persist <= 1.0)) {
    throw SimulationError("persistence probability must lie in [0, 1]");
  }
  if (qubit >= s.qubit_count()) throw SimulationError("decay on a qubit outside the computer");
  const std::uint64_t env_bit = std::uint64_t{1} << s.add_env_bit();
  const double keep = std::sqrt(p_persist);
  const double lose = std::sqrt(1.0 - p_persist);
  const Basis mask = bit(qubit);
  const Basis excited = excited_is_one ? mask : 0;

  auto& comps = s.mutable_components();
  const std::size_t n = comps.size();
  for (std::size_t i = 0; i < n; ++i) {
    Component& c = comps[i];
    if ((c.computer & mask) != excited) continue;
    if (lose > 0.0) comps.push_back({c.computer ^ mask, c.env | env_bit, comps[i].amplitude * lose});
    comps[i].amplitude *= keep;
  }
  if (keep == 0.0) {
    std::erase_if(comps, [](const Component& c) { return c.amplitude == Amplitude{}; });
  }
  return s;
}

std::vector<std::string> NoiseSchedule::check(std::size_t qubit_count) const {
  std::vector<std::string> issues;
  double prev = 0.0;
  for (std::size_t i = 0; i < events.size(); ++i) {
    const DecayEvent& e = events[i];
    if (!(e.time > 0.0 && e.time < 1.0)) {
      issues.push_back("event " + std::to_string(i) + " time outside (0, 1)");
    } else if (i > 0 && !(e.time > prev)) {
      issues.push_back("event " + std::to_string(i) + " time not increasing");
    }
    prev = e.time;
    if (e.qubit >= qubit_count) {
      issues.push_back("event " + std::to_string(i) + " on qubit " + std::to_string(e.qubit));
    }
  }
  if (const auto* s = std::get_if<StaticLaw>(&law); s && !(s->p_persist >= 0.0 && s->p_persist <= 1.0)) {
    issues.push_back("static persistence probability outside [0, 1]");
  }
  if (const auto* e = std::get_if<ExponentialClock>(&law); e && !(e->gamma >= 0.0)) {
    issues.push_back("decay rate must be nonnegative");
  }
  return issues;
}

NoiseSchedule sample_schedule(std::size_t n_events, std::size_t n_qubits, std::uint64_t seed,
                              DecayLaw law) {
  NoiseSchedule sched;
  sched.law = law;
  if (n_events == 0) return sched;
  if (n_qubits == 0) throw SimulationError("cannot place decay events on zero qubits");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> when(0.0, 1.0);
  std::uniform_int_distribution<std::size_t> which(0, n_qubits - 1);
  for (;;) {
    sched.events.clear();
    for (std::size_t i = 0; i < n_events; ++i) {
      double t = 0.0;
      while (t == 0.0) t = when(rng);
      sched.events.push_back({t, static_cast<Qubit>(which(rng))});
    }
    std::sort(sched.events.begin(), sched.events.end(),
              [](const DecayEvent& a, const DecayEvent& b) { return a.time < b.time; });
    const bool distinct = std::adjacent_find(sched.events.begin(), sched.events.end(),
                                             [](const DecayEvent& a, const DecayEvent& b) {
                                               return a.time == b.time;
                                             }) == sched.events.end();
    if (distinct) return sched;
  }
}

SparseState run(SparseState s, const Network& net, const NoiseSchedule& schedule,
                const RunOptions& options, WatchdogClocks& clocks, RunTrace* trace,
                const StepObserver& observer) {
  if (!validate_network(net).empty()) throw StructuralError("network failed validation");
  if (net.qubit_count != s.qubit_count()) {
    throw SimulationError("state and network disagree on the qubit count");
  }
  if (auto issues = schedule.check(s.qubit_count()); !issues.empty()) {
    throw SimulationError("invalid noise schedule: " + issues.front());
  }
  if (clocks.last_reset.size() != s.qubit_count()) clocks.last_reset.assign(s.qubit_count(), 0.0);

  const std::size_t total = net.size();
  const double gate_time = total == 0 ? 0.0 : 1.0 / static_cast<double>(total);
  const auto& events = schedule.events;
  const auto& checkpoints = net.checkpoints;
  auto boundary_of = [&](const DecayEvent& e) {
    const double scaled = std::ceil(e.time * static_cast<double>(total));
    return std::min(total, static_cast<std::size_t>(std::max(0.0, scaled)));
  };
  const bool excited_is_one = options.polarity == DecayPolarity::OneDecaysToZero;

  std::size_t pos = 0;
  std::size_t ev = 0;
  std::size_t ck = 0;
  auto advance_to = [&](std::size_t stop) {
    if (!observer) {
      s.apply(std::span<const Gate>(net.gates).subspan(pos, stop - pos));
      pos = stop;
      return;
    }
    for (; pos < stop; ++pos) {
      s.apply(std::span<const Gate>(&net.gates[pos], 1));
      observer(StepKind::Gate, pos, s);
    }
  };

  for (;;) {
    std::size_t next = total;
    if (ev < events.size()) next = std::min(next, boundary_of(events[ev]));
    if (ck < checkpoints.size()) next = std::min(next, checkpoints[ck].position);
    advance_to(next);

    for (; ev < events.size() && boundary_of(events[ev]) == next; ++ev) {
      const DecayEvent& e = events[ev];
      const double elapsed = e.time - clocks.last_reset[e.qubit];
      double p_persist = 1.0;
      if (const auto* stat = std::get_if<StaticLaw>(&schedule.law)) {
        p_persist = stat->p_persist;
      } else {
        p_persist = std::exp(-std::get<ExponentialClock>(schedule.law).gamma * std::max(0.0, elapsed));
      }
      s = apply_decay(std::move(s), e.qubit, p_persist, excited_is_one);
      if (trace) trace->decays.push_back({e.time, e.qubit, next, elapsed, 1.0 - p_persist});
      if (observer) observer(StepKind::Decay, ev, s);
    }

    for (; ck < checkpoints.size() && checkpoints[ck].position == next; ++ck) {
      const Checkpoint& c = checkpoints[ck];
      if (trace) ++trace->checkpoints_seen;
      if (options.watchdog != Watchdog::Off) {
        const double now = static_cast<double>(c.position) * gate_time;
        for (Qubit q : c.qubits) clocks.last_reset[q] = now;
      }
      if (options.watchdog == Watchdog::Strict) {
        Basis mask = 0;
        for (Qubit q : c.qubits) mask |= bit(q);
        auto& comps = s.mutable_components();
        const double before = s.norm_squared();
        std::erase_if(comps, [mask](const Component& x) { return (x.computer & mask) != 0; });
        const double after = s.norm_squared();
        if (after <= 0.0) throw SimulationError("strict watchdog discarded every branch");
        const double scale = 1.0 / std::sqrt(after);
        for (Component& x : comps) x.amplitude *= scale;
        if (trace) trace->discarded_probability += (before - after) / before;
      }
      if (observer) observer(StepKind::Checkpoint, ck, s);
    }

    if (next == total && ev == events.size() && ck == checkpoints.size()) break;
  }
  return s;
}

namespace {

struct GroupedBranches {
  std::vector<std::size_t> order;
  std::vector<std::size_t> starts;  // group boundaries into `order`, plus a sentinel
};

// Groups branches that agree on everything except register 1.
GroupedBranches group_by_rest(const SparseState& s, std::uint64_t q, QubitRange reg1) {
  const auto comps = s.components();
  const Basis reg_mask = reg1.mask();
  for (const Component& c : comps) {
    if (reg1.read(c.computer) >= q) {
      throw SimulationError("register 1 holds " + std::to_string(reg1.read(c.computer)) +
                            ", outside the transform size " + std::to_string(q));
    }
  }
  GroupedBranches g;
  g.order.resize(comps.size());
  std::iota(g.order.begin(), g.order.end(), std::size_t{0});
  std::sort(g.order.begin(), g.order.end(), [&](std::size_t i, std::size_t j) {
    const Basis ri = comps[i].computer & ~reg_mask;
    const Basis rj = comps[j].computer & ~reg_mask;
    if (ri != rj) return ri < rj;
    if (comps[i].env != comps[j].env) return comps[i].env < comps[j].env;
    return comps[i].computer < comps[j].computer;
  });
  for (std::size_t k = 0; k < g.order.size(); ++k) {
    const Component& c = comps[g.order[k]];
    if (k == 0) {
      g.starts.push_back(0);
      continue;
    }
    const Component& p = comps[g.order[k - 1]];
    if ((c.computer & ~reg_mask) != (p.computer & ~reg_mask) || c.env != p.env) g.starts.push_back(k);
  }
  g.starts.push_back(g.order.size());
  return g;
}

std::vector<Amplitude> twiddles(std::uint64_t q, bool inverse) {
  std::vector<Amplitude> w(q);
  const double sign = inverse ? -1.0 : 1.0;
  for (std::uint64_t k = 0; k < q; ++k) {
    w[k] = std::polar(1.0, sign * 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(q));
  }
  return w;
}

// out[c] = q^-1/2 sum_a exp(+-2 pi i a c / q) A(a) for one group.
template <typename Sink>
void transform_groups(const SparseState& s, std::uint64_t q, QubitRange reg1, bool inverse, Sink&& sink) {
  const auto comps = s.components();
  const auto groups = group_by_rest(s, q, reg1);
  const auto w = twiddles(q, inverse);
  const double scale = 1.0 / std::sqrt(static_cast<double>(q));
  std::vector<Amplitude> out(q);
  std::vector<std::uint64_t> regs;
  std::vector<Amplitude> amps;
  for (std::size_t gi = 0; gi + 1 < groups.starts.size(); ++gi) {
    regs.clear();
    amps.clear();
    for (std::size_t k = groups.starts[gi]; k < groups.starts[gi + 1]; ++k) {
      const Component& c = comps[groups.order[k]];
      regs.push_back(reg1.read(c.computer));
      amps.push_back(c.amplitude);
    }
    for (std::uint64_t c = 0; c < q; ++c) {
      Amplitude sum{};
      for (std::size_t j = 0; j < regs.size(); ++j) {
        sum += amps[j] * w[static_cast<std::uint64_t>((static_cast<u128>(regs[j]) * c) % q)];
      }
      out[c] = sum * scale;
    }
    const Component& head = comps[groups.order[groups.starts[gi]]];
    sink(head.computer & ~reg1.mask(), head.env, std::span<const Amplitude>(out));
  }
}

}  // namespace

SparseState fourier_first_register(const SparseState& s, std::uint64_t q, QubitRange reg1, bool inverse) {
  if (q == 0) throw SimulationError("transform size must be positive");
  std::vector<Component> out;
  transform_groups(s, q, reg1, inverse, [&](Basis rest, std::uint64_t env, std::span<const Amplitude> amps) {
    for (std::uint64_t c = 0; c < amps.size(); ++c) out.push_back({reg1.write(rest, c), env, amps[c]});
  });
  return SparseState(s.qubit_count(), s.env_count(), std::move(out));
}

namespace {

Distribution measure(const SparseState& s, std::uint64_t q, const RegisterLayout& layout, bool detect) {
  Distribution d(q, layout.value_bits,
                 detect ? DistributionKind::ErrorDetection : DistributionKind::NoErrorDetection);
  const Basis work = layout.work_mask();
  for (const Component& c : s.components()) {
    const std::uint64_t r1 = layout.reg1.read(c.computer);
    if (r1 >= q) throw SimulationError("register 1 value outside [0, q)");
    if (detect && (c.computer & work) != 0) continue;
    d.at(r1, layout.reg2.read(c.computer)) += std::norm(c.amplitude);
  }
  return d;
}

}  // namespace

Distribution distribution_ned(const SparseState& s, std::uint64_t q, const RegisterLayout& layout) {
  return measure(s, q, layout, false);
}

Distribution distribution_ed(const SparseState& s, std::uint64_t q, const RegisterLayout& layout) {
  return measure(s, q, layout, true);
}

FinalDistributions transform_and_measure(const SparseState& s, std::uint64_t q, const RegisterLayout& layout) {
  FinalDistributions f{Distribution(q, layout.value_bits, DistributionKind::NoErrorDetection),
                       Distribution(q, layout.value_bits, DistributionKind::ErrorDetection)};
  const Basis work = layout.work_mask();
  transform_groups(s, q, layout.reg1, false, [&](Basis rest, std::uint64_t, std::span<const Amplitude> amps) {
    const std::uint64_t r2 = layout.reg2.read(rest);
    const bool clean = (rest & work) == 0;
    for (std::uint64_t c = 0; c < amps.size(); ++c) {
      const double p = std::norm(amps[c]);
      f.ned.at(c, r2) += p;
      if (clean) f.ed.at(c, r2) += p;
    }
  });
  return f;
}

void dump_state(std::ostream& out, const SparseState& s) {
  std::vector<std::string> lines;
  lines.reserve(s.size());
  char num[64];
  auto fmt = [&num](double v) {
    if (v == 0.0) v = 0.0;  // no "-0"
    std::snprintf(num, sizeof num, "%.12e", v);
    return std::string(num);
  };
  for (const Component& c : s.components()) {
    std::string line;
    for (std::size_t k = s.qubit_count(); k-- > 0;) line += ((c.computer >> k) & 1U) ? '1' : '0';
    line += ' ';
    for (std::size_t k = s.env_count(); k-- > 0;) line += ((c.env >> k) & 1U) ? '1' : '0';
    if (s.env_count() == 0) line += '-';
    line += ' ' + fmt(c.amplitude.real()) + ' ' + fmt(c.amplitude.imag());
    lines.push_back(std::move(line));
  }
  std::sort(lines.begin(), lines.end());
  for (const auto& l : lines) out << l << '\n';
}

}  // namespace shorsim
