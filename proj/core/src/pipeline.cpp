#include "shorsim/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <set>

#include "json.hpp"
#include "shorsim/arithmetic.hpp"
#include "shorsim/verify.hpp"

namespace shorsim {

namespace {

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

// Inverse-CDF sampling over a flattened table; deterministic across platforms
// for a given engine state.
class TableSampler {
 public:
  explicit TableSampler(std::span<const double> weights) : cdf_(weights.size()) {
    double acc = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) cdf_[i] = acc += weights[i];
  }

  double total() const { return cdf_.empty() ? 0.0 : cdf_.back(); }

  std::size_t draw(std::mt19937_64& rng) const {
    const double u = std::generate_canonical<double, 53>(rng) * total();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    // Skip zero-weight cells that share the CDF value.
    return static_cast<std::size_t>(it - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

void merge_into(std::vector<std::uint64_t>& into, const std::vector<std::uint64_t>& from) {
  into.insert(into.end(), from.begin(), from.end());
  std::sort(into.begin(), into.end());
  into.erase(std::unique(into.begin(), into.end()), into.end());
}

}  // namespace

std::vector<double> ideal_distribution(std::uint64_t n, std::uint64_t x, std::uint64_t q,
                                       std::uint64_t r2) {
  const Distribution table = verify::probc2_table(n, x, q);
  if (r2 >= table.r2_count()) return {};
  std::vector<double> slice = table.slice(r2);
  if (std::all_of(slice.begin(), slice.end(), [](double v) { return v == 0.0; })) return {};
  return slice;
}

std::vector<Convergent> convergents(std::uint64_t c, std::uint64_t q) {
  if (q == 0) throw std::invalid_argument("denominator must be positive");
  std::vector<Convergent> out;
  std::uint64_t h1 = 1, h2 = 0, k1 = 0, k2 = 1;
  std::uint64_t num = c, den = q;
  while (den != 0) {
    const std::uint64_t a = num / den;
    const std::uint64_t h = a * h1 + h2;
    const std::uint64_t k = a * k1 + k2;
    out.push_back({h, k});
    h2 = h1;
    h1 = h;
    k2 = k1;
    k1 = k;
    num -= a * den;
    std::swap(num, den);
  }
  return out;
}

OrderAttempt continued_fraction_order(std::uint64_t c, std::uint64_t q, std::uint64_t n,
                                      std::uint64_t x) {
  if (c >= q) throw std::invalid_argument("measured value must be below q");
  OrderAttempt attempt;
  attempt.c = c;
  if (c == 0) return attempt;
  for (const Convergent& cv : convergents(c, q)) {
    if (cv.numerator == 0) continue;
    if (cv.denominator >= n) break;
    attempt.tried.push_back(cv);
    for (std::uint64_t r = cv.denominator; r < n; r += cv.denominator) {
      if (powmod(x, r, n) == 1) {
        if (!attempt.order || r < *attempt.order) attempt.order = r;
        break;
      }
    }
  }
  return attempt;
}

std::string_view to_string(FactorFailure f) {
  switch (f) {
    case FactorFailure::OddOrder: return "r odd";
    case FactorFailure::MinusOneRoot: return "x^(r/2) = -1 mod N";
    case FactorFailure::TrivialDivisors: return "only trivial divisors";
  }
  return "unknown";
}

FactorOutcome extract_factors(std::uint64_t x, std::uint64_t r, std::uint64_t n) {
  if (n < 2 || r == 0 || powmod(x, r, n) != 1) {
    throw InvalidOrder(std::to_string(x) + "^" + std::to_string(r) + " is not 1 mod " +
                       std::to_string(n));
  }
  FactorOutcome out;
  if (r % 2 != 0) {
    out.failure = FactorFailure::OddOrder;
    return out;
  }
  const std::uint64_t half = powmod(x, r / 2, n);
  if (half == n - 1) {
    out.failure = FactorFailure::MinusOneRoot;
    return out;
  }
  for (std::uint64_t f : {gcd((half + n - 1) % n, n), gcd((half + 1) % n, n)}) {
    if (f > 1 && f < n) out.factors.push_back(f);
  }
  std::sort(out.factors.begin(), out.factors.end());
  out.factors.erase(std::unique(out.factors.begin(), out.factors.end()), out.factors.end());
  if (out.factors.empty()) out.failure = FactorFailure::TrivialDivisors;
  return out;
}

std::uint64_t repetition_seed(std::uint64_t seed, std::size_t rep) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (static_cast<std::uint64_t>(rep) + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

std::optional<FinalDistributions> FactorReport::mean_distributions() const {
  std::optional<FinalDistributions> mean;
  std::size_t count = 0;
  for (const auto& rep : repetitions) {
    if (!rep.distributions) continue;
    if (!mean) {
      mean = *rep.distributions;
    } else {
      mean->ned += rep.distributions->ned;
      mean->ed += rep.distributions->ed;
    }
    ++count;
  }
  if (mean) {
    mean->ned *= 1.0 / static_cast<double>(count);
    mean->ed *= 1.0 / static_cast<double>(count);
  }
  return mean;
}

FactorReport run_experiment(const ExperimentConfig& cfg) {
  FactorReport report;
  report.n = cfg.n;
  report.q = cfg.q;
  if (cfg.n < 3) throw ArithmeticError("N must be at least 3");
  if (cfg.n % 2 == 0) report.warnings.push_back("N is even; 2 divides it");
  if (is_prime(cfg.n)) report.warnings.push_back("N is prime; no nontrivial factors exist");

  std::mt19937_64 master(cfg.seed);
  const std::uint64_t x =
      cfg.x ? *cfg.x : std::uniform_int_distribution<std::uint64_t>(2, cfg.n - 1)(master);
  report.x = x;
  if (x <= 1 || x >= cfg.n) throw ArithmeticError("x must satisfy 1 < x < N");

  if (const std::uint64_t g = gcd(x, cfg.n); g != 1) {
    report.classical_shortcut = true;
    report.factors = {g};
    if (cfg.n / g != g) merge_into(report.factors, {cfg.n / g});
    report.stats.success_rate = 1.0;
    return report;
  }

  const auto params = ArithParams::make(cfg.n, x, cfg.q);
  const auto layout = layout_for(params);
  const Network net = build_modexp(params, layout);
  const RunOptions options{cfg.watchdog, cfg.polarity};

  std::optional<FinalDistributions> noiseless;
  std::map<std::uint64_t, std::size_t> order_votes;
  double discarded = 0.0;

  for (std::size_t rep = 0; rep < cfg.repetitions; ++rep) {
    RepetitionResult result;
    result.seed = repetition_seed(cfg.seed, rep);
    result.schedule = sample_schedule(cfg.events, layout.qubit_count(), result.seed, cfg.law);

    FinalDistributions dist;
    if (cfg.events == 0 && noiseless) {
      dist = *noiseless;
    } else {
      WatchdogClocks clocks(layout.qubit_count());
      RunTrace trace;
      SparseState s = run(init_state(cfg.q, layout), net, result.schedule, options, clocks, &trace);
      discarded += trace.discarded_probability;
      dist = transform_and_measure(s, cfg.q, layout);
      if (cfg.events == 0) noiseless = dist;
    }

    const Distribution& source =
        cfg.sampling == SamplingMode::NoErrorDetection ? dist.ned : dist.ed;
    const TableSampler sampler(source.values());
    std::mt19937_64 rng(result.seed ^ 0x5851f42d4c957f2dULL);
    if (sampler.total() <= 0.0) {
      report.warnings.push_back("repetition " + std::to_string(rep) +
                                ": no probability left to sample from");
    } else {
      for (std::size_t k = 0; k < cfg.samples; ++k) {
        const std::size_t cell = sampler.draw(rng);
        SampleRecord rec;
        rec.c = cell / source.r2_count();
        rec.r2 = cell % source.r2_count();
        OrderAttempt attempt = continued_fraction_order(rec.c, cfg.q, cfg.n, x);
        rec.convergents = std::move(attempt.tried);
        rec.verified_r = attempt.order;
        if (rec.verified_r) {
          ++report.stats.informative_samples;
          if (!result.order || *rec.verified_r < *result.order) result.order = rec.verified_r;
          const FactorOutcome outcome = extract_factors(x, *rec.verified_r, cfg.n);
          rec.factors = outcome.factors;
          merge_into(result.factors, outcome.factors);
        }
        result.samples.push_back(std::move(rec));
        ++report.stats.samples;
      }
    }

    if (result.order) ++order_votes[*result.order];
    if (result.success()) ++report.stats.successes;
    merge_into(report.factors, result.factors);
    if (cfg.keep_distributions) result.distributions = std::move(dist);
    report.repetitions.push_back(std::move(result));
  }

  report.stats.repetitions = cfg.repetitions;
  report.stats.success_rate =
      cfg.repetitions == 0 ? 0.0
                           : static_cast<double>(report.stats.successes) / static_cast<double>(cfg.repetitions);
  report.stats.mean_discarded = cfg.repetitions == 0 ? 0.0 : discarded / static_cast<double>(cfg.repetitions);
  std::size_t best = 0;
  for (const auto& [r, votes] : order_votes) {
    if (votes > best) {
      best = votes;
      report.order = r;
    }
  }
  return report;
}

std::string to_json(const FactorReport& report) {
  using nlohmann::json;
  auto opt = [](const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); };
  json samples = json::array();
  for (std::size_t rep = 0; rep < report.repetitions.size(); ++rep) {
    for (const SampleRecord& s : report.repetitions[rep].samples) {
      json conv = json::array();
      for (const Convergent& c : s.convergents) conv.push_back({c.numerator, c.denominator});
      samples.push_back({{"repetition", rep},
                         {"c", s.c},
                         {"r2", s.r2},
                         {"convergents", conv},
                         {"verified_r", opt(s.verified_r)},
                         {"factors", s.factors}});
    }
  }
  json doc = {
      {"n", report.n},
      {"x", report.x},
      {"q", report.q},
      {"classical_shortcut", report.classical_shortcut},
      {"order", opt(report.order)},
      {"factors", report.factors},
      {"warnings", report.warnings},
      {"samples", samples},
      {"stats",
       {{"repetitions", report.stats.repetitions},
        {"successes", report.stats.successes},
        {"samples", report.stats.samples},
        {"informative_samples", report.stats.informative_samples},
        {"success_rate", report.stats.success_rate},
        {"mean_discarded", report.stats.mean_discarded}}},
  };
  return doc.dump(2);
}

double predicted_success(std::uint64_t n, std::uint64_t x, std::uint64_t q, std::size_t samples) {
  const Distribution table = verify::probc2_table(n, x, q);
  double per_sample = 0.0;
  for (std::uint64_t c = 0; c < q; ++c) {
    const OrderAttempt a = continued_fraction_order(c, q, n, x);
    if (!a.order || !extract_factors(x, *a.order, n).ok()) continue;
    for (std::size_t r2 = 0; r2 < table.r2_count(); ++r2) per_sample += table.at(c, r2);
  }
  return 1.0 - std::pow(1.0 - std::min(1.0, per_sample), static_cast<double>(samples));
}

}  // namespace shorsim
