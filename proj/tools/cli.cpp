#include "cli.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "shorsim/arithmetic.hpp"
#include "shorsim/verify.hpp"

namespace shorsim::cli {

namespace {

constexpr int kUsageExit = 2;

std::string format_probability(double p) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", p);
  return buf;
}

std::uint64_t parse_u64(const std::string& text, const char* what) {
  std::uint64_t v = 0;
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) {
    throw UsageError(std::string(what) + ": not an integer: " + text, kUsageExit);
  }
  return v;
}

// CLI11 consumes arguments from the back.
std::vector<std::string> reversed(const std::vector<std::string>& args) {
  return {args.rbegin(), args.rend()};
}

[[noreturn]] void rethrow_parse_error(const CLI::App& app, const CLI::ParseError& e) {
  std::ostringstream out, err;
  const int code = app.exit(e, out, err);
  throw UsageError(out.str() + err.str(), code == 0 ? 0 : kUsageExit);
}

void check_slice(const FinalDistributions& d, std::optional<std::uint64_t> r2_slice) {
  if (r2_slice && !d.ned.empty() && *r2_slice >= d.ned.r2_count()) {
    throw std::out_of_range("r2 slice " + std::to_string(*r2_slice) + " outside [0, " +
                            std::to_string(d.ned.r2_count()) + ")");
  }
}

std::ofstream open_or_throw(const std::filesystem::path& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

void write_slice(const std::filesystem::path& path, const Distribution& d, std::uint64_t r2) {
  std::ofstream f = open_or_throw(path);
  for (std::uint64_t r1 = 0; r1 < d.q(); ++r1) f << r1 << ' ' << format_probability(d.at(r1, r2)) << '\n';
  if (!f) throw std::runtime_error("write failed: " + path.string());
}

int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const RunConfig cfg = parse_config(args);
  const FactorReport report = run_experiment(cfg.experiment);

  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  if (report.classical_shortcut) {
    err << "gcd(" << report.x << ", " << report.n << ") > 1, factors:";
    for (auto f : report.factors) err << ' ' << f;
    err << '\n';
  } else {
    err << "order: " << (report.order ? std::to_string(*report.order) : "none") << ", factors:";
    for (auto f : report.factors) err << ' ' << f;
    err << ", successful repetitions " << report.stats.successes << '/' << report.stats.repetitions
        << '\n';
  }

  const FinalDistributions measured = report.mean_distributions().value_or(FinalDistributions{});
  if (cfg.format == OutputFormat::Gnuplot) {
    if (report.classical_shortcut) throw std::runtime_error("no distribution to plot");
    const Distribution exact = verify::probc2_oracle(report.n, report.x, report.q);
    const std::filesystem::path dir = cfg.out.empty() ? "shorsim_plot" : cfg.out;
    emit_gnuplot(dir, measured, exact, cfg.r2_slice);
  } else {
    std::ofstream file;
    if (!cfg.out.empty()) file = open_or_throw(cfg.out);
    std::ostream& sink = cfg.out.empty() ? out : file;
    if (cfg.format == OutputFormat::Csv) {
      emit_csv(sink, measured, cfg.r2_slice);
    } else {
      emit_json(sink, measured, cfg.r2_slice);
    }
    if (!sink) throw std::runtime_error("write failed");
  }

  if (!cfg.report.empty()) {
    std::ofstream f = open_or_throw(cfg.report);
    f << to_json(report) << '\n';
  }
  return 0;
}

int build_command(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Build the modular exponentiation network", "shorsim build"};
  std::uint64_t n = 15, x = 7, q = 130;
  std::string path;
  bool report = false;
  app.add_option("--n", n, "Number to factor");
  app.add_option("--x", x, "Base coprime to n");
  app.add_option("--q", q, "Transform size (sets the exponent register width)");
  app.add_option("--out", path, "Network text file (default stdout)");
  app.add_flag("--report", report, "Print qubit and gate counts as JSON instead");
  auto rev = reversed(args);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    rethrow_parse_error(app, e);
  }

  const auto params = ArithParams::make(n, x, q);
  const auto layout = layout_for(params);
  const Network net = build_modexp(params, layout);
  std::ofstream file;
  if (!path.empty()) file = open_or_throw(path);
  std::ostream& sink = path.empty() ? out : file;
  if (report) {
    const ResourceReport r = resource_report(net, params.bits);
    nlohmann::json doc = {{"qubits", r.qubits},
                          {"gates_exact", r.elementary_gates},
                          {"gates_formula", r.formula_gates}};
    sink << doc.dump(2) << '\n';
  } else {
    write_network(sink, net);
  }
  return sink ? 0 : 1;
}

int verify_command(const std::vector<std::string>& args, std::ostream& out) {
  CLI::App app{"Exhaustively check every arithmetic block and the probability oracle",
               "shorsim verify"};
  std::uint64_t n = 15, q = 130;
  std::vector<std::uint64_t> bases;
  app.add_option("--n", n, "Modulus")->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 12));
  app.add_option("--q", q, "Transform size")->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 16));
  app.add_option("--x", bases, "Bases (default: every unit modulo n)");
  auto rev = reversed(args);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    rethrow_parse_error(app, e);
  }
  if (bases.empty()) {
    for (std::uint64_t x = 2; x < n; ++x) {
      if (gcd(x, n) == 1) bases.push_back(x);
    }
  }

  bool ok = true;
  std::size_t cases = 0;
  for (const verify::CheckReport& r : verify::check_all(n, bases, q)) {
    cases += r.cases;
    if (r.passed()) continue;
    ok = false;
    out << "FAIL " << r.name << ": " << r.failures << '/' << r.cases << " cases\n";
    for (const auto& c : r.examples) {
      out << "  input " << c.input << " expected " << c.expected << " got " << c.actual
          << (c.ancilla_dirty ? " (ancilla dirty)" : "") << '\n';
    }
  }
  out << (ok ? "PASS" : "FAIL") << " arithmetic: " << cases << " cases\n";
  for (std::uint64_t x : bases) {
    try {
      verify::probc2_oracle(n, x, q);
    } catch (const std::logic_error& e) {
      ok = false;
      out << "FAIL probability oracle x=" << x << ": " << e.what() << '\n';
    }
  }
  if (ok) out << "PASS probability oracle: " << bases.size() << " bases\n";
  return ok ? 0 : 1;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig cfg;
  cfg.experiment.n = 15;
  cfg.experiment.x = 7;
  cfg.experiment.q = 130;
  cfg.experiment.events = 10;
  cfg.experiment.law = ExponentialClock{2.5};
  cfg.experiment.watchdog = Watchdog::On;
  return cfg;
}

RunConfig parse_config(const std::vector<std::string>& args) {
  RunConfig cfg = default_run_config();
  ExperimentConfig& e = cfg.experiment;

  CLI::App app{"Simulate order finding under decay and print the measured distribution",
               "shorsim run"};
  std::string x_text = "7", watchdog = "on", format = "csv", sampling = "ned";
  double p1 = 0.5, gamma = 2.5;
  app.set_config("--config", "", "Read option defaults from a TOML file");
  app.add_option("--n", e.n, "Number to factor")->capture_default_str()
      ->check(CLI::Range(std::uint64_t{3}, std::uint64_t{1} << 20));
  app.add_option("--x", x_text, "Base coprime to n, or 'random'")->capture_default_str();
  app.add_option("--q", e.q, "Fourier transform size")->capture_default_str()
      ->check(CLI::Range(std::uint64_t{2}, std::uint64_t{1} << 24));
  app.add_option("--events", e.events, "Decay events per run")->capture_default_str();
  auto* p1_opt = app.add_option("--p1", p1, "Static persistence probability")
                     ->check(CLI::Range(0.0, 1.0));
  auto* gamma_opt = app.add_option("--gamma", gamma, "Exponential decay rate")
                        ->capture_default_str()->check(CLI::NonNegativeNumber);
  p1_opt->excludes(gamma_opt);
  app.add_option("--watchdog", watchdog, "Decay-clock resets at checkpoints")
      ->capture_default_str()->check(CLI::IsMember({"on", "off", "strict"}));
  app.add_option("--seed", e.seed, "Random seed")->capture_default_str();
  app.add_option("--reps", e.repetitions, "Repetitions")->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--samples", e.samples, "Measurements per repetition")->capture_default_str();
  app.add_option("--sample-from", sampling, "Distribution sampled for order finding")
      ->capture_default_str()->check(CLI::IsMember({"ned", "ed"}));
  app.add_option("--r2-slice", cfg.r2_slice, "Only emit this second-register value");
  app.add_option("--out", cfg.out, "Output file (gnuplot: directory)");
  app.add_option("--report", cfg.report, "Write the factoring report as JSON");
  app.add_option("--format", format, "Output format")->capture_default_str()
      ->check(CLI::IsMember({"csv", "json", "gnuplot"}));

  auto rev = reversed(args);
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& err) {
    rethrow_parse_error(app, err);
  }

  if (x_text == "random") {
    e.x.reset();
  } else {
    e.x = parse_u64(x_text, "--x");
    if (*e.x <= 1 || *e.x >= e.n) throw UsageError("--x must satisfy 1 < x < n", kUsageExit);
  }
  if (p1_opt->count() > 0) {
    e.law = StaticLaw{p1};
  } else {
    e.law = ExponentialClock{gamma};
  }
  e.watchdog = watchdog == "off" ? Watchdog::Off : watchdog == "strict" ? Watchdog::Strict : Watchdog::On;
  e.sampling = sampling == "ed" ? SamplingMode::ErrorDetection : SamplingMode::NoErrorDetection;
  cfg.format = format == "json"      ? OutputFormat::Json
               : format == "gnuplot" ? OutputFormat::Gnuplot
                                     : OutputFormat::Csv;
  if (cfg.r2_slice && *cfg.r2_slice >= (std::uint64_t{1} << bits_for(e.n))) {
    throw UsageError("--r2-slice must be below 2^L", kUsageExit);
  }
  return cfg;
}

void emit_csv(std::ostream& out, const FinalDistributions& d, std::optional<std::uint64_t> r2_slice) {
  check_slice(d, r2_slice);
  out << "r1,r2,p_ned,p_ed\n";
  if (d.ned.empty()) return;
  for (std::uint64_t r1 = 0; r1 < d.ned.q(); ++r1) {
    for (std::uint64_t r2 = 0; r2 < d.ned.r2_count(); ++r2) {
      if (r2_slice && r2 != *r2_slice) continue;
      out << r1 << ',' << r2 << ',' << format_probability(d.ned.at(r1, r2)) << ','
          << format_probability(d.ed.at(r1, r2)) << '\n';
    }
  }
}

void emit_json(std::ostream& out, const FinalDistributions& d, std::optional<std::uint64_t> r2_slice) {
  check_slice(d, r2_slice);
  auto rounded = [](double p) { return std::strtod(format_probability(p).c_str(), nullptr); };
  nlohmann::json rows = nlohmann::json::array();
  if (!d.ned.empty()) {
    for (std::uint64_t r1 = 0; r1 < d.ned.q(); ++r1) {
      for (std::uint64_t r2 = 0; r2 < d.ned.r2_count(); ++r2) {
        if (r2_slice && r2 != *r2_slice) continue;
        rows.push_back({{"r1", r1},
                        {"r2", r2},
                        {"p_ned", rounded(d.ned.at(r1, r2))},
                        {"p_ed", rounded(d.ed.at(r1, r2))}});
      }
    }
  }
  out << rows.dump(1) << '\n';
}

void emit_gnuplot(const std::filesystem::path& dir, const FinalDistributions& d,
                  const Distribution& exact, std::optional<std::uint64_t> r2_slice) {
  check_slice(d, r2_slice);
  std::filesystem::create_directories(dir);
  std::vector<std::uint64_t> slices;
  if (r2_slice) {
    slices.push_back(*r2_slice);
  } else {
    for (std::uint64_t r2 = 0; r2 < exact.r2_count(); ++r2) {
      double w = 0.0;
      for (std::uint64_t r1 = 0; r1 < exact.q(); ++r1) w += exact.at(r1, r2);
      if (w > 0.0) slices.push_back(r2);
    }
  }

  const std::pair<const char*, const Distribution*> series[] = {
      {"exact", &exact}, {"ned", &d.ned}, {"ed", &d.ed}};
  std::ofstream gp = open_or_throw(dir / "plot.gp");
  gp << "set terminal pngcairo size 1500," << 400 * std::max<std::size_t>(1, slices.size()) << '\n'
     << "set output 'distribution.png'\n"
     << "set xlabel 'r1'\nset ylabel 'P'\n"
     << "set multiplot layout " << slices.size() << ",3\n";
  for (std::uint64_t r2 : slices) {
    for (const auto& [kind, dist] : series) {
      const std::string file = std::string(kind) + "_r2_" + std::to_string(r2) + ".dat";
      if (!dist->empty()) write_slice(dir / file, *dist, r2);
      gp << "set title '" << kind << ", r2 = " << r2 << "'\n"
         << "plot '" << file << "' using 1:2 with impulses notitle\n";
    }
  }
  gp << "unset multiplot\n";
  if (!gp) throw std::runtime_error("write failed: " + (dir / "plot.gp").string());
}

std::vector<CsvRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "r1,r2,p_ned,p_ed") {
    throw std::runtime_error("missing csv header");
  }
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string r1, r2, ned, ed;
    if (!std::getline(fields, r1, ',') || !std::getline(fields, r2, ',') ||
        !std::getline(fields, ned, ',') || !std::getline(fields, ed)) {
      throw std::runtime_error("malformed csv row: " + line);
    }
    rows.push_back({std::stoull(r1), std::stoull(r2), std::stod(ned), std::stod(ed)});
  }
  return rows;
}

int main_entry(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args(argv + std::min(argc, 1), argv + argc);
  std::string command = "run";
  if (!args.empty() && (args[0] == "run" || args[0] == "build" || args[0] == "verify")) {
    command = args[0];
    args.erase(args.begin());
  }
  try {
    if (command == "build") return build_command(args, out);
    if (command == "verify") return verify_command(args, out);
    return run_command(args, out, err);
  } catch (const UsageError& e) {
    (e.exit_code() == 0 ? out : err) << e.what();
    if (e.exit_code() == 0 && command == "run") {
      out << "\nOther commands: shorsim build --help, shorsim verify --help\n";
    }
    return e.exit_code();
  } catch (const ArithmeticError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageExit;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

}  // namespace shorsim::cli
