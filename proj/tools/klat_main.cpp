// Command-line front end: kernel algebra, measure lattice operations,
// operator diagnostics, oracle verification, the sequence-space demo, and
// Doob stability analysis over JSON/CSV files.

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "klat/errors.hpp"
#include "klat/io.hpp"
#include "klat/kernel.hpp"
#include "klat/measure.hpp"
#include "klat/measure_operator.hpp"
#include "klat/semigroup.hpp"
#include "klat/state_space.hpp"

namespace {

using klat::io::json;

struct RunConfig {
  std::string output;  // empty: stdout
  bool csv = false;    // emit single measures as "state,weight" CSV
  std::uint64_t seed = 0;
  double tau_supp = klat::kDefaultSupportTol;
  double tau_cont = klat::kDefaultContinuityTol;
  int n_oracle = klat::kDefaultOracleCap;
  double tol = klat::kDefaultConvergenceTol;
};

void emit(const RunConfig& config, const std::string& text) {
  if (config.output.empty()) {
    std::cout << text;
    if (text.empty() || text.back() != '\n') std::cout << '\n';
  } else {
    klat::io::write_text_file(config.output,
                              text.empty() || text.back() == '\n' ? text : text + "\n");
  }
}

void emit_json(const RunConfig& config, const json& j) { emit(config, j.dump(2) + "\n"); }

void emit_measure(const RunConfig& config, const klat::SignedMeasure& mu) {
  if (config.csv) {
    emit(config, klat::io::measure_to_csv(mu));
  } else {
    emit_json(config, klat::io::measure_to_json(mu));
  }
}

std::string format_scalar(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

klat::TransitionKernel load_kernel(const std::string& path) {
  return klat::io::kernel_from_json(klat::io::load_json_file(path));
}

klat::SignedMeasure load_measure(const std::string& path) {
  return klat::io::measure_from_json(klat::io::load_json_file(path));
}

int cmd_kernel_unary(const RunConfig& config, const std::string& path,
                     const std::string& op) {
  const klat::TransitionKernel k = load_kernel(path);
  if (op == "bound") {
    emit(config, format_scalar(klat::bound(k)));
    return 0;
  }
  const klat::TransitionKernel out =
      op == "modulus" ? klat::modulus(k) : klat::positive_part(k);
  emit_json(config, klat::io::kernel_to_json(out));
  return 0;
}

int cmd_kernel_binary(const RunConfig& config, const std::string& a_path,
                      const std::string& b_path, const std::string& op) {
  const klat::TransitionKernel a = load_kernel(a_path);
  const klat::TransitionKernel b = load_kernel(b_path);
  klat::TransitionKernel out = op == "meet"   ? klat::kernel_meet(a, b)
                               : op == "join" ? klat::kernel_join(a, b)
                                              : klat::compose(a, b);
  emit_json(config, klat::io::kernel_to_json(out));
  return 0;
}

int cmd_measure_jordan(const RunConfig& config, const std::string& path) {
  const klat::JordanDecomposition jd =
      klat::jordan_decomposition(load_measure(path));
  json j;
  j["positive"] = klat::io::measure_to_json(jd.positive);
  j["negative"] = klat::io::measure_to_json(jd.negative);
  emit_json(config, j);
  return 0;
}

int cmd_measure_tv(const RunConfig& config, const std::string& path) {
  emit(config, format_scalar(klat::total_variation(load_measure(path))));
  return 0;
}

int cmd_measure_lattice(const RunConfig& config, const std::string& a_path,
                        const std::string& b_path, bool sup) {
  const klat::SignedMeasure a = load_measure(a_path);
  const klat::SignedMeasure b = load_measure(b_path);
  emit_measure(config, sup ? klat::measure_sup(a, b) : klat::measure_inf(a, b));
  return 0;
}

int cmd_operator_apply(const RunConfig& config, const std::string& k_path,
                       const std::string& mu_path) {
  const klat::MeasureOperator op(load_kernel(k_path));
  emit_measure(config, op.apply(load_measure(mu_path)));
  return 0;
}

int cmd_operator_adjoint(const RunConfig& config, const std::string& k_path,
                         const std::string& f_path) {
  const klat::MeasureOperator op(load_kernel(k_path));
  const klat::BoundedFunction f =
      klat::io::function_from_json(klat::io::load_json_file(f_path));
  emit_json(config, klat::io::function_to_json(op.adjoint(f)));
  return 0;
}

int cmd_operator_pospart(const RunConfig& config, const std::string& k_path,
                         const std::string& mu_path, bool use_oracle) {
  const klat::TransitionKernel k = load_kernel(k_path);
  const klat::SignedMeasure mu = load_measure(mu_path);
  const klat::SignedMeasure out =
      use_oracle
          ? klat::positive_part_oracle(klat::MeasureOperator(k), mu, config.n_oracle)
          : klat::MeasureOperator(klat::positive_part(k)).apply(mu);
  emit_measure(config, out);
  return 0;
}

int cmd_operator_weak_continuity(const RunConfig& config, const std::string& k_path,
                                 const std::vector<std::string>& test_paths) {
  const klat::TransitionKernel k = load_kernel(k_path);
  const klat::SpacePtr space = k.space();
  const klat::BlackBoxOperator boxed(
      space,
      [op = klat::MeasureOperator(k)](const klat::SignedMeasure& mu) {
        return op.apply(mu);
      },
      "kernel_operator");
  std::vector<klat::SignedMeasure> tests;
  for (const std::string& path : test_paths) tests.push_back(load_measure(path));
  if (tests.empty()) {
    for (int x = 0; x < space->size(); ++x) tests.push_back(klat::dirac(space, x));
    tests.push_back(klat::SignedMeasure(
        space, std::vector<double>(space->size(), 1.0 / space->size())));
  }
  const klat::WeakContinuityReport report = klat::weak_continuity_check(boxed, tests);
  emit_json(config, klat::io::weak_continuity_to_json(report));
  return report.weakly_continuous ? 0 : static_cast<int>(klat::ExitCode::tolerance_missed);
}

int cmd_verify_pospart(const RunConfig& config, const std::string& k_path, int trials) {
  const klat::TransitionKernel k = load_kernel(k_path);
  const int n = k.size();
  if (n > config.n_oracle) {
    throw klat::CarrierTooLargeError("verify pospart: carrier of " + std::to_string(n) +
                                     " states exceeds the oracle cap of " +
                                     std::to_string(config.n_oracle));
  }
  const klat::MeasureOperator op(k);
  const klat::MeasureOperator pos(klat::positive_part(k));
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double max_dev = 0.0;
  for (int trial = 0; trial < trials; ++trial) {
    std::vector<double> w(n);
    for (double& v : w) v = unit(rng);
    const klat::SignedMeasure mu(k.space(), std::move(w));
    const klat::SignedMeasure via_oracle =
        klat::positive_part_oracle(op, mu, config.n_oracle);
    const klat::SignedMeasure via_kernel = pos.apply(mu);
    max_dev = std::max(max_dev, klat::tv_distance(via_oracle, via_kernel));
  }
  constexpr double kTol = 1e-12;
  json j;
  j["kernel"] = k_path;
  j["carrier"] = n;
  j["trials"] = trials;
  j["seed"] = config.seed;
  j["max_deviation"] = max_dev;
  j["tolerance"] = kTol;
  j["pass"] = max_dev <= kTol;
  emit_json(config, j);
  return max_dev <= kTol ? 0 : static_cast<int>(klat::ExitCode::tolerance_missed);
}

int cmd_demo_sequence_example(const RunConfig& config, int N) {
  if (N < 8) throw klat::PreconditionError("demo sequence-example: N must be >= 8");
  const klat::SpacePtr space = klat::make_sequence_space(N);
  const klat::TransitionKernel k = klat::sequence_example_kernel(space);
  const klat::TransitionKernel u = klat::modulus(k);
  const klat::MeasureOperator t_op(k);
  const klat::MeasureOperator u_op(u);
  const klat::BoundedFunction one = klat::BoundedFunction::constant(space, 1.0);
  const klat::BoundedFunction t_star_one = t_op.adjoint(one);
  const klat::BoundedFunction u_star_one = u_op.adjoint(one);
  const klat::CbInvarianceReport t_report = klat::cb_invariance_check(t_op, config.tau_cont);
  const klat::CbInvarianceReport u_report = klat::cb_invariance_check(u_op, config.tau_cont);

  double t_max_abs = 0.0;
  double u_on_positive_min = u_star_one(space->id_of_sequence_index(1));
  double u_on_positive_max = u_on_positive_min;
  double u_elsewhere_max = std::abs(u_star_one(space->infinity_id()));
  for (int m = 1; m <= N; ++m) {
    const double up = u_star_one(space->id_of_sequence_index(m));
    u_on_positive_min = std::min(u_on_positive_min, up);
    u_on_positive_max = std::max(u_on_positive_max, up);
    u_elsewhere_max =
        std::max(u_elsewhere_max, std::abs(u_star_one(space->id_of_sequence_index(-m))));
  }
  for (int i = 0; i < space->size(); ++i) t_max_abs = std::max(t_max_abs, std::abs(t_star_one(i)));

  json j;
  j["N"] = N;
  j["kernel"] = klat::io::kernel_to_json(k);
  j["modulus"] = klat::io::kernel_to_json(u);
  j["T_star_one"] = t_star_one.values();
  j["U_star_one"] = u_star_one.values();
  j["cb_invariance"] = json{{"T", klat::io::cb_invariance_to_json(t_report)},
                            {"U", klat::io::cb_invariance_to_json(u_report)}};
  j["summary"] = json{{"bound", klat::bound(k)},
                      {"T_star_one_max_abs", t_max_abs},
                      {"U_star_one_on_positive_min", u_on_positive_min},
                      {"U_star_one_on_positive_max", u_on_positive_max},
                      {"U_star_one_elsewhere_max", u_elsewhere_max},
                      {"T_invariant", t_report.invariant},
                      {"U_invariant", u_report.invariant}};
  emit_json(config, j);
  return 0;
}

std::filesystem::path trace_path_for_start(const std::filesystem::path& base,
                                           const std::string& tag) {
  if (tag.empty()) return base;
  std::filesystem::path p = base;
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  p.replace_filename(stem + "." + tag + ext);
  return p;
}

int cmd_doob(const RunConfig& config, const std::string& model_path, double t0,
             bool run_traces, const std::string& nu_path, double t_max,
             const std::string& trace_base) {
  const klat::SemigroupModel model =
      klat::io::model_from_json(klat::io::load_json_file(model_path));
  const klat::DoobReport report =
      klat::doob_hypothesis_report(model, t0, config.tau_supp);
  json j = klat::io::doob_report_to_json(report);

  if (!run_traces) {
    emit_json(config, j);
    return report.all_pass ? 0 : static_cast<int>(klat::ExitCode::hypothesis_failed);
  }

  if (!report.all_pass) {
    emit_json(config, j);  // report still written on hypothesis failure
    return static_cast<int>(klat::ExitCode::hypothesis_failed);
  }

  std::vector<std::pair<std::string, klat::SignedMeasure>> starts;
  if (!nu_path.empty()) {
    starts.emplace_back("", load_measure(nu_path));
  } else {
    for (int x = 0; x < model.size(); ++x) {
      starts.emplace_back("delta_" + std::to_string(x), klat::dirac(model.space(), x));
    }
  }

  bool all_reached = true;
  json traces = json::array();
  for (const auto& [tag, nu] : starts) {
    const klat::ConvergenceTrace trace =
        klat::doob_convergence(model, nu, t_max, config.tol);
    const std::filesystem::path path = trace_path_for_start(trace_base, tag);
    klat::io::write_text_file(path, klat::io::trace_to_csv(trace));
    json entry = klat::io::trace_to_json(trace);
    entry.erase("points");
    entry["start"] = tag.empty() ? std::string("nu") : tag;
    entry["csv"] = path.string();
    traces.push_back(std::move(entry));
    all_reached = all_reached && trace.reached_tol;
  }
  j["traces"] = std::move(traces);
  j["tol"] = config.tol;
  j["t_max"] = t_max;
  emit_json(config, j);
  return all_reached ? 0 : static_cast<int>(klat::ExitCode::tolerance_missed);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Transition-kernel lattice toolkit: kernel algebra, "
               "Jordan/Hahn decompositions, weak-continuity diagnostics, and "
               "Doob stability analysis on finite carriers"};
  app.require_subcommand(1);

  RunConfig config;
  app.add_option("-o,--output", config.output, "Write the result here instead of stdout");
  app.add_flag("--csv", config.csv, "Emit single measures as state,weight CSV");
  app.add_option("--seed", config.seed, "Seed for randomized sweeps")
      ->envname("KERNEL_LATTICE_SEED");
  app.add_option("--tau-supp", config.tau_supp, "Support threshold")
      ->check(CLI::PositiveNumber);
  app.add_option("--tau-cont", config.tau_cont, "Continuity tolerance")
      ->check(CLI::PositiveNumber);
  app.add_option("--n-oracle", config.n_oracle, "Carrier cap for brute-force oracles")
      ->check(CLI::PositiveNumber);
  app.add_option("--tol", config.tol, "Convergence tolerance")
      ->check(CLI::PositiveNumber);

  std::function<int()> action;

  // kernel ------------------------------------------------------------
  CLI::App* kernel = app.add_subcommand("kernel", "Kernel lattice algebra");
  kernel->require_subcommand(1);
  static std::string in_a, in_b;
  for (const std::string op : {"modulus", "pospart", "bound"}) {
    CLI::App* sub = kernel->add_subcommand(op)->callback(
        [&, op] { action = [&, op] { return cmd_kernel_unary(config, in_a, op); }; });
    sub->add_option("kernel", in_a, "Kernel JSON file")->required();
  }
  for (const std::string op : {"meet", "join", "compose"}) {
    CLI::App* sub = kernel->add_subcommand(op)->callback([&, op] {
      action = [&, op] { return cmd_kernel_binary(config, in_a, in_b, op); };
    });
    sub->add_option("first", in_a, "Kernel JSON file")->required();
    sub->add_option("second", in_b, "Kernel JSON file")->required();
  }

  // measure -----------------------------------------------------------
  CLI::App* measure = app.add_subcommand("measure", "Signed measure lattice toolkit");
  measure->require_subcommand(1);
  {
    CLI::App* sub = measure->add_subcommand("jordan")->callback(
        [&] { action = [&] { return cmd_measure_jordan(config, in_a); }; });
    sub->add_option("measure", in_a, "Measure JSON file")->required();
  }
  {
    CLI::App* sub = measure->add_subcommand("tv")->callback(
        [&] { action = [&] { return cmd_measure_tv(config, in_a); }; });
    sub->add_option("measure", in_a, "Measure JSON file")->required();
  }
  for (const bool sup : {true, false}) {
    CLI::App* sub = measure->add_subcommand(sup ? "sup" : "inf")->callback([&, sup] {
      action = [&, sup] { return cmd_measure_lattice(config, in_a, in_b, sup); };
    });
    sub->add_option("first", in_a, "Measure JSON file")->required();
    sub->add_option("second", in_b, "Measure JSON file")->required();
  }

  // operator ------------------------------------------------------------
  CLI::App* op_cmd = app.add_subcommand("operator", "Induced operator actions");
  op_cmd->require_subcommand(1);
  {
    CLI::App* sub = op_cmd->add_subcommand("apply")->callback(
        [&] { action = [&] { return cmd_operator_apply(config, in_a, in_b); }; });
    sub->add_option("kernel", in_a, "Kernel JSON file")->required();
    sub->add_option("measure", in_b, "Measure JSON file")->required();
  }
  {
    CLI::App* sub = op_cmd->add_subcommand("adjoint")->callback(
        [&] { action = [&] { return cmd_operator_adjoint(config, in_a, in_b); }; });
    sub->add_option("kernel", in_a, "Kernel JSON file")->required();
    sub->add_option("function", in_b, "Function JSON file")->required();
  }
  {
    static bool use_oracle = false;
    static bool use_kernel = false;
    CLI::App* sub = op_cmd->add_subcommand("pospart")->callback([&] {
      action = [&] { return cmd_operator_pospart(config, in_a, in_b, use_oracle); };
    });
    sub->add_option("kernel_file", in_a, "Kernel JSON file")->required();
    sub->add_option("measure_file", in_b, "Measure JSON file")->required();
    sub->add_flag("--oracle", use_oracle, "Brute-force supremum route");
    sub->add_flag("--kernel", use_kernel, "Kernel positive-part route (default)");
  }
  {
    static std::vector<std::string> test_paths;
    CLI::App* sub = op_cmd->add_subcommand("check-weak-continuity")->callback([&] {
      action = [&] { return cmd_operator_weak_continuity(config, in_a, test_paths); };
    });
    sub->add_option("kernel", in_a, "Kernel JSON file")->required();
    sub->add_option("--tests", test_paths, "Test measure JSON files");
  }

  // verify --------------------------------------------------------------
  CLI::App* verify = app.add_subcommand("verify", "Oracle equivalence sweeps");
  verify->require_subcommand(1);
  {
    static int trials = 100;
    CLI::App* sub = verify->add_subcommand("pospart")->callback(
        [&] { action = [&] { return cmd_verify_pospart(config, in_a, trials); }; });
    sub->add_option("kernel", in_a, "Kernel JSON file")->required();
    sub->add_option("--trials", trials, "Number of random positive measures")
        ->check(CLI::PositiveNumber);
  }

  // demo ----------------------------------------------------------------
  CLI::App* demo = app.add_subcommand("demo", "Built-in fixtures");
  demo->require_subcommand(1);
  {
    static int N = 16;
    CLI::App* sub = demo->add_subcommand("sequence-example")->callback(
        [&] { action = [&] { return cmd_demo_sequence_example(config, N); }; });
    sub->add_option("--N", N, "Truncation of the sequence space")->check(CLI::PositiveNumber);
  }

  // doob ----------------------------------------------------------------
  CLI::App* doob = app.add_subcommand("doob", "Markov stability analysis");
  doob->require_subcommand(1);
  static double t0 = 1.0;
  static double t_max = 128.0;
  static std::string nu_path, trace_base = "doob_trace.csv";
  {
    CLI::App* sub = doob->add_subcommand("check")->callback([&] {
      action = [&] { return cmd_doob(config, in_a, t0, false, "", 0.0, ""); };
    });
    sub->add_option("model", in_a, "Model JSON file")->required();
    sub->add_option("--t0", t0, "Regularity time")->check(CLI::PositiveNumber);
  }
  {
    CLI::App* sub = doob->add_subcommand("run")->callback([&] {
      action = [&] {
        return cmd_doob(config, in_a, t0, true, nu_path, t_max, trace_base);
      };
    });
    sub->add_option("model", in_a, "Model JSON file")->required();
    sub->add_option("--t0", t0, "Regularity time")->check(CLI::PositiveNumber);
    sub->add_option("--t-max", t_max, "Horizon for the convergence trace")
        ->check(CLI::PositiveNumber);
    sub->add_option("--nu", nu_path, "Start measure (default: every Dirac)");
    sub->add_option("--trace", trace_base, "Trace CSV path");
  }

  // Global options (output, seed, tolerances) may appear after subcommands.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    cmd->fallthrough(true);
    for (CLI::App* sub : cmd->get_subcommands([](CLI::App*) { return true; })) {
      enable_fallthrough(sub);
    }
  };
  enable_fallthrough(&app);

  CLI11_PARSE(app, argc, argv);

  try {
    return action ? action() : 0;
  } catch (const klat::SchemaError& e) {
    std::cerr << "schema error: " << e.what() << '\n';
    return static_cast<int>(klat::ExitCode::schema);
  } catch (const klat::SpaceMismatchError& e) {
    std::cerr << "space mismatch: " << e.what() << '\n';
    return static_cast<int>(klat::ExitCode::space_mismatch);
  } catch (const klat::CarrierTooLargeError& e) {
    std::cerr << "carrier too large: " << e.what() << '\n';
    return static_cast<int>(klat::ExitCode::carrier_too_large);
  } catch (const klat::PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << '\n';
    return static_cast<int>(klat::ExitCode::schema);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
