// ucplab: constants sheet and verification-experiment runner.
//
// Exit codes: 0 every non-vacuous case passed; 1 a case failed or a numeric
// routine gave up (the first failing case id is printed); 2 usage or
// configuration errors (unknown command or experiment, missing or malformed
// keys, precondition violations).
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <boost/program_options.hpp>

#include "config.hpp"
#include "ucplab/constants.hpp"
#include "ucplab/discrete.hpp"
#include "ucplab/experiments.hpp"
#include "ucplab/fields.hpp"
#include "ucplab/geometry.hpp"
#include "ucplab/report.hpp"

namespace po = boost::program_options;
using namespace ucplab;

namespace {

constexpr const char* kVersion = "1.0.0";

const char* kUsage =
    "usage: ucplab <command> [experiment] [options]\n"
    "\n"
    "commands:\n"
    "  constants           evaluate the constants sheet for a model configuration\n"
    "  run <experiment>    run a verification experiment and write its report\n"
    "\n"
    "experiments:\n"
    "  observe | lift | uncertainty | lemmas | wegner | annuli | weight |\n"
    "  extend-demo | chain-demo\n";

struct CliArgs {
  std::string command;
  std::string experiment;
  std::string configPath;
  std::string out = "ucplab-out";
  std::uint64_t seed = 1;
  bool seedGiven = false;
  int threads = 1;
  bool threadsGiven = false;
  std::string calibration;
  long long trials = -1;
  double e0 = std::numeric_limits<double>::quiet_NaN();
  bool e0Given = false;
  int d = -1;
  double a = -1, b = -1, rho = -1, mu = -1;
};

// calibration spec: comma-separated theta=...,cprime=...
CalibrationConstants parse_calibration(const std::string& spec, CalibrationConstants cal) {
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    const std::size_t eq = item.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("calibration: expected name=value, got '" + item + "'");
    const std::string name = item.substr(0, eq);
    const double value = std::stod(item.substr(eq + 1));
    if (name == "theta")
      cal.cutoffTheta = value;
    else if (name == "cprime")
      cal.cacciopoliCPrime = value;
    else
      throw std::invalid_argument("calibration: unknown constant '" + name + "'");
  }
  cal.validate();
  return cal;
}

// CLI overrides fold into the resolved map so the manifest hash covers them.
Config resolve_config(const CliArgs& args) {
  Config cfg;
  if (!args.configPath.empty()) cfg = Config::load(args.configPath);
  if (args.seedGiven) cfg.set_number("experiment.seed", static_cast<double>(args.seed));
  if (args.threadsGiven) cfg.set_number("experiment.threads", args.threads);
  if (!args.calibration.empty()) {
    const CalibrationConstants cal =
        parse_calibration(args.calibration, CalibrationConstants{});
    cfg.set_number("calibration.theta", cal.cutoffTheta);
    cfg.set_number("calibration.cprime", cal.cacciopoliCPrime);
  }
  if (args.trials >= 0) cfg.set_number("lemmas.trials", static_cast<double>(args.trials));
  if (args.e0Given) cfg.set_number("constants.e0", args.e0);
  if (args.d > 0) cfg.set_number("chain.d", args.d);
  if (args.a > 0) cfg.set_number("chain.a", args.a);
  if (args.b > 0) cfg.set_number("chain.b", args.b);
  if (args.rho > 0) cfg.set_number("weight.rho", args.rho);
  if (args.mu >= 0) cfg.set_number("weight.mu", args.mu);
  return cfg;
}

CalibrationConstants calibration_from(const Config& cfg) {
  CalibrationConstants cal;
  cal.cutoffTheta = cfg.number_or("calibration.theta", cal.cutoffTheta);
  cal.cacciopoliCPrime = cfg.number_or("calibration.cprime", cal.cacciopoliCPrime);
  cal.validate();
  return cal;
}

ExperimentConfig experiment_config(const Config& cfg) {
  ExperimentConfig e;
  e.d = static_cast<int>(cfg.integer_or("experiment.d", e.d));
  e.L = cfg.number_or("experiment.l", e.L);
  e.n = static_cast<int>(cfg.integer_or("experiment.n", e.n));
  e.generator = cfg.string_or("experiment.generator", e.generator);
  e.genParam = cfg.number_or("experiment.gen_param", e.genParam);
  e.deltas = cfg.numbers_or("experiment.deltas", e.deltas);
  e.ts = cfg.numbers_or("experiment.ts", e.ts);
  e.k = static_cast<int>(cfg.integer_or("experiment.k", e.k));
  const std::string mode = cfg.string_or("experiment.mode", "centered");
  if (mode == "centered")
    e.mode = PlacementMode::centered;
  else if (mode == "seeded_random")
    e.mode = PlacementMode::seeded_random;
  else
    throw std::invalid_argument("experiment.mode must be centered or seeded_random");
  e.seed = static_cast<std::uint64_t>(cfg.integer_or("experiment.seed", 1));
  e.threads = static_cast<int>(cfg.integer_or("experiment.threads", 1));
  e.quadNodes = static_cast<int>(cfg.integer_or("experiment.quad_nodes", e.quadNodes));
  e.tol = cfg.number_or("experiment.tol", e.tol);
  e.capDelta = cfg.boolean_or("experiment.cap_delta", e.capDelta);
  e.cal = calibration_from(cfg);
  return e;
}

ModelParams model_from(const Config& cfg) {
  ModelParams p;
  p.d = static_cast<int>(cfg.integer("model.d"));
  p.thetaE = cfg.number("model.theta_e");
  p.thetaL = cfg.number("model.theta_l");
  p.normV = cfg.number_or("model.norm_v", 0.0);
  p.normB = cfg.number_or("model.norm_b", 0.0);
  p.normC = cfg.number_or("model.norm_c", 0.0);
  p.G = cfg.number_or("model.g", 1.0);
  p.validate();
  return p;
}

void write_manifest(const CliArgs& args, const Config& cfg, const std::string& outDir) {
  json m;
  m["command"] = args.command;
  if (!args.experiment.empty()) m["experiment"] = args.experiment;
  m["config"] = args.configPath.empty() ? json(nullptr) : json(args.configPath);
  {
    std::ostringstream hash;
    hash << "fnv1a:" << std::hex << cfg.fnv1a();
    m["config_hash"] = hash.str();
  }
  m["seed"] = cfg.integer_or("experiment.seed", 1);
  m["threads"] = cfg.integer_or("experiment.threads", 1);
  m["out"] = outDir;
  m["version"] = kVersion;
  std::filesystem::create_directories(outDir);
  std::ofstream out(std::filesystem::path(outDir) / "manifest.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open manifest in " + outDir);
  out << m.dump(2) << "\n";
}

int cmd_constants(const CliArgs& args, const Config& cfg) {
  const ModelParams p = model_from(cfg);
  const CalibrationConstants cal = calibration_from(cfg);
  const xreal d0 = delta0(p);
  const xreal delta = cfg.has("constants.delta") ? xreal(cfg.number("constants.delta"))
                                                 : d0 / xreal(2);
  const double e0 = cfg.number_or("constants.e0", 0.0);
  const double lambda1 = cfg.number_or("constants.lambda1", 0.0);
  const double T = cfg.number_or("constants.t_time", 1.0);

  const json sheet = constants_json(p, delta, cal, e0, lambda1, T);
  write_manifest(args, cfg, args.out);
  std::ofstream out(std::filesystem::path(args.out) / "constants.json", std::ios::binary);
  if (!out) throw std::runtime_error("cannot open constants.json in " + args.out);
  out << sheet.dump(2) << "\n";
  std::cout << "constants sheet written to " << args.out << "/constants.json" << std::endl;
  return 0;
}

ExperimentReport run_extend_demo(const Config& cfg) {
  const double L = cfg.number_or("experiment.l", 2.0);
  const int n = static_cast<int>(cfg.integer_or("experiment.n", 31));
  const double q0 = cfg.number_or("experiment.gen_param", 0.5);
  GridSpec grid{2, L, n};
  grid.validate();
  const CoefficientField field = sample_field(crossterm_generator(L, q0), grid);

  // Smooth odd-extendable test function: product of half-period sines.
  const double kPi = 3.14159265358979323846;
  Eigen::VectorXd psi(grid.size());
  for (long long f = 0; f < grid.size(); ++f) {
    const Eigen::VectorXd x = grid.node(f);
    psi[f] = std::sin(kPi * (x[0] + L / 2) / L) * std::sin(kPi * (x[1] + L / 2) / L);
  }

  auto [ext, psiHat] = reflect_extend(field, psi, 3);
  const DiscreteOperator Msrc = assemble(field);
  const DiscreteOperator Mext = assemble(ext.result);
  const Eigen::VectorXd lhs = Mext.M * psiHat;
  const Eigen::VectorXd rhs = Msrc.M * psi;

  // Row-level transport: at big-grid nodes whose fold lands strictly inside
  // the source cube, the extended operator row applied to the odd extension
  // reproduces the source row up to the accumulated reflection parity.
  const GridSpec& big = ext.result.grid;
  double worst = 0.0;
  long long checked = 0;
  const double h = grid.h();
  for (long long f = 0; f < big.size(); ++f) {
    const Eigen::VectorXd x = big.node(f);
    std::array<int, 3> idx{0, 0, 0};
    int sign = 1;
    bool interface = false;
    for (int k = 0; k < 2; ++k) {
      double y = x[k];
      if (y > L / 2) {
        y = L - y;
        sign = -sign;
      } else if (y < -L / 2) {
        y = -L - y;
        sign = -sign;
      }
      const double ir = (y + L / 2) / h;  // 0..n+1 on the source lattice
      const long long i = std::llround(ir);
      if (i <= 0 || i >= n + 1) {
        interface = true;
        break;
      }
      idx[k] = static_cast<int>(i - 1);
    }
    if (interface) continue;
    ++checked;
    worst = std::max(worst, std::abs(lhs[f] - sign * rhs[grid.flatten(idx)]));
  }
  const double scale = rhs.cwiseAbs().maxCoeff();

  ExperimentReport rep;
  rep.name = "extend";
  {
    ExperimentCase c = make_case("extend/transport-identity", worst / scale, log(xreal(1e-10)),
                                 "reflection-transport", false);
    c.inputs = {{"checked_nodes", static_cast<double>(checked)},
                {"q0", q0},
                {"n", static_cast<double>(n)}};
    rep.add(std::move(c));
  }

  // Ellipticity transport is exact in floating point: the reflected matrix
  // is a signed conjugation, so trace and determinant (hence both closed-form
  // eigenvalues) agree bitwise with the fold's.
  long long exact = 0, total = 0;
  for (long long f = 0; f < big.size(); ++f) {
    const Eigen::VectorXd x = big.node(f);
    Eigen::VectorXd y(2);
    for (int k = 0; k < 2; ++k) {
      y[k] = x[k];
      if (y[k] > L / 2) y[k] = L - y[k];
      if (y[k] < -L / 2) y[k] = -L - y[k];
    }
    const Eigen::MatrixXd Ahat = ext.result.A(x);
    const Eigen::MatrixXd A = field.A(y);
    auto eigs2 = [](const Eigen::MatrixXd& M2, double& lo, double& hi) {
      const double tr = M2(0, 0) + M2(1, 1);
      const double det = M2(0, 0) * M2(1, 1) - M2(0, 1) * M2(1, 0);
      const double disc = std::sqrt(tr * tr - 4 * det);
      lo = (tr - disc) / 2;
      hi = (tr + disc) / 2;
    };
    double lo1, hi1, lo2, hi2;
    eigs2(Ahat, lo1, hi1);
    eigs2(A, lo2, hi2);
    ++total;
    if (lo1 == lo2 && hi1 == hi2) ++exact;
  }
  {
    ExperimentCase c;
    c.id = "extend/ellipticity-preserved";
    c.observed = static_cast<double>(total - exact);
    c.boundTag = "reflection-transport";
    c.geq = false;
    c.pass = exact == total;
    c.inputs = {{"nodes", static_cast<double>(total)}};
    c.note = "nodes where a closed-form eigenvalue of A changed bitwise under reflection";
    rep.add(std::move(c));
  }

  {
    const ThetaMeasurement src = measure_theta(field);
    const ThetaMeasurement extm = measure_theta(ext.result);
    ExperimentCase c = make_case("extend/lipschitz-growth", extm.thetaLhat,
                                 log(xreal(src.thetaLhat + 2 * h * field.gen.thetaL)),
                                 "reflection-transport", false);
    c.inputs = {{"theta_l_source", src.thetaLhat},
                {"theta_l_extended", extm.thetaLhat},
                {"theta_l_declared", field.gen.thetaL}};
    rep.add(std::move(c));
  }

  rep.summary.emplace_back("factor", "3");
  rep.summary.emplace_back("grid", std::to_string(n) + "^2");
  rep.sort_cases();
  return rep;
}

ExperimentReport run_chain_demo(const Config& cfg) {
  const int d = static_cast<int>(cfg.integer_or("chain.d", 1));
  const double a = cfg.number_or("chain.a", 0.25);
  const double b = cfg.number_or("chain.b", 0.75);
  Eigen::VectorXd z = Eigen::VectorXd::Zero(d);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(d);
  const std::vector<double> yv = cfg.numbers_or("chain.y", {0.4});
  for (int k = 0; k < d && k < static_cast<int>(yv.size()); ++k) y[k] = yv[k];

  const ChainPath path = chain_path(z, y, a, b);

  ExperimentReport rep;
  rep.name = "chain";
  double minStep = std::numeric_limits<double>::infinity(), maxStep = 0;
  for (std::size_t i = 0; i + 1 < path.points.size(); ++i) {
    const double step = (path.points[i + 1] - path.points[i]).norm();
    minStep = std::min(minStep, step);
    maxStep = std::max(maxStep, step);
    ExperimentCase c;
    c.id = "chain/step=" + std::to_string(i);
    c.observed = step;
    c.boundTag = "informational";
    c.pass = true;
    c.datX = static_cast<double>(i);
    rep.add(std::move(c));
  }
  rep.add(make_case("chain/steps-below-b", maxStep, log(xreal(b * (1 + 1e-12))),
                    "chain-step-band", false));
  rep.add(make_case("chain/steps-above-a", minStep, log(xreal(a * (1 - 1e-12))),
                    "chain-step-band", true));
  {
    ExperimentCase c;
    c.id = "chain/invariants";
    c.observed = validate_chain(path, z, y) ? 1.0 : 0.0;
    c.boundTag = "chain-invariants";
    c.pass = c.observed == 1.0;
    c.inputs = {{"m", static_cast<double>(path.m)},
                {"points", static_cast<double>(path.points.size())},
                {"a", a},
                {"b", b}};
    rep.add(std::move(c));
  }
  rep.summary.emplace_back("m", std::to_string(path.m));
  rep.sort_cases();
  return rep;
}

int cmd_run(const CliArgs& args, const Config& cfg) {
  const std::string& exp = args.experiment;
  ExperimentReport rep;
  if (exp == "observe") {
    rep = observability_experiment(experiment_config(cfg));
  } else if (exp == "lift") {
    rep = lifting_experiment(experiment_config(cfg));
  } else if (exp == "uncertainty") {
    rep = short_interval_uncertainty(
        experiment_config(cfg),
        cfg.has("constants.e0") ? cfg.number("constants.e0")
                                : std::numeric_limits<double>::quiet_NaN());
  } else if (exp == "lemmas") {
    rep = abstract_lemma_tests(static_cast<int>(cfg.integer_or("lemmas.n", 8)),
                               cfg.integer_or("lemmas.trials", 10000),
                               static_cast<std::uint64_t>(cfg.integer_or("experiment.seed", 1)),
                               static_cast<int>(cfg.integer_or("experiment.threads", 1)));
  } else if (exp == "wegner") {
    RandomModelConfig r;
    r.model = cfg.string_or("wegner.model", r.model);
    r.d = static_cast<int>(cfg.integer_or("wegner.d", r.d));
    r.omegaMinus = cfg.number_or("wegner.omega_minus", r.omegaMinus);
    r.omegaPlus = cfg.number_or("wegner.omega_plus", r.omegaPlus);
    r.samples = static_cast<int>(cfg.integer_or("wegner.samples", r.samples));
    r.seed = static_cast<std::uint64_t>(cfg.integer_or("experiment.seed", 1));
    r.threads = static_cast<int>(cfg.integer_or("experiment.threads", 1));
    std::vector<double> epsDefault;
    for (int i = 0; i < 9; ++i) epsDefault.push_back(std::pow(10.0, -1.0 + 0.25 * i));
    rep = wegner_monte_carlo(r, cfg.numbers_or("wegner.ls", {8.0, 16.0}),
                             cfg.numbers_or("wegner.epsilons", epsDefault),
                             cfg.number_or("wegner.energy", 0.5));
  } else if (exp == "annuli") {
    rep = three_annuli_suite(calibration_from(cfg));
  } else if (exp == "weight") {
    const int d = static_cast<int>(cfg.integer_or("weight.d", 2));
    const std::vector<double> diagDefault(d, 1.0);
    const std::vector<double> diag = cfg.numbers_or("weight.a0_diag", diagDefault);
    if (static_cast<int>(diag.size()) != d)
      throw std::invalid_argument("weight.a0_diag must have weight.d entries");
    Eigen::MatrixXd A0 = Eigen::MatrixXd::Zero(d, d);
    for (int k = 0; k < d; ++k) A0(k, k) = diag[k];
    rep = carleman_weight_experiment(
        cfg.number_or("weight.rho", 1.0), cfg.number_or("weight.mu", 1.5), A0,
        static_cast<int>(cfg.integer_or("weight.points", 10000)),
        static_cast<std::uint64_t>(cfg.integer_or("experiment.seed", 1)));
  } else if (exp == "extend-demo") {
    rep = run_extend_demo(cfg);
  } else if (exp == "chain-demo") {
    rep = run_chain_demo(cfg);
  } else {
    std::cerr << "unknown experiment: " << (exp.empty() ? "(none)" : exp) << "\n"
              << kUsage;
    return 2;
  }

  write_manifest(args, cfg, args.out);
  write_report(rep, args.out);
  const long long failures = rep.failures();
  std::cout << "experiment " << rep.name << ": " << rep.cases.size() << " cases, " << failures
            << " failed (report: " << args.out << "/report.json)" << std::endl;
  if (failures > 0) {
    std::cout << "first failing case: " << rep.first_failure()->id << std::endl;
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CliArgs args;
  try {
    po::options_description opts("options");
    opts.add_options()                                                                   //
        ("help,h", "print usage")                                                        //
        ("config", po::value<std::string>(), "TOML or JSON configuration file")          //
        ("seed", po::value<std::uint64_t>(), "RNG seed (overrides the config)")          //
        ("threads", po::value<int>(), "worker threads (overrides the config)")           //
        ("out", po::value<std::string>(), "output directory (UCPLAB_OUT overrides)")     //
        ("calibration", po::value<std::string>(), "calibration spec theta=X,cprime=Y")   //
        ("trials", po::value<long long>(), "lemma trials (overrides the config)")        //
        ("e0", po::value<double>(), "spectral window center (overrides the config)")     //
        ("d", po::value<int>(), "dimension (chain-demo)")                                //
        ("a", po::value<double>(), "minimal step (chain-demo)")                          //
        ("b", po::value<double>(), "maximal step (chain-demo)")                          //
        ("rho", po::value<double>(), "weight ball radius (weight)")                      //
        ("mu", po::value<double>(), "weight decay rate (weight)")                        //
        ("command", po::value<std::string>(), "command")                                 //
        ("experiment", po::value<std::string>(), "experiment name");
    po::positional_options_description pos;
    pos.add("command", 1).add("experiment", 1);

    po::variables_map vm;
    po::store(po::command_line_parser(argc, argv).options(opts).positional(pos).run(), vm);
    po::notify(vm);

    if (vm.count("help") || !vm.count("command")) {
      std::cout << kUsage;
      return vm.count("help") ? 0 : 2;
    }
    args.command = vm["command"].as<std::string>();
    if (vm.count("experiment")) args.experiment = vm["experiment"].as<std::string>();
    if (vm.count("config")) args.configPath = vm["config"].as<std::string>();
    if (vm.count("seed")) {
      args.seed = vm["seed"].as<std::uint64_t>();
      args.seedGiven = true;
    }
    if (vm.count("threads")) {
      args.threads = vm["threads"].as<int>();
      args.threadsGiven = true;
    }
    if (vm.count("out")) args.out = vm["out"].as<std::string>();
    if (const char* envOut = std::getenv("UCPLAB_OUT")) args.out = envOut;
    if (vm.count("calibration")) args.calibration = vm["calibration"].as<std::string>();
    if (vm.count("trials")) args.trials = vm["trials"].as<long long>();
    if (vm.count("e0")) {
      args.e0 = vm["e0"].as<double>();
      args.e0Given = true;
    }
    if (vm.count("d")) args.d = vm["d"].as<int>();
    if (vm.count("a")) args.a = vm["a"].as<double>();
    if (vm.count("b")) args.b = vm["b"].as<double>();
    if (vm.count("rho")) args.rho = vm["rho"].as<double>();
    if (vm.count("mu")) args.mu = vm["mu"].as<double>();
  } catch (const po::error& e) {
    std::cerr << "argument error: " << e.what() << "\n" << kUsage;
    return 2;
  }

  try {
    const Config cfg = resolve_config(args);
    if (args.command == "constants") return cmd_constants(args, cfg);
    if (args.command == "run") return cmd_run(args, cfg);
    std::cerr << "unknown command: " << args.command << "\n" << kUsage;
    return 2;
  } catch (const MissingKeyError& e) {
    std::cerr << e.what() << std::endl;
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << std::endl;
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "numerical failure: " << e.what() << std::endl;
    return 1;
  }
}
