// Copyright 2026 The qst Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "qst/commands.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <ostream>
#include <sstream>

#include "qst/verify.hpp"

namespace qst::cli {

namespace {

using io::json;
using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t).count();
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory '" + dir.string() + "': " + ec.message());
}

void check_dims(const DensityMatrix& truth, const PovmEnsemble& ens) {
  if (truth.dim() != ens.dim()) {
    std::ostringstream os;
    os << "state dimension " << truth.dim() << " does not match ensemble dimension " << ens.dim();
    throw ParseError(os.str());
  }
}

ScalingTrial score_trial(const ExperimentSpec& spec, const DensityMatrix& truth, std::size_t trial,
                         std::uint64_t trial_seed) {
  ScalingTrial row;
  row.shots = spec.shots;
  row.trial = trial;
  const auto start = Clock::now();
  try {
    const PovmEnsemble ens = build_ensemble(spec.ensemble, derive_seed(trial_seed, 1));
    check_dims(truth, ens);
    const auto records = measure_ensemble(truth, ens, spec.shots, trial_seed);
    const EstimateResult est = run_estimator(spec.estimator, ens, std::span<const MeasurementRecord>(records));
    row.frob_error = frobenius_distance(est.state, truth).value;
    row.trace_error = trace_distance(est.state, truth).value;
    row.fidelity = fidelity(est.state, truth).value;
  } catch (const ParseError&) {
    throw;
  } catch (const Error&) {
    row.failed = true;
  }
  row.wall_ms = ms_since(start);
  return row;
}

int report_error(const std::exception& e, int code, std::ostream& err) {
  err << "error: " << e.what() << "\n";
  return code;
}

template <typename F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const ParseError& e) {
    return report_error(e, exit_parse, err);
  } catch (const InvalidArgument& e) {
    return report_error(e, exit_parse, err);
  } catch (const DimensionError& e) {
    return report_error(e, exit_parse, err);
  } catch (const IoError& e) {
    return report_error(e, exit_io, err);
  } catch (const Error& e) {
    return report_error(e, exit_numerical, err);
  } catch (const std::exception& e) {
    return report_error(e, exit_numerical, err);
  }
}

}  // namespace

void apply(const Overrides& o, ExperimentSpec& spec) {
  if (o.seed) spec.seed = *o.seed;
  if (o.out) spec.output = *o.out;
}

RunResult run_experiment(const ExperimentSpec& spec) {
  const auto t0 = Clock::now();
  ensure_dir(spec.output);

  auto t = Clock::now();
  const DensityMatrix truth = make_truth(spec);
  const PovmEnsemble ens = make_ensemble(spec);
  check_dims(truth, ens);
  const double t_generate = ms_since(t);

  t = Clock::now();
  const auto records = measure_ensemble(truth, ens, spec.shots, derive_seed(spec.seed, seed_measure));
  const double t_measure = ms_since(t);

  t = Clock::now();
  const EstimateResult est = run_estimator(spec.estimator, ens, std::span<const MeasurementRecord>(records));
  const double t_estimate = ms_since(t);

  t = Clock::now();
  const double frob = frobenius_distance(est.state, truth).value;
  json metrics{{"trace_distance", trace_distance(est.state, truth).value},
               {"frobenius_distance", frob},
               {"fidelity", fidelity(est.state, truth).value}};
  const double t_score = ms_since(t);

  io::write_text(spec.output / "truth.json", io::dump(json{{"state", io::matrix_to_json(truth.matrix())}}));
  io::write_text(spec.output / "records.json", io::dump(io::records_to_json(records)));
  io::write_text(spec.output / "estimate.json", io::dump(io::estimate_to_json(est, frob)));

  json result{{"spec", experiment_to_json(spec)},
              {"metrics", metrics},
              {"artifacts",
               {{"truth", "truth.json"}, {"records", "records.json"}, {"estimate", "estimate.json"},
                {"result", "result.json"}}}};
  result["timings_ms"] = {{"generate", t_generate},
                          {"measure", t_measure},
                          {"estimate", t_estimate},
                          {"score", t_score},
                          {"total", ms_since(t0)}};
  io::write_text(spec.output / "result.json", io::dump(result));
  return {result, spec.output};
}

std::string sweep_experiment(const ExperimentSpec& spec, const SweepOptions& opt) {
  if (opt.values.empty()) throw InvalidArgument("sweep: the grid is empty");
  if (opt.trials < 1) throw InvalidArgument("sweep: need at least one trial");
  if (opt.param != "shots" && opt.param != "Q" && opt.param != "rank") {
    throw InvalidArgument("sweep: unknown grid parameter '" + opt.param + "' (expected shots, Q or rank)");
  }
  std::vector<std::uint64_t> grid;
  for (double v : opt.values) {
    if (!(v >= 1.0) || v != std::floor(v) || v > 1e15) {
      throw InvalidArgument("sweep: grid values must be positive integers");
    }
    grid.push_back(static_cast<std::uint64_t>(v));
  }

  const DensityMatrix truth = make_truth(spec);
  const std::uint64_t sweep_seed = derive_seed(spec.seed, seed_sweep);
  std::ostringstream csv;
  csv << io::scaling_csv_header() << "\n";

  if (opt.param == "shots") {
    check_dims(truth, make_ensemble(spec));
    const ScalingReport rep = error_scaling_sweep(spec.estimator, spec.ensemble, truth, grid, opt.trials, sweep_seed);
    for (const auto& row : rep.trials) csv << io::scaling_csv_row(row, static_cast<double>(row.shots)) << "\n";
    csv << "# fitted_slope," << (rep.slope ? io::format_double(*rep.slope) : std::string("nan")) << "\n";
    return csv.str();
  }

  for (std::size_t g = 0; g < grid.size(); ++g) {
    ExperimentSpec variant = spec;
    if (opt.param == "Q") {
      variant.ensemble.settings = grid[g];
    } else {
      variant.estimator.structure = StructureModel::low_rank(grid[g]);
      variant.estimator.structure.validate(truth.dim());
    }
    const std::uint64_t grid_seed = derive_seed(sweep_seed, g + 1);
    for (std::size_t t = 0; t < opt.trials; ++t) {
      const ScalingTrial row = score_trial(variant, truth, t, derive_seed(grid_seed, t));
      csv << io::scaling_csv_row(row, static_cast<double>(grid[g])) << "\n";
    }
  }
  return csv.str();
}

namespace {

std::size_t parse_settings(const std::string& text) {
  std::size_t value = 0;
  const char* end = text.data() + text.size();
  auto res = std::from_chars(text.data(), end, value);
  if (text.empty() || res.ec != std::errc() || res.ptr != end || value < 1) {
    throw InvalidArgument("verify: --q must be a positive integer" + std::string(" (got '") + text + "')");
  }
  return value;
}

VerifyOutcome verify_isometry(const VerifyOptions& opt) {
  const Povm povm = design3_povm_qubit();
  const DensityMatrix zero = validate_density(computational_basis_povm(2).effect(0));
  const DensityMatrix one = validate_density(computational_basis_povm(2).effect(1));
  const IsometryReport hand = check_design_isometry(povm, zero, one);
  double worst = hand.abs_deviation;
  for (std::size_t t = 0; t < opt.trials; ++t) {
    const auto a = random_structured_state(StructureModel::full(), 2, derive_seed(opt.seed, 2 * t));
    const auto b = random_structured_state(StructureModel::full(), 2, derive_seed(opt.seed, 2 * t + 1));
    worst = std::max(worst, check_design_isometry(povm, a, b).abs_deviation);
  }
  const bool hand_ok = std::abs(hand.lhs - 2.0 / 9.0) < 1e-12 && std::abs(hand.rhs - 2.0 / 9.0) < 1e-12;
  VerifyOutcome out;
  out.pass = hand_ok && worst < 1e-10;
  out.report = {{"hand_case", io::to_json(hand)}, {"random_pairs", opt.trials}, {"max_abs_deviation", worst},
                {"tolerance", 1e-10}};
  out.summary = "isometry max deviation " + io::format_double(worst) + " (tolerance 1e-10)";
  return out;
}

VerifyOutcome verify_haar(const VerifyOptions& opt) {
  const std::size_t q = opt.settings.empty() ? 100000 : parse_settings(opt.settings);
  const Eigen::Index d = Eigen::Index{1} << opt.qubits;
  ComplexMatrix delta;
  if (opt.qubits == 1) {
    delta = ComplexMatrix::Zero(2, 2);
    delta(0, 0) = 1.0;
    delta(1, 1) = -1.0;
  } else {
    Rng rng(derive_seed(opt.seed, 0));
    const ComplexMatrix g = complex_gaussian(d, d, rng);
    delta = hermitian_part(g);
    delta -= (delta.trace() / static_cast<double>(d)) * ComplexMatrix::Identity(d, d);
  }
  const HaarExpectation r = check_haar_expectation(opt.qubits, q, delta, derive_seed(opt.seed, 1));
  const double rel = std::abs(r.mc_estimate - r.predicted) / r.predicted;
  VerifyOutcome out;
  out.pass = rel < 0.03;
  out.report = io::to_json(r);
  out.report["settings"] = q;
  out.report["relative_error"] = rel;
  out.report["tolerance"] = 0.03;
  out.summary = "haar relative error " + io::format_double(rel) + " (tolerance 0.03)";
  return out;
}

VerifyOutcome verify_rip(const VerifyOptions& opt) {
  const std::size_t total = std::size_t{1} << (2 * opt.qubits);
  const bool full = opt.settings.empty() || opt.settings == "full";
  const std::size_t q = full ? total : parse_settings(opt.settings);
  const RipReport r = check_pauli_rip(opt.qubits, opt.rank, q, opt.trials, opt.seed,
                                      full ? PauliSelection::full : PauliSelection::iid);
  const double tol = full ? 1e-10 : 0.5;
  VerifyOutcome out;
  out.pass = r.empirical_delta < tol;
  out.report = io::to_json(r);
  out.report["settings"] = q;
  out.report["selection"] = full ? "full" : "iid";
  out.report["tolerance"] = tol;
  out.summary = "rip empirical delta " + io::format_double(r.empirical_delta) + " (tolerance " +
                io::format_double(tol) + ")";
  return out;
}

VerifyOutcome verify_kl(const VerifyOptions& opt) {
  if (!(opt.distance >= 0.0)) throw InvalidArgument("verify kl: distance must be non-negative");
  const Povm povm = design3_povm_qubit();
  const DensityMatrix rho1 = random_structured_state(StructureModel::full(), 2, derive_seed(opt.seed, 0));
  const ComplexMatrix direction = maximally_mixed(2).matrix() - rho1.matrix();
  const double reach = direction.norm();
  if (opt.distance > reach) {
    throw InvalidArgument("verify kl: distance exceeds " + io::format_double(reach) + " for this seed");
  }
  const DensityMatrix rho2 =
      opt.distance == 0.0 ? rho1 : validate_density(rho1.matrix() + (opt.distance / reach) * direction);
  const KlReport r = kl_check(rho1, rho2, povm, opt.shots);
  VerifyOutcome out;
  out.report = io::to_json(r);
  out.report["distance"] = opt.distance;
  out.report["shots"] = opt.shots;
  if (opt.distance == 0.0) {
    out.pass = r.kl == 0.0 && r.l2_approx == 0.0;
    out.summary = "kl " + io::format_double(r.kl) + " for identical states (expected 0)";
  } else {
    const double rel = r.fisher_gap / r.kl;
    out.pass = r.finite && r.kl > 0.0 && rel < 0.1;
    out.report["relative_fisher_gap"] = rel;
    out.report["tolerance"] = 0.1;
    out.summary = "kl " + io::format_double(r.kl) + ", quadratic-approximation relative gap " +
                  io::format_double(rel) + " (tolerance 0.1)";
  }
  return out;
}

}  // namespace

VerifyOutcome verify_check(const VerifyOptions& opt) {
  if (opt.qubits < 1) throw InvalidArgument("verify: qubits must be at least 1");
  VerifyOutcome out;
  if (opt.check == "isometry") out = verify_isometry(opt);
  else if (opt.check == "haar") out = verify_haar(opt);
  else if (opt.check == "rip") out = verify_rip(opt);
  else if (opt.check == "kl") out = verify_kl(opt);
  else throw InvalidArgument("verify: unknown check '" + opt.check + "'");
  out.report["check"] = opt.check;
  out.report["seed"] = opt.seed;
  out.report["pass"] = out.pass;
  return out;
}

int command_run(const std::filesystem::path& spec_path, const Overrides& o, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentSpec spec = load_experiment(spec_path);
    apply(o, spec);
    const RunResult r = run_experiment(spec);
    out << "wrote " << (r.out_dir / "result.json").string() << " (fidelity "
        << io::format_double(r.result["metrics"]["fidelity"].get<double>()) << ")\n";
    return static_cast<int>(exit_ok);
  });
}

int command_sweep(const std::filesystem::path& spec_path, const SweepOptions& opt, const Overrides& o,
                  std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    ExperimentSpec spec = load_experiment(spec_path);
    apply(o, spec);
    SweepOptions eff = opt;
    if (o.trials) eff.trials = *o.trials;
    const std::string csv = sweep_experiment(spec, eff);
    ensure_dir(spec.output);
    const auto path = spec.output / ("sweep_" + eff.param + ".csv");
    io::write_text(path, csv);
    out << "wrote " << path.string() << "\n";
    return static_cast<int>(exit_ok);
  });
}

int command_verify(const VerifyOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const VerifyOutcome r = verify_check(opt);
    ensure_dir(opt.out);
    io::write_text(opt.out / ("verify_" + opt.check + ".json"), io::dump(r.report));
    out << (r.pass ? "PASS " : "FAIL ") << r.summary << "\n";
    return static_cast<int>(r.pass ? exit_ok : exit_fail);
  });
}

}  // namespace qst::cli
