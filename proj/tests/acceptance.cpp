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

// Standalone acceptance run: one PASS/FAIL line per criterion, nonzero exit
// status when any criterion fails. argv[1] is the path of the qst executable.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "qst/estimators.hpp"
#include "qst/povm.hpp"
#include "qst/qcore.hpp"
#include "qst/sampler.hpp"
#include "qst/structures.hpp"
#include "qst/verify.hpp"

namespace fs = std::filesystem;
using namespace qst;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

DensityMatrix random_density(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  const ComplexMatrix g = complex_gaussian(d, d, rng);
  const ComplexMatrix w = g * g.adjoint();
  return validate_density(w / w.trace().real(), 1e-9);
}

DensityMatrix random_pure(Eigen::Index d, std::uint64_t seed) {
  Rng rng(seed);
  return density_from_pure(haar_random_pure_state(d, rng));
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

Outcome isometry() {
  const Povm povm = design3_povm_qubit();
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 1000; ++t) {
    const auto r = check_design_isometry(povm, random_density(2, 2 * t + 1), random_density(2, 2 * t + 2));
    worst = std::max(worst, r.abs_deviation);
  }
  ComplexMatrix zero = ComplexMatrix::Zero(2, 2), one = ComplexMatrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  one(1, 1) = 1.0;
  const auto hand = check_design_isometry(povm, validate_density(zero, 1e-12), validate_density(one, 1e-12));
  const double hand_dev = std::max(std::abs(hand.lhs - 2.0 / 9.0), std::abs(hand.rhs - 2.0 / 9.0));
  return {worst < 1e-10 && hand_dev < 1e-12,
          "max deviation " + fmt(worst) + ", hand case lhs " + fmt(hand.lhs) + " rhs " + fmt(hand.rhs)};
}

Outcome pauli_reconstruction() {
  double worst = 0.0;
  std::size_t count = 0;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (const PauliIndex& p : all_pauli_indices(n)) {
      const SignedPovm sp = pauli_basis_povm(p);
      ComplexMatrix sum = ComplexMatrix::Zero(sp.povm.dim(), sp.povm.dim());
      for (std::size_t j = 0; j < sp.signs.size(); ++j) sum += double(sp.signs[j]) * sp.povm.effects()[j];
      worst = std::max(worst, (sum - pauli_matrix(p)).cwiseAbs().maxCoeff());
      ++count;
    }
  }
  return {count == 4 + 16 + 64 && worst < 1e-12, std::to_string(count) + " indices, max entry error " + fmt(worst)};
}

Outcome channel_inversion() {
  double worst = 0.0;
  for (Eigen::Index d : {2, 4, 8}) {
    for (std::uint64_t t = 0; t < 100; ++t) {
      const auto rho = random_density(d, 1000 * d + t);
      worst = std::max(worst, (haar_channel_inverse(haar_channel(rho.matrix())) - rho.matrix()).cwiseAbs().maxCoeff());
    }
  }
  double spectrum = 0.0;
  for (Eigen::Index d : {2, 4, 8}) {
    const ComplexMatrix u = haar_random_unitary(d, std::uint64_t(77 + d));
    for (std::size_t k = 0; k < std::size_t(d); ++k) {
      RealVector ev = hermitian_eigenvalues(shadow_snapshot(u, k).matrix);
      std::vector<double> v(ev.data(), ev.data() + ev.size());
      std::sort(v.begin(), v.end());
      for (std::size_t i = 0; i + 1 < v.size(); ++i) spectrum = std::max(spectrum, std::abs(v[i] + 1.0));
      spectrum = std::max(spectrum, std::abs(v.back() - double(d)));
    }
  }
  return {worst < 1e-12 && spectrum < 1e-9, "inversion error " + fmt(worst) + ", spectrum error " + fmt(spectrum)};
}

Outcome snapshot_unbiasedness() {
  const auto rho = random_pure(2, 4242);
  const std::size_t n = 100000;
  const auto snaps = sample_haar_snapshots(rho, n, 99);
  double worst_z = 0.0;
  bool ok = true;
  for (Eigen::Index i = 0; i < 2; ++i) {
    for (Eigen::Index j = 0; j < 2; ++j) {
      for (int part = 0; part < 2; ++part) {
        const auto comp = [&](const cplx& z) { return part == 0 ? z.real() : z.imag(); };
        double sum = 0.0, sum2 = 0.0;
        for (const auto& s : snaps) {
          const double x = comp(s.matrix(i, j));
          sum += x;
          sum2 += x * x;
        }
        const double mean = sum / double(n);
        const double var = std::max(0.0, (sum2 - double(n) * mean * mean) / double(n - 1));
        const double se = std::sqrt(var / double(n));
        const double diff = std::abs(mean - comp(rho.matrix()(i, j)));
        if (se < 1e-12) {
          ok = ok && diff < 1e-12;
        } else {
          worst_z = std::max(worst_z, diff / se);
        }
      }
    }
  }
  return {ok && worst_z <= 4.0, "max |z| " + fmt(worst_z) + " over entries"};
}

Outcome haar_expectation() {
  ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
  d1(0, 0) = 1.0;
  d1(1, 1) = -1.0;
  const ComplexMatrix d2 = random_density(4, 5).matrix() - random_density(4, 6).matrix();
  const auto r1 = check_haar_expectation(1, 100000, d1, 11);
  const auto r2 = check_haar_expectation(2, 100000, d2, 12);
  const double e1 = std::abs(r1.mc_estimate - r1.predicted) / r1.predicted;
  const double e2 = std::abs(r2.mc_estimate - r2.predicted) / r2.predicted;
  return {e1 < 0.03 && e2 < 0.03, "relative error n=1 " + fmt(e1) + ", n=2 " + fmt(e2)};
}

Outcome parseval_rip() {
  double worst = 0.0;
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto r = check_pauli_rip(n, std::size_t(1) << n, std::size_t(1) << (2 * n), 20, 300 + n, PauliSelection::full);
    for (double x : r.ratios) worst = std::max(worst, std::abs(x - 1.0));
  }
  const std::vector<std::size_t> qs{8, 16, 32, 64};
  std::vector<double> medians;
  for (std::size_t q : qs) {
    std::vector<double> deltas;
    for (std::uint64_t rep = 0; rep < 20; ++rep)
      deltas.push_back(check_pauli_rip(3, 1, q, 20, derive_seed(q, rep)).empirical_delta);
    medians.push_back(median(deltas));
  }
  bool monotone = true;
  std::string trail;
  for (std::size_t i = 0; i < medians.size(); ++i) {
    if (i > 0 && medians[i] > medians[i - 1]) monotone = false;
    trail += (i ? " " : "") + fmt(medians[i]);
  }
  return {worst < 1e-10 && monotone, "full-set deviation " + fmt(worst) + ", median delta at Q=8..64: " + trail};
}

Outcome noiseless_recovery() {
  const PovmEnsemble ens = pauli_basis_ensemble(pauli_basis_indices(2));
  const auto truth = random_structured_state(StructureModel::low_rank(1), 4, 2024);
  const auto freqs = population_frequencies(truth, ens);
  const double pls = frobenius_distance(projected_least_squares(ens, freqs).state, truth).value;
  EstimatorConfig cfg;
  cfg.max_iters = 5000;
  cfg.stop_tol = 1e-14;
  const double ih = frobenius_distance(iht(ens, freqs, StructureModel::low_rank(1), cfg).state, truth).value;
  // Random start so the factored iterations do the work.
  Rng rng(31);
  const ComplexMatrix u0 = complex_gaussian(4, 1, rng);
  const double fp = frobenius_distance(factored_pgd(ens, freqs, 1, cfg, u0).state, truth).value;
  return {pls < 1e-6 && ih < 1e-6 && fp < 1e-6,
          "frobenius error pls " + fmt(pls) + ", iht " + fmt(ih) + ", factored_pgd " + fmt(fp)};
}

Outcome shot_scaling() {
  EstimatorConfig cfg;
  cfg.method = Method::pls;
  EnsembleSpec es;
  es.scheme = "design3";
  es.sites = 1;
  const auto truth = random_density(2, 8080);
  const std::vector<std::uint64_t> grid{100, 1000, 10000};
  const auto r = error_scaling_sweep(cfg, es, truth, grid, 50, 17);
  const double s = r.slope.value_or(NAN);
  return {r.slope && s >= -0.65 && s <= -0.35 && r.failures == 0, "slope " + fmt(s)};
}

Outcome gradient() {
  const PovmEnsemble ens = pauli_basis_ensemble(pauli_basis_indices(2));
  const MeasurementMap map(ens);
  double worst = 0.0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    const auto truth = random_density(4, 500 + t);
    const RealVector p = stack_frequencies(ens, population_frequencies(truth, ens));
    Rng rng(derive_seed(900, t));
    const ComplexMatrix u = complex_gaussian(4, 2, rng);
    const auto loss = [&](const ComplexMatrix& v) { return least_squares_loss(map, v * v.adjoint(), p); };
    const ComplexMatrix analytic = 2.0 * factored_gradient(map, p, u);
    ComplexMatrix fd(u.rows(), u.cols());
    const double h = 1e-6;
    for (Eigen::Index i = 0; i < u.rows(); ++i) {
      for (Eigen::Index j = 0; j < u.cols(); ++j) {
        double parts[2];
        for (int k = 0; k < 2; ++k) {
          const cplx step = k == 0 ? cplx(h, 0.0) : cplx(0.0, h);
          ComplexMatrix up = u, dn = u;
          up(i, j) += step;
          dn(i, j) -= step;
          parts[k] = (loss(up) - loss(dn)) / (2.0 * h);
        }
        fd(i, j) = cplx(parts[0], parts[1]);
      }
    }
    worst = std::max(worst, (fd - analytic).norm() / analytic.norm());
  }
  return {worst < 1e-5, "max relative error " + fmt(worst)};
}

Outcome mpo_round_trip() {
  const std::vector<std::size_t> bonds{2, 2};
  double worst = 0.0;
  for (std::uint64_t s = 0; s < 20; ++s) {
    const auto rho = random_structured_state(StructureModel::mpo(bonds), 8, 60 + s);
    const auto back = mpo_to_density(project_mpo(rho.matrix(), 2, bonds));
    worst = std::max(worst, (back.matrix() - rho.matrix()).cwiseAbs().maxCoeff());
  }
  return {worst < 1e-10, "max entry error " + fmt(worst)};
}

std::map<std::string, std::string> snapshot_dir(const fs::path& dir) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (e.path().filename() == "result.json") {
      auto j = nlohmann::json::parse(text);
      j.erase("timings_ms");
      text = j.dump();
    }
    files[e.path().filename().string()] = text;
  }
  return files;
}

Outcome determinism(const std::string& tool) {
  const fs::path dir = fs::temp_directory_path() / "qst_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ofstream(dir / "spec.json") << R"({
  "version": 1, "name": "two-qubit", "seed": 2718,
  "state": {"sites": 2, "structure": {"kind": "low_rank", "rank": 1}},
  "ensemble": {"scheme": "haar", "sites": 2, "settings": 30},
  "shots": 500,
  "estimator": {"method": "iht", "structure": {"kind": "low_rank", "rank": 1}}
})";
  const std::string cmd = tool + " run " + (dir / "spec.json").string() + " --out " + (dir / "out").string() +
                          " > /dev/null";
  if (std::system(cmd.c_str()) != 0) return {false, "first run failed"};
  const auto first = snapshot_dir(dir / "out");
  fs::remove_all(dir / "out");
  if (std::system(cmd.c_str()) != 0) return {false, "second run failed"};
  const auto second = snapshot_dir(dir / "out");
  fs::remove_all(dir);
  return {!first.empty() && first == second, std::to_string(first.size()) + " artifacts compared"};
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: qst_acceptance <path to qst>\n");
    return 2;
  }
  const std::string tool = argv[1];
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"design isometry", isometry},
      {"pauli reconstruction", pauli_reconstruction},
      {"shadow channel inversion", channel_inversion},
      {"snapshot unbiasedness", snapshot_unbiasedness},
      {"haar expectation", haar_expectation},
      {"parseval rip", parseval_rip},
      {"noiseless recovery", noiseless_recovery},
      {"shot scaling", shot_scaling},
      {"gradient correctness", gradient},
      {"mpo round trip", mpo_round_trip},
      {"determinism", [&] { return determinism(tool); }},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %s: %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.pass ? 0 : 1;
  }
  std::printf("%d of %zu criteria passed\n", int(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
