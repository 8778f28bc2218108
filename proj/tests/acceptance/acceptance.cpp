// Acceptance suite: `mmdd_acceptance [criterion ...]` runs the listed criteria
// (all when none are given) and prints one PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "mmdd/control/costs.hpp"
#include "mmdd/control/mixture.hpp"
#include "mmdd/control/sde.hpp"
#include "mmdd/control/trilevel.hpp"
#include "mmdd/coreset/selectors.hpp"
#include "mmdd/diffusion/denoiser.hpp"
#include "mmdd/diffusion/noising.hpp"
#include "mmdd/diffusion/sampler.hpp"
#include "mmdd/eval/metrics.hpp"
#include "mmdd/experiment/pipeline.hpp"
#include "mmdd/minimax/finetune.hpp"
#include "mmdd/minimax/losses.hpp"
#include "mmdd/minimax/objective.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace mmdd;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

// ---------------------------------------------------------------- 1
// Relative error of a gradient vector against central differences, with the
// denominator floored at 1e-6 so that near-zero gradients are judged on an
// absolute scale.
constexpr double kGradientFloor = 1e-6;

Outcome gradient_fidelity() {
  DenoiserConfig dc;
  dc.dimension = 3;
  dc.num_classes = 2;
  dc.num_steps = 100;
  dc.time_features = 4;
  dc.class_embedding_dim = 2;
  dc.hidden_width = 10;
  dc.hidden_layers = 1;
  const NoiseSchedule schedule = make_noise_schedule(100, ScheduleKind::linear);
  MinimaxConfig cfg;
  cfg.lambda_r = 0.3;
  cfg.lambda_d = 0.7;
  cfg.memory_capacity = 6;

  std::mt19937_64 gen(2024);
  std::uniform_int_distribution<int> step(1, 100), label(0, 1);
  const double h = 1e-5;
  double worst = 0.0;
  long params = 0;
  const std::vector<std::pair<const char*, TermWeights>> terms{
      {"simple", {1.0, 0.0, 0.0}}, {"repr", {0.0, 1.0, 0.0}}, {"div", {0.0, 0.0, 1.0}}, {"total", TermWeights::from(cfg)}};
  std::map<std::string, double> per_term;

  for (int instance = 0; instance < 20; ++instance) {
    Denoiser model(dc, 100 + instance);
    params = static_cast<long>(model.parameters().size());
    for (double& p : model.parameters()) p += std::normal_distribution<double>(0.0, 0.3)(gen);

    TrainingBatch batch;
    batch.z0 = testing::random_matrix(gen, 5, 3);
    batch.eps = testing::random_matrix(gen, 5, 3);
    for (int i = 0; i < 5; ++i) {
      batch.t.push_back(step(gen));
      batch.labels.push_back(label(gen));
    }
    MemoryBank real(cfg.memory_capacity, 2, 3, cfg.partition), pred(cfg.memory_capacity, 2, 3, cfg.partition);
    Labels bank_labels{0, 0, 0, 1, 1, 1};
    real.enqueue(testing::random_matrix(gen, 6, 3), bank_labels);
    pred.enqueue(testing::random_matrix(gen, 6, 3), bank_labels);

    for (const auto& [name, weights] : terms) {
      std::vector<double> grad(model.parameters().size(), 0.0);
      evaluate_objective(model, batch, schedule, real, pred, cfg, weights, grad);
      Denoiser probe = model;
      double diff = 0.0, ref = 0.0;
      for (std::size_t k = 0; k < grad.size(); ++k) {
        const double saved = probe.parameters()[k];
        probe.parameters()[k] = saved + h;
        const double up = evaluate_objective(probe, batch, schedule, real, pred, cfg, weights, {}).total;
        probe.parameters()[k] = saved - h;
        const double down = evaluate_objective(probe, batch, schedule, real, pred, cfg, weights, {}).total;
        probe.parameters()[k] = saved;
        const double fd = (up - down) / (2.0 * h);
        diff += (grad[k] - fd) * (grad[k] - fd);
        ref += fd * fd;
      }
      const double rel = std::sqrt(diff) / std::max(std::sqrt(ref), kGradientFloor);
      per_term[name] = std::max(per_term[name], rel);
      worst = std::max(worst, rel);
    }
  }
  Outcome out;
  out.pass = worst <= 1e-4 && params <= 200;
  std::ostringstream s;
  s << params << " parameters, max relative error";
  for (const auto& [name, v] : per_term) s << " " << name << "=" << fmt("%.2e", v);
  out.detail = s.str();
  return out;
}

// ---------------------------------------------------------------- 2
Outcome oracle_equivalence() {
  std::mt19937_64 gen(7);
  std::uniform_int_distribution<int> fill(0, 256), rows(1, 8), classes(1, 4), dims(2, 6);
  long mismatches = 0, checked = 0, largest = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const int c = classes(gen), d = dims(gen);
    const BankPartition partition = trial % 5 == 4 ? BankPartition::global : BankPartition::per_class;
    MemoryBank real(256, c, d, partition), pred(256, c, d, partition);
    for (int label = 0; label < c; ++label) {
      const int n = fill(gen);
      largest = std::max<long>(largest, n);
      if (n == 0) continue;
      real.enqueue(testing::random_matrix(gen, n, d), Labels(n, label));
      pred.enqueue(testing::random_matrix(gen, n, d), Labels(n, label));
    }
    const int n = rows(gen);
    const Matrix z = testing::random_matrix(gen, n, d);
    Labels labels(n);
    for (int& l : labels) l = std::uniform_int_distribution<int>(0, c - 1)(gen);

    const BankTerm r = repr_loss(z, real, labels);
    const BankTerm v = div_loss(z, pred, labels);
    for (int i = 0; i < n; ++i) {
      for (const auto& [term, bank, minimize] :
           {std::tuple{&r, &real, true}, std::tuple{&v, &pred, false}}) {
        const auto& entries = bank->entries(labels[i]);
        int best = -1;
        double best_value = 0.0;
        for (std::size_t m = 0; m < entries.size(); ++m) {
          const double s = testing::oracle_cosine(z.row(i).transpose(), entries[m]);
          if (best < 0 || (minimize ? s < best_value : s > best_value)) best = static_cast<int>(m), best_value = s;
        }
        ++checked;
        if (term->selected[i] != best) ++mismatches;
      }
    }
  }
  Outcome out;
  out.pass = mismatches == 0;
  out.detail = std::to_string(checked) + " selections over 1000 trials (banks up to " + std::to_string(largest) +
               " entries), " + std::to_string(mismatches) + " mismatches";
  return out;
}

// ---------------------------------------------------------------- 3
Outcome noising_statistics() {
  const NoiseSchedule schedule = make_noise_schedule(1000, ScheduleKind::linear);
  const std::vector<std::pair<Vector, int>> cases{
      {(Vector(3) << 1.0, -2.0, 0.5).finished(), 1},
      {(Vector(3) << 3.0, 0.0, -1.0).finished(), 250},
      {(Vector(3) << -0.5, 2.5, 4.0).finished(), 900}};
  const int draws = 100000;
  std::mt19937_64 gen(11);
  std::normal_distribution<double> normal;
  double worst = 0.0;
  for (const auto& [z0, t] : cases) {
    Matrix zt(draws, 3);
    for (int i = 0; i < draws; ++i) {
      Vector eps(3);
      for (int j = 0; j < 3; ++j) eps[j] = normal(gen);
      zt.row(i) = forward_noise(z0, t, eps, schedule).transpose();
    }
    const double ab = schedule.alpha_bar[t];
    const double var = 1.0 - ab;
    for (int j = 0; j < 3; ++j) {
      const double mean = zt.col(j).mean();
      const double sample_var = (zt.col(j).array() - mean).square().sum() / (draws - 1);
      const double mean_se = std::sqrt(var / draws);
      const double var_se = var * std::sqrt(2.0 / (draws - 1));
      worst = std::max(worst, std::abs(mean - std::sqrt(ab) * z0[j]) / mean_se);
      worst = std::max(worst, std::abs(sample_var - var) / var_se);
    }
  }
  return {worst <= 4.0, "largest deviation " + fmt("%.2f", worst) + " standard errors"};
}

// ---------------------------------------------------------------- 4
Outcome coreset_oracles() {
  std::mt19937_64 gen(19);
  std::uniform_int_distribution<int> size(4, 12);
  int herding_ok = 0, kcenter_ok = 0;
  double worst_ratio = 0.0;
  for (int instance = 0; instance < 50; ++instance) {
    const int n = size(gen);
    const Matrix pts = testing::random_matrix(gen, n, 2);
    const FeatureSet fs = FeatureSet::from(pts, Labels(n, 0));
    herding_ok += herding_select(fs, 1).by_class[0][0] == oracle::mean_nearest(pts);
    bool ok = true;
    for (int k = 1; k <= 3; ++k) {
      const Selection sel = kcenter_select(fs, k, instance);
      std::vector<Eigen::Index> rows(sel.by_class[0].begin(), sel.by_class[0].end());
      const double optimum = oracle::optimal_covering_radius(pts, k);
      const double radius = covering_radius(pts, rows);
      worst_ratio = std::max(worst_ratio, radius / optimum);
      ok = ok && radius <= 2.0 * optimum;
    }
    kcenter_ok += ok;
  }
  return {herding_ok == 50 && kcenter_ok == 50,
          "herding " + std::to_string(herding_ok) + "/50, k-center " + std::to_string(kcenter_ok) +
              "/50 (worst radius ratio " + fmt("%.3f", worst_ratio) + ")"};
}

// ---------------------------------------------------------------- 5
Outcome metric_oracles() {
  std::mt19937_64 gen(23);
  double mmd_err = 0.0, self_mmd = 0.0, fid_err = 0.0, self_fid = 0.0;
  int prdc_mismatch = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = testing::random_matrix(gen, 15 + trial, 3);
    const Matrix b = testing::random_matrix(gen, 12, 3, 1.5).array() + 0.4;
    const double h = 0.5 + 0.1 * trial;
    mmd_err = std::max(mmd_err, std::abs(mmd_rbf(a, b, h) - oracle::mmd(a, b, h)));
    self_mmd = std::max(self_mmd, std::abs(mmd_rbf(a, a)));

    const Matrix r8 = testing::random_matrix(gen, 8, 2), g8 = testing::random_matrix(gen, 8, 2, 1.3);
    for (int k = 1; k <= 5; ++k) {
      const PrdcResult got = prdc(r8, g8, k), want = oracle::prdc(r8, g8, k);
      prdc_mismatch += got.precision != want.precision || got.recall != want.recall || got.density != want.density ||
                       got.coverage != want.coverage;
    }

    const Matrix fa = testing::random_matrix(gen, 40, 4), fb = testing::random_matrix(gen, 50, 4, 0.7);
    fid_err = std::max(fid_err, std::abs(gaussian_fid(fa, fb) - oracle::fid(fa, fb)));
    self_fid = std::max(self_fid, std::abs(gaussian_fid(fa, fa)));
  }
  const bool pass = mmd_err <= 1e-10 && self_mmd <= 1e-12 && prdc_mismatch == 0 && fid_err <= 1e-6 && self_fid <= 1e-8;
  return {pass, "mmd error " + fmt("%.1e", mmd_err) + ", mmd(A,A) " + fmt("%.1e", self_mmd) + ", prdc mismatches " +
                    std::to_string(prdc_mismatch) + "/100, fid error " + fmt("%.1e", fid_err) + ", fid(A,A) " +
                    fmt("%.1e", self_fid)};
}

// ---------------------------------------------------------------- 6
Outcome follmer_sampling() {
  const GaussianMixture mix = GaussianMixture::make({0.5, 0.5}, {Vector::Constant(1, -2.0), Vector::Constant(1, 2.0)});
  const DriftFn drift = [&](const Vector& z, double t) { return follmer_drift(z, t, mix); };
  const TrajectoryBundle bundle = simulate_sde(drift, Vector::Zero(1), 1000, 10000, 31, {.record_paths = false});
  Rng rng(derive_seed(31, {1}));
  const Matrix direct = mix.sample(10000, rng);
  std::vector<double> a(10000), b(10000);
  for (int i = 0; i < 10000; ++i) a[i] = bundle.terminal(i, 0), b[i] = direct(i, 0);
  const double w1 = wasserstein1_1d(a, b);

  const oracle::Quadrature q = oracle::gauss_hermite(80);
  std::mt19937_64 gen(37);
  std::uniform_real_distribution<double> zs(-4.0, 4.0), ts(0.0, 0.99);
  double drift_err = 0.0;
  for (int i = 0; i < 100; ++i) {
    const double z = zs(gen), t = ts(gen);
    drift_err = std::max(drift_err, std::abs(follmer_drift(Vector::Constant(1, z), t, mix)[0] -
                                             oracle::drift_1d(z, t, mix, q)));
  }
  return {w1 <= 0.05 && drift_err <= 1e-5,
          "W1 " + fmt("%.4f", w1) + ", max drift error " + fmt("%.1e", drift_err)};
}

// ---------------------------------------------------------------- 7
Matrix polar_grid(const TrilevelInstance& inst) {
  const int m = inst.radial_resolution, a = inst.angular_resolution;
  Matrix g(static_cast<Eigen::Index>(m) * a, 2);
  for (int j = 0; j < m; ++j)
    for (int k = 0; k < a; ++k) {
      const double r = 2.0 * inst.radius * j / (m - 1);
      const double th = 2.0 * std::numbers::pi * k / a;
      g(static_cast<Eigen::Index>(j) * a + k, 0) = r * std::cos(th);
      g(static_cast<Eigen::Index>(j) * a + k, 1) = r * std::sin(th);
    }
  return g;
}

Matrix on_circle(const std::vector<double>& degrees) {
  Matrix m(static_cast<Eigen::Index>(degrees.size()), 2);
  for (std::size_t i = 0; i < degrees.size(); ++i) {
    const double th = degrees[i] * std::numbers::pi / 180.0;
    m.row(static_cast<Eigen::Index>(i)) << std::cos(th), std::sin(th);
  }
  return m;
}

Outcome trilevel_no_tradeoff() {
  std::vector<TrilevelInstance> instances(3);
  instances[0].samples = on_circle({-6, -4, -2, 0, 2, 4, 6});
  instances[0].level_tolerance = 0.02;

  std::vector<double> two_clusters;
  for (int k = -3; k <= 3; ++k) two_clusters.push_back(30 + 2 * k), two_clusters.push_back(150 + 3 * k);
  instances[1].samples = on_circle(two_clusters) * 2.5;
  instances[1].n_particles = 3;
  instances[1].q_tilde = 0.1;
  instances[1].radius = 1.5;
  instances[1].level_tolerance = 0.05;

  std::vector<double> uniform;
  for (int k = 0; k < 360; ++k) uniform.push_back(k);
  instances[2].samples = on_circle(uniform);

  int ok = 0;
  std::ostringstream s;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const TrilevelInstance& inst = instances[i];
    const TrilevelSolution sol = solve_trilevel_toy(inst);
    const Matrix grid = polar_grid(inst);
    double grid_inner_min = INFINITY;
    for (Eigen::Index p = 0; p < grid.rows(); ++p) {
      const double e = grid.row(p).norm() - inst.radius;
      grid_inner_min = std::min(grid_inner_min, e * e);
    }
    grid_inner_min *= inst.n_particles;
    const auto truth = oracle::trilevel(grid, inst.samples, inst.n_particles, inst.q_tilde, inst.radius,
                                        inst.radius_tolerance, inst.level_tolerance);
    const bool inner_ok = sol.inner_value <= 1e-6 && std::abs(sol.inner_value - grid_inner_min) <= 1e-6;
    const bool top_ok = sol.top_value == truth.top_value;
    ok += inner_ok && top_ok;
    s << (i ? "; " : "") << "instance " << i + 1 << ": inner " << fmt("%.1e", sol.inner_value) << ", top "
      << fmt("%.6f", sol.top_value) << " vs oracle " << fmt("%.6f", truth.top_value);
  }
  return {ok == 3, s.str()};
}

// ---------------------------------------------------------------- 8
// Toy distillation task: a single class drawn from an 8-mode ring mixture.
Matrix ring_mixture(int n, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> mode(0, 7);
  std::normal_distribution<double> noise(0.0, 0.3);
  Matrix x(n, 2);
  for (int i = 0; i < n; ++i) {
    const double th = 2.0 * std::numbers::pi * mode(gen) / 8.0;
    x(i, 0) = 4.0 * std::cos(th) + noise(gen);
    x(i, 1) = 4.0 * std::sin(th) + noise(gen);
  }
  return x;
}

Outcome directional_trend() {
  struct Variant {
    const char* name;
    ReprMode repr;
    DivMode div;
  };
  const std::vector<Variant> variants{{"base", ReprMode::off, DivMode::off},
                                      {"+div", ReprMode::off, DivMode::minimax},
                                      {"full", ReprMode::minimax, DivMode::minimax}};
  const NoiseSchedule schedule = make_noise_schedule(1000, ScheduleKind::linear);
  std::map<std::string, PrdcResult> mean_prdc;
  std::map<std::string, double> mean_mmd;
  for (int seed = 0; seed < 3; ++seed) {
    std::mt19937_64 gen(500 + seed);
    const Matrix train = ring_mixture(800, gen);
    const Matrix reference = ring_mixture(1000, gen);
    DenoiserConfig dc;
    dc.dimension = 2;
    dc.num_classes = 1;
    dc.num_steps = 1000;
    MinimaxConfig pre;
    pre.repr = ReprMode::off;
    pre.div = DivMode::off;
    pre.epochs = 600;
    pre.batch_size = 32;
    const FinetuneResult pretrained = finetune(Denoiser(dc, seed), train, Labels(800, 0), schedule, pre, 10 + seed);
    const Matrix subset = train.topRows(40);
    for (const Variant& v : variants) {
      MinimaxConfig ft;
      ft.repr = v.repr;
      ft.div = v.div;
      ft.lambda_r = 0.05;
      ft.lambda_d = 1.0;
      ft.epochs = 100;
      const FinetuneResult tuned = finetune(pretrained.model, subset, Labels(40, 0), schedule, ft, 20 + seed);
      const Matrix generated = ancestral_sample(tuned.model, schedule, 0, 50, 100, 30 + seed);
      const PrdcResult p = prdc(reference, generated);
      PrdcResult& acc = mean_prdc[v.name];
      acc.precision += p.precision / 3.0;
      acc.recall += p.recall / 3.0;
      acc.density += p.density / 3.0;
      acc.coverage += p.coverage / 3.0;
      mean_mmd[v.name] += mmd_rbf(reference, generated) / 3.0;
    }
  }
  const PrdcResult& base = mean_prdc["base"];
  const PrdcResult& div = mean_prdc["+div"];
  const PrdcResult& full = mean_prdc["full"];
  const double recall_gain = div.recall / base.recall - 1.0;
  const double coverage_gain = div.coverage / base.coverage - 1.0;
  const bool a = recall_gain >= 0.10 && coverage_gain >= 0.10;
  const bool b = full.precision >= div.precision - 2.0;
  const bool c = mean_mmd["full"] < mean_mmd["base"];
  std::ostringstream s;
  s << "(a) recall " << fmt("%.1f", base.recall) << "->" << fmt("%.1f", div.recall) << " ("
    << fmt("%+.1f%%", 100 * recall_gain) << "), coverage " << fmt("%.1f", base.coverage) << "->"
    << fmt("%.1f", div.coverage) << " (" << fmt("%+.1f%%", 100 * coverage_gain) << ") " << (a ? "ok" : "FAILED")
    << "; (b) precision " << fmt("%.1f", div.precision) << "->" << fmt("%.1f", full.precision) << " "
    << (b ? "ok" : "FAILED") << "; (c) mmd base " << fmt("%.4f", mean_mmd["base"]) << " full "
    << fmt("%.4f", mean_mmd["full"]) << " " << (c ? "ok" : "FAILED");
  return {a && b && c, s.str()};
}

// ---------------------------------------------------------------- 9
Outcome ablation_identity() {
  testing::TempDir dir("ablation");
  ExperimentConfig cfg;
  cfg.name = "ablation";
  cfg.seed = 5;
  cfg.output = (dir / "run").string();
  cfg.dataset.num_classes = 3;
  cfg.dataset.n_per_class = 60;
  cfg.dataset.n_test_per_class = 20;
  cfg.ipc = {10};
  cfg.methods = {Method::diffusion_base, Method::diffusion_minimax};
  cfg.minimax.lambda_r = 0.0;
  cfg.minimax.lambda_d = 0.0;
  cfg.minimax.epochs = 4;
  cfg.diffusion.steps = 200;
  cfg.diffusion.sampling_steps = 25;
  cfg.diffusion.pretrain_epochs = 20;
  run_distill(cfg);

  const fs::path root = cfg.output;
  std::istringstream trace(testing::slurp(root / kCheckpointDir / "diffusion_minimax_loss.csv"));
  std::string line;
  std::getline(trace, line);
  long rows = 0, differing = 0;
  while (std::getline(trace, line)) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    ++rows;
    differing += cells.size() != 5 || cells[1] != cells[4];
  }
  const bool same_samples = testing::slurp(root / kSurrogateDir / surrogate_file(Method::diffusion_minimax, 10)) ==
                            testing::slurp(root / kSurrogateDir / surrogate_file(Method::diffusion_base, 10));
  return {rows > 0 && differing == 0 && same_samples,
          std::to_string(rows) + " trace rows, " + std::to_string(differing) + " with total != simple, samples " +
              (same_samples ? "identical" : "DIFFER")};
}

// ---------------------------------------------------------------- 10
Outcome end_to_end() {
  testing::TempDir dir("e2e");
  const fs::path config = testing::source_dir() / "configs" / "default.json";
  double slowest = 0.0;
  std::vector<std::string> aggregates;
  for (const char* run : {"first", "second"}) {
    const std::string cmd = std::string("\"") + MMDD_CLI_PATH + "\" all --config \"" + config.string() + "\" --out \"" +
                            (dir / run).string() + "\" > \"" + (dir / (std::string(run) + ".log")).string() + "\" 2>&1";
    const auto start = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    if (status != 0) return {false, std::string("`all` failed on the ") + run + " run: " + testing::slurp(dir / (std::string(run) + ".log"))};
    aggregates.push_back(testing::slurp(dir / run / kReportDir / "aggregate.csv"));
  }
  const bool identical = !aggregates[0].empty() && aggregates[0] == aggregates[1];
  return {identical && slowest < 600.0, std::string("aggregate CSV ") + (identical ? "byte-identical" : "DIFFERS") +
                                            ", slowest run " + fmt("%.1f", slowest) + " s"};
}

const std::vector<std::pair<const char*, std::function<Outcome()>>> kCriteria{
    {"gradient fidelity", gradient_fidelity},
    {"minimax oracle equivalence", oracle_equivalence},
    {"forward-noising statistics", noising_statistics},
    {"coreset oracles", coreset_oracles},
    {"metric oracles", metric_oracles},
    {"Follmer sampling", follmer_sampling},
    {"tri-level no trade-off", trilevel_no_tradeoff},
    {"directional minimax trend", directional_trend},
    {"ablation identity", ablation_identity},
    {"end-to-end reproducibility", end_to_end},
};

}  // namespace

int main(int argc, char** argv) {
  std::vector<int> selected;
  for (int i = 1; i < argc; ++i) {
    const int c = std::atoi(argv[i]);
    if (c < 1 || c > static_cast<int>(kCriteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s' (expected 1-%zu)\n", argv[i], kCriteria.size());
      return 2;
    }
    selected.push_back(c);
  }
  if (selected.empty())
    for (int c = 1; c <= static_cast<int>(kCriteria.size()); ++c) selected.push_back(c);

  int failures = 0;
  for (int c : selected) {
    const auto& [name, run] = kCriteria[c - 1];
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
      out = run();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("criterion %d: %s %s: %s (%.1f s)\n", c, out.pass ? "PASS" : "FAIL", name, out.detail.c_str(), seconds);
    std::fflush(stdout);
    failures += !out.pass;
  }
  return failures == 0 ? 0 : 1;
}
