#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>

#include "mmdd/diffusion/noising.hpp"
#include "mmdd/error.hpp"
#include "mmdd/minimax/finetune.hpp"
#include "mmdd/minimax/losses.hpp"
#include "mmdd/minimax/objective.hpp"
#include "mmdd/minimax/similarity.hpp"
#include "mmdd/random.hpp"
#include "support.hpp"

using namespace mmdd;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::ok;
}

Matrix rows(std::initializer_list<std::initializer_list<double>> values) {
  Matrix m(static_cast<Eigen::Index>(values.size()), static_cast<Eigen::Index>(values.begin()->size()));
  Eigen::Index i = 0;
  for (const auto& r : values) {
    Eigen::Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

Vector vec(std::initializer_list<double> values) {
  Vector v(static_cast<Eigen::Index>(values.size()));
  Eigen::Index i = 0;
  for (double x : values) v[i++] = x;
  return v;
}

DenoiserConfig tiny(int classes, int steps) {
  DenoiserConfig dc;
  dc.dimension = 2;
  dc.num_classes = classes;
  dc.num_steps = steps;
  dc.time_features = 4;
  dc.class_embedding_dim = 2;
  dc.hidden_width = 8;
  dc.hidden_layers = 1;
  return dc;
}

}  // namespace

TEST_CASE("cosine similarity") {
  const Vector v = vec({0.3, -2.0, 1.5});
  CHECK(cosine_sim(v, v) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(cosine_sim(vec({1, 0}), vec({0, 1})) == 0.0);
  CHECK(std::abs(cosine_sim(vec({1, 0}), vec({1, 1})) - 0.70710678) <= 1e-8);
  CHECK(cosine_sim(Vector::Zero(2), vec({1, 0})) == 0.0);
  CHECK(code_of([] { cosine_sim(vec({1, 0}), vec({1, 0, 0})); }) == ErrorCode::invalid_argument);

  std::mt19937_64 gen(4);
  for (int trial = 0; trial < 50; ++trial) {
    const Matrix m = testing::random_matrix(gen, 2, 5);
    const Vector a = m.row(0).transpose(), b = m.row(1).transpose();
    CHECK(std::abs(cosine_sim(a, b) - testing::oracle_cosine(a, b)) <= 1e-14);
    // Central differences of the gradient.
    const Vector g = cosine_sim_grad(a, b);
    for (int k = 0; k < 5; ++k) {
      Vector p = a, q = a;
      p[k] += 1e-6;
      q[k] -= 1e-6;
      CHECK(std::abs((cosine_sim(p, b) - cosine_sim(q, b)) / 2e-6 - g[k]) <= 1e-7);
    }
  }
}

TEST_CASE("naive representativeness") {
  const Matrix real = rows({{1, 0}, {3, 0}});
  CHECK(repr_loss_naive(rows({{2, 0}}), real) == doctest::Approx(-1.0));
  CHECK(repr_loss_naive(rows({{0, 1}}), real) == doctest::Approx(0.0));
  CHECK(code_of([] { repr_loss_naive(rows({{1, 0}}), Matrix(0, 2)); }) == ErrorCode::empty_input);

  std::mt19937_64 gen(9);
  const Matrix z_hat = testing::random_matrix(gen, 7, 3);
  const Matrix batch = testing::random_matrix(gen, 11, 3);
  Vector mean = Vector::Zero(3);
  for (Eigen::Index i = 0; i < batch.rows(); ++i) mean += batch.row(i).transpose();
  mean /= static_cast<double>(batch.rows());
  double oracle = 0.0;
  for (Eigen::Index i = 0; i < z_hat.rows(); ++i) oracle += testing::oracle_cosine(z_hat.row(i).transpose(), mean);
  oracle = -oracle / static_cast<double>(z_hat.rows());
  CHECK(std::abs(repr_loss_naive(z_hat, batch) - oracle) <= 1e-14);
}

TEST_CASE("bank criteria on small banks") {
  MemoryBank bank(8, 1, 2);
  bank.enqueue(rows({{1, 0}}), {0});
  CHECK(repr_loss(rows({{1, 0}}), bank, {0}).value == doctest::Approx(-1.0));
  bank.enqueue(rows({{0, 1}}), {0});
  const BankTerm two = repr_loss(rows({{1, 0}}), bank, {0});
  CHECK(two.value == doctest::Approx(0.0));
  CHECK(two.selected[0] == 1);

  const Vector z = vec({0.6, -0.8});
  MemoryBank self(4, 1, 2);
  self.enqueue(z.transpose(), {0});
  CHECK(div_loss(z.transpose(), self, {0}).value == doctest::Approx(1.0));
  MemoryBank anti(4, 1, 2);
  anti.enqueue((-z).transpose(), {0});
  CHECK(div_loss(z.transpose(), anti, {0}).value == doctest::Approx(-1.0));
}

TEST_CASE("empty queues contribute zero and are counted") {
  MemoryBank bank(4, 2, 2);
  bank.enqueue(rows({{1, 0}}), {0});
  const BankTerm term = repr_loss(rows({{0, 1}, {1, 1}}), bank, {0, 1}, true);
  CHECK(term.empty_count == 1);
  CHECK(term.selected[1] == -1);
  CHECK(term.value == doctest::Approx(0.0));
  CHECK(term.grad.row(1).norm() == 0.0);
  const BankTerm none = div_loss(rows({{0, 1}}), MemoryBank(4, 2, 2), {1});
  CHECK(none.value == 0.0);
  CHECK(none.empty_count == 1);
}

TEST_CASE("bank selection equals exhaustive scan") {
  std::mt19937_64 gen(31);
  for (int size : {1, 2, 17, 64, 256}) {
    MemoryBank bank(256, 1, 4);
    bank.enqueue(testing::random_matrix(gen, size, 4), Labels(size, 0));
    const Matrix z_hat = testing::random_matrix(gen, 5, 4);
    const BankTerm r = repr_loss(z_hat, bank, Labels(5, 0));
    const BankTerm d = div_loss(z_hat, bank, Labels(5, 0));
    double r_sum = 0.0, d_sum = 0.0;
    for (Eigen::Index i = 0; i < 5; ++i) {
      int lo = -1, hi = -1;
      double lo_v = 2.0, hi_v = -2.0;
      for (int m = 0; m < size; ++m) {
        const double s = testing::oracle_cosine(z_hat.row(i).transpose(), bank.entries(0)[m]);
        if (s < lo_v) lo_v = s, lo = m;
        if (s > hi_v) hi_v = s, hi = m;
      }
      CHECK(r.selected[i] == lo);
      CHECK(d.selected[i] == hi);
      r_sum += lo_v;
      d_sum += hi_v;
    }
    CHECK(std::abs(r.value + r_sum / 5.0) <= 1e-14);
    CHECK(std::abs(d.value - d_sum / 5.0) <= 1e-14);
  }
}

TEST_CASE("criteria are invariant to positive rescaling of bank entries") {
  std::mt19937_64 gen(12);
  const Matrix entries = testing::random_matrix(gen, 20, 3);
  Matrix scaled = entries;
  std::uniform_real_distribution<double> factor(0.1, 10.0);
  for (Eigen::Index i = 0; i < scaled.rows(); ++i) scaled.row(i) *= factor(gen);
  MemoryBank a(32, 1, 3), b(32, 1, 3);
  a.enqueue(entries, Labels(20, 0));
  b.enqueue(scaled, Labels(20, 0));
  const Matrix z_hat = testing::random_matrix(gen, 6, 3);
  CHECK(repr_loss(z_hat, a, Labels(6, 0)).value == doctest::Approx(repr_loss(z_hat, b, Labels(6, 0)).value));
  CHECK(div_loss(z_hat, a, Labels(6, 0)).value == doctest::Approx(div_loss(z_hat, b, Labels(6, 0)).value));
}

TEST_CASE("total loss weighting") {
  MinimaxConfig cfg;
  CHECK(total_loss(1.0, -1.0, 1.0, cfg) == doctest::Approx(1.006).epsilon(1e-14));
  cfg.lambda_r = cfg.lambda_d = 0.0;
  CHECK(total_loss(0.731, -0.4, 0.9, cfg) == 0.731);
  CHECK(code_of([&] { total_loss(std::nan(""), 0.0, 0.0, cfg); }) == ErrorCode::numeric);
  CHECK(code_of([&] { total_loss(1.0, INFINITY, 0.0, cfg); }) == ErrorCode::numeric);

  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int trial = 0; trial < 100; ++trial) {
    MinimaxConfig c;
    c.lambda_r = std::abs(u(gen));
    c.lambda_d = std::abs(u(gen));
    const double s = u(gen), r = u(gen), d = u(gen);
    CHECK(std::abs(total_loss(s, r, d, c) - (s + c.lambda_r * r + c.lambda_d * d)) <= 1e-14);
    CHECK(std::abs(total_loss(s + 1.0, r, d, c) - total_loss(s, r, d, c) - 1.0) <= 1e-12);
    CHECK(std::abs(total_loss(s, r + 1.0, d, c) - total_loss(s, r, d, c) - c.lambda_r) <= 1e-12);
    CHECK(std::abs(total_loss(s, r, d + 1.0, c) - total_loss(s, r, d, c) - c.lambda_d) <= 1e-12);
  }
}

TEST_CASE("bank FIFO semantics") {
  MemoryBank bank(2, 1, 1);
  CHECK(bank.total_size() == 0);
  bank.enqueue(rows({{1}}), {0});
  CHECK(bank.size(0) == 1);
  bank.enqueue(rows({{2}, {3}}), {0, 0});
  REQUIRE(bank.size(0) == 2);
  CHECK(bank.entries(0)[0][0] == 2.0);
  CHECK(bank.entries(0)[1][0] == 3.0);
  CHECK(code_of([&] { bank.enqueue(rows({{1}}), {1}); }) == ErrorCode::invalid_argument);
  CHECK(code_of([&] { bank.enqueue(rows({{NAN}}), {0}); }) == ErrorCode::invalid_argument);

  MemoryBank global(3, 2, 1, BankPartition::global);
  global.enqueue(rows({{1}, {2}}), {0, 1});
  CHECK(global.size(0) == 2);
  CHECK(global.size(1) == 2);
}

TEST_CASE("interleaved enqueues match a two-list replay") {
  std::mt19937_64 gen(77);
  const int capacity = 5;
  MemoryBank bank(capacity, 2, 2);
  std::map<int, std::deque<Vector>> replay;
  std::uniform_int_distribution<int> label(0, 1), count(1, 4);
  for (int step = 0; step < 40; ++step) {
    const int n = count(gen);
    const Matrix batch = testing::random_matrix(gen, n, 2);
    Labels y(n);
    for (int i = 0; i < n; ++i) {
      y[i] = label(gen);
      replay[y[i]].push_back(batch.row(i).transpose());
      if (static_cast<int>(replay[y[i]].size()) > capacity) replay[y[i]].pop_front();
    }
    bank.enqueue(batch, y);
    for (int c = 0; c < 2; ++c) {
      REQUIRE(bank.size(c) == replay[c].size());
      for (std::size_t k = 0; k < replay[c].size(); ++k) CHECK(bank.entries(c)[k] == replay[c][k]);
    }
  }
}

TEST_CASE("stored entries are snapshots") {
  Matrix batch = rows({{1, 2}});
  MemoryBank bank(2, 1, 2);
  bank.enqueue(batch, {0});
  batch(0, 0) = 100.0;
  CHECK(bank.entries(0)[0][0] == 1.0);
}

TEST_CASE("fine-tune ablation, determinism and loss trace") {
  const NoiseSchedule s = make_noise_schedule(100, ScheduleKind::linear);
  std::mt19937_64 gen(6);
  const Matrix data = testing::random_matrix(gen, 24, 2);
  Labels y(24);
  for (int i = 0; i < 24; ++i) y[i] = i % 2;

  MinimaxConfig off;
  off.repr = ReprMode::off;
  off.div = DivMode::off;
  off.epochs = 2;
  const FinetuneResult plain = finetune(Denoiser(tiny(2, 100), 1), data, y, s, off, 5);
  REQUIRE(plain.trace.size() == 6);
  for (const auto& r : plain.trace) CHECK(r.total == r.simple);

  MinimaxConfig full;
  full.epochs = 2;
  const FinetuneResult a = finetune(Denoiser(tiny(2, 100), 1), data, y, s, full, 5);
  const FinetuneResult b = finetune(Denoiser(tiny(2, 100), 1), data, y, s, full, 5);
  REQUIRE(a.trace.size() == b.trace.size());
  for (std::size_t k = 0; k < a.trace.size(); ++k) {
    CHECK(a.trace[k].simple == b.trace[k].simple);
    CHECK(a.trace[k].repr == b.trace[k].repr);
    CHECK(a.trace[k].div == b.trace[k].div);
    CHECK(a.trace[k].total == b.trace[k].total);
  }
  CHECK(a.model.parameters() == b.model.parameters());
  // The first step has empty banks: every row is skipped by both terms.
  CHECK(a.trace[0].repr == 0.0);
  CHECK(a.trace[0].div == 0.0);
  CHECK(a.empty_repr_terms >= 8);

  testing::TempDir dir("trace");
  write_loss_trace_csv(dir / "loss.csv", a.trace);
  const std::string text = testing::slurp(dir / "loss.csv");
  CHECK(text.rfind("step,simple,repr,div,total\n", 0) == 0);
  CHECK(std::count(text.begin(), text.end(), '\n') == 7);
}

TEST_CASE("one step with capacity-1 banks keeps each class's last row") {
  const NoiseSchedule s = make_noise_schedule(50, ScheduleKind::linear);
  std::mt19937_64 gen(14);
  const Matrix data = testing::random_matrix(gen, 6, 2);
  const Labels y{0, 1, 2, 0, 1, 2};
  const Denoiser model(tiny(3, 50), 2);

  MinimaxConfig cfg;
  cfg.memory_capacity = 1;
  cfg.batch_size = 6;
  cfg.epochs = 1;
  const std::uint64_t seed = 41;
  const FinetuneResult result = finetune(model, data, y, s, cfg, seed);
  REQUIRE(result.trace.size() == 1);

  // Replay the single step: shuffle, draw t and eps, predict with the initial
  // parameters, then keep the last row of each class.
  Rng rng(seed);
  std::vector<Eigen::Index> order{0, 1, 2, 3, 4, 5};
  std::shuffle(order.begin(), order.end(), rng.engine());
  Matrix z0(6, 2);
  Labels by(6);
  std::vector<int> t(6);
  for (int i = 0; i < 6; ++i) {
    z0.row(i) = data.row(order[i]);
    by[i] = y[order[i]];
    t[i] = static_cast<int>(rng.uniform_int(1, 50));
  }
  const Matrix eps = rng.gaussian_matrix(6, 2);
  const Matrix zt = forward_noise(z0, t, eps, s);
  const Matrix eps_pred = model.predict_noise(zt, t, by);
  for (int c = 0; c < 3; ++c) {
    int last = -1;
    for (int i = 0; i < 6; ++i)
      if (by[i] == c) last = i;
    REQUIRE(result.real_bank.size(c) == 1);
    REQUIRE(result.pred_bank.size(c) == 1);
    CHECK(result.real_bank.entries(c)[0] == z0.row(last).transpose());
    const Vector z_hat = zt.row(last).transpose() - eps_pred.row(last).transpose();
    CHECK((result.pred_bank.entries(c)[0] - z_hat).cwiseAbs().maxCoeff() <= 1e-14);
  }
}

TEST_CASE("representativeness descent on a frozen single-entry bank") {
  const NoiseSchedule s = make_noise_schedule(100, ScheduleKind::linear);
  Denoiser model(tiny(1, 100), 3);
  MinimaxConfig cfg;
  cfg.lambda_r = 1.0;
  cfg.lambda_d = 0.0;
  cfg.div = DivMode::off;

  TrainingBatch batch;
  batch.z0 = rows({{0.5, -0.3}});
  batch.t = {40};
  batch.eps = rows({{0.2, 0.7}});
  batch.labels = {0};
  MemoryBank real(1, 1, 2);
  const Vector target = vec({-1.0, 2.0});
  real.enqueue(target.transpose(), {0});
  const MemoryBank pred(1, 1, 2);

  const TermWeights weights{0.0, cfg.lambda_r, 0.0};
  std::vector<double> grad(model.parameter_count());
  double previous = -2.0;
  bool reached = false;
  for (int step = 0; step < 5000 && !reached; ++step) {
    std::fill(grad.begin(), grad.end(), 0.0);
    const ObjectiveValue v = evaluate_objective(model, batch, s, real, pred, cfg, weights, grad);
    const double sim = cosine_sim(v.z_hat.row(0).transpose(), target);
    REQUIRE(sim > previous);
    previous = sim;
    reached = sim >= 1.0 - 1e-3;
    for (std::size_t k = 0; k < grad.size(); ++k) model.parameters()[k] -= 0.05 * grad[k];
  }
  CHECK(reached);
}

TEST_CASE("config validation") {
  MinimaxConfig cfg;
  CHECK_NOTHROW(cfg.validate());
  cfg.lambda_r = -0.1;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
  cfg = {};
  cfg.batch_size = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
  cfg = {};
  cfg.memory_capacity = 0;
  CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::invalid_argument);
  cfg = {};
  cfg.epochs = 0;
  CHECK_NOTHROW(cfg.validate());
}
