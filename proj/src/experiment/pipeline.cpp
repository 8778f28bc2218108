#include "mmdd/experiment/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <sstream>

#include "mmdd/control/costs.hpp"
#include "mmdd/control/mixture.hpp"
#include "mmdd/control/sde.hpp"
#include "mmdd/control/trilevel.hpp"
#include "mmdd/coreset/selectors.hpp"
#include "mmdd/diffusion/encoder.hpp"
#include "mmdd/diffusion/sampler.hpp"
#include "mmdd/error.hpp"
#include "mmdd/eval/classifier.hpp"
#include "mmdd/eval/metrics.hpp"
#include "mmdd/experiment/datasets.hpp"
#include "mmdd/experiment/plot.hpp"
#include "mmdd/hash.hpp"
#include "mmdd/minimax/finetune.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

// Stream identifiers for derive_seed; each consumer draws independently.
enum Stream : std::uint64_t {
  kSelectStream = 10,
  kModelStream = 11,
  kPretrainStream = 12,
  kFinetuneStream = 13,
  kSampleStream = 14,
  kEvalStream = 15,
  kFeatureStream = 16,
  kControlStream = 17,
  kDirectStream = 18,
  kPlotStream = 19,
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::io, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path.string());
  out << j.dump(2) << "\n";
  require(static_cast<bool>(out), ErrorCode::io, "failed writing " + path.string());
}

void make_layout(const fs::path& root) {
  for (const char* sub : {kSurrogateDir, kCheckpointDir, kReportDir, kPlotDir}) fs::create_directories(root / sub);
}

// Runs one verb under the manifest: marks it incomplete first, complete on
// success, and records the failure before rethrowing.
template <class F>
auto run_verb(const ExperimentConfig& cfg, const std::string& verb, F body) {
  const fs::path root = cfg.output;
  make_layout(root);
  Manifest manifest = Manifest::open(root, cfg);
  save_config(cfg, root / "config.json");
  manifest.add_artifact("config.json", "config");
  manifest.begin(verb);
  const auto start = Clock::now();
  try {
    auto result = body(manifest);
    manifest.finish(verb, seconds_since(start));
    return result;
  } catch (const std::exception& e) {
    manifest.abort(verb, e.what());
    throw;
  }
}

EncoderDecoder make_encoder(const ExperimentConfig& cfg, const LabeledData& train) {
  if (cfg.diffusion.latent_dim > 0) return EncoderDecoder::linear_projection(train.x, cfg.diffusion.latent_dim);
  return EncoderDecoder::identity(static_cast<int>(train.x.cols()));
}

Matrix select_rows(const LabeledData& train, const Selection& sel, Labels& labels) {
  Matrix x(static_cast<Eigen::Index>(sel.total()), train.x.cols());
  Eigen::Index row = 0;
  labels.clear();
  for (std::size_t c = 0; c < sel.by_class.size(); ++c)
    for (long id : sel.by_class[c]) {
      x.row(row++) = train.x.row(id);
      labels.push_back(static_cast<int>(c));
    }
  return x;
}

std::uint64_t method_index(Method m) { return static_cast<std::uint64_t>(m); }

std::vector<std::uint64_t> eval_seeds(const ExperimentConfig& cfg) {
  std::vector<std::uint64_t> seeds;
  for (int r = 0; r < cfg.eval.protocol.repeats; ++r)
    seeds.push_back(derive_seed(cfg.seed, {kEvalStream, static_cast<std::uint64_t>(r)}));
  return seeds;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

json cost_json(const CostToGo& c) {
  return {{"estimate", c.estimate},
          {"standard_error", c.standard_error},
          {"control_energy", c.control_energy},
          {"terminal_cost", c.terminal_cost},
          {"clipped", c.clipped}};
}

}  // namespace

Manifest Manifest::open(const fs::path& dir, const ExperimentConfig& cfg) {
  Manifest m;
  m.dir_ = dir;
  const fs::path file = dir / kManifestFile;
  if (fs::exists(file)) {
    try {
      m.doc_ = json::parse(read_file(file));
    } catch (const json::exception&) {
      fail(ErrorCode::orchestration, "manifest " + file.string() + " is unreadable");
    }
    require(m.doc_.value("config_hash", std::string()) == cfg.hash(), ErrorCode::orchestration,
            "output directory " + dir.string() + " holds results of a different config");
  } else {
    m.doc_ = {{"name", cfg.name},
              {"config_hash", cfg.hash()},
              {"seed", cfg.seed},
              {"status", "incomplete"},
              {"verbs", json::object()},
              {"timings", json::object()},
              {"artifacts", json::array()}};
  }
  return m;
}

void Manifest::begin(const std::string& verb) {
  doc_["verbs"][verb] = {{"status", "incomplete"}};
  doc_["status"] = "incomplete";
  save();
}

void Manifest::finish(const std::string& verb, double seconds) {
  doc_["verbs"][verb] = {{"status", "complete"}, {"seconds", seconds}};
  add_timing(verb, seconds);
  bool all = true;
  for (const auto& item : doc_["verbs"].items()) all = all && item.value().value("status", "") == "complete";
  doc_["status"] = all ? "complete" : "incomplete";
  save();
}

void Manifest::abort(const std::string& verb, const std::string& message) {
  doc_["verbs"][verb] = {{"status", "incomplete"}, {"error", message}};
  doc_["status"] = "incomplete";
  save();
}

void Manifest::add_artifact(const fs::path& relative, const std::string& kind) {
  const std::string rel = relative.generic_string();
  const std::string digest = sha256_hex(read_file(dir_ / relative));
  json& list = doc_["artifacts"];
  for (auto& a : list) {
    if (a["path"] == rel) {
      a["kind"] = kind;
      a["sha256"] = digest;
      return;
    }
  }
  list.push_back({{"path", rel}, {"kind", kind}, {"sha256", digest}});
}

void Manifest::add_timing(const std::string& stage, double seconds) { doc_["timings"][stage] = seconds; }

void Manifest::save() const { write_json(dir_ / kManifestFile, doc_); }

std::string surrogate_file(Method m, int ipc) { return to_string(m) + "_ipc" + std::to_string(ipc) + ".csv"; }

std::string report_file(Method m, int ipc, const std::string& test_model) {
  return to_string(m) + "_ipc" + std::to_string(ipc) + "_" + test_model + ".json";
}

void write_surrogate_csv(const fs::path& path, const Matrix& x, const Labels& y) {
  require(static_cast<Eigen::Index>(y.size()) == x.rows(), ErrorCode::invalid_argument,
          "one label per surrogate row required");
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot write " + path.string());
  out << "label";
  for (Eigen::Index j = 0; j < x.cols(); ++j) out << ",f" << j;
  out << "\n";
  char buf[32];
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    out << y[i];
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.17g", x(i, j));
      out << buf;
    }
    out << "\n";
  }
  require(static_cast<bool>(out), ErrorCode::io, "failed writing " + path.string());
}

LabeledData read_surrogate_csv(const fs::path& path, int num_classes) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::io, "cannot read surrogate " + path.string());
  std::string line;
  std::getline(in, line);
  require(line.rfind("label", 0) == 0, ErrorCode::io, "surrogate " + path.string() + " has no header");
  const auto cols = static_cast<Eigen::Index>(std::count(line.begin(), line.end(), ','));
  std::vector<std::vector<double>> rows;
  LabeledData d;
  d.num_classes = num_classes;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::getline(ss, cell, ',');
    const int label = std::stoi(cell);
    require(label >= 0 && label < num_classes, ErrorCode::io, "surrogate label out of range in " + path.string());
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    require(static_cast<Eigen::Index>(row.size()) == cols, ErrorCode::io, "ragged surrogate row in " + path.string());
    rows.push_back(std::move(row));
    d.y.push_back(label);
  }
  d.x.resize(static_cast<Eigen::Index>(rows.size()), cols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (Eigen::Index j = 0; j < cols; ++j) d.x(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return d;
}

void run_distill(const ExperimentConfig& cfg) {
  cfg.validate();
  run_verb(cfg, "distill", [&](Manifest& manifest) {
    const fs::path root = cfg.output;
    auto t0 = Clock::now();
    const Dataset ds = load_dataset(cfg);
    manifest.add_timing("distill.load", seconds_since(t0));
    const int n_classes = ds.train.num_classes;

    const EncoderDecoder encoder = make_encoder(cfg, ds.train);
    const Matrix latent = encoder.encode(ds.train.x);
    FeatureSet fs = FeatureSet::from(latent, ds.train.y, n_classes);

    for (Method m : cfg.methods) {
      if (is_diffusion(m)) continue;
      t0 = Clock::now();
      for (int ipc : cfg.ipc) {
        const std::uint64_t seed = derive_seed(cfg.seed, {kSelectStream, method_index(m), static_cast<std::uint64_t>(ipc)});
        Selection sel = m == Method::random    ? random_select(fs, ipc, seed)
                        : m == Method::herding ? herding_select(fs, ipc)
                                               : kcenter_select(fs, ipc, seed);
        Labels y;
        const Matrix x = select_rows(ds.train, sel, y);
        const std::string file = surrogate_file(m, ipc);
        write_surrogate_csv(root / kSurrogateDir / file, x, y);
        manifest.add_artifact(fs::path(kSurrogateDir) / file, "surrogate");
        const std::string ids = to_string(m) + "_ipc" + std::to_string(ipc) + "_selection.csv";
        write_selection_csv(root / kSurrogateDir / ids, sel);
        manifest.add_artifact(fs::path(kSurrogateDir) / ids, "selection");
      }
      manifest.add_timing("distill." + to_string(m), seconds_since(t0));
    }

    if (!cfg.uses_diffusion()) return 0;

    const DiffusionSpec& spec = cfg.diffusion;
    const NoiseSchedule schedule = make_noise_schedule(spec.steps, spec.schedule);
    if (!encoder.is_identity()) {
      encoder.save(root / kCheckpointDir / "encoder.mda");
      manifest.add_artifact(fs::path(kCheckpointDir) / "encoder.mda", "checkpoint");
    }
    DenoiserConfig dc;
    dc.dimension = static_cast<int>(latent.cols());
    dc.num_classes = n_classes;
    dc.num_steps = spec.steps;
    dc.time_features = spec.time_features;
    dc.class_embedding_dim = spec.class_embedding_dim;
    dc.hidden_width = spec.hidden_width;
    dc.hidden_layers = spec.hidden_layers;
    dc.activation = spec.activation;

    // Shared simple-loss pretraining stands in for the pretrained generator.
    t0 = Clock::now();
    MinimaxConfig pre_cfg = cfg.minimax;
    pre_cfg.repr = ReprMode::off;
    pre_cfg.div = DivMode::off;
    pre_cfg.epochs = spec.pretrain_epochs;
    pre_cfg.batch_size = spec.pretrain_batch_size;
    pre_cfg.learning_rate = spec.pretrain_learning_rate;
    FinetuneResult pre = finetune(Denoiser(dc, derive_seed(cfg.seed, {kModelStream})), latent, ds.train.y, schedule,
                                  pre_cfg, derive_seed(cfg.seed, {kPretrainStream}));
    pre.model.save(root / kCheckpointDir / "pretrained.mda", schedule, {{"stage", "pretrain"}});
    manifest.add_artifact(fs::path(kCheckpointDir) / "pretrained.mda", "checkpoint");
    write_loss_trace_csv(root / kCheckpointDir / "pretrain_loss.csv", pre.trace);
    manifest.add_artifact(fs::path(kCheckpointDir) / "pretrain_loss.csv", "loss_trace");
    manifest.add_timing("distill.pretrain", seconds_since(t0));

    for (Method m : cfg.methods) {
      if (!is_diffusion(m)) continue;
      t0 = Clock::now();
      MinimaxConfig ft_cfg = cfg.minimax;
      if (m == Method::diffusion_base) {
        ft_cfg.repr = ReprMode::off;
        ft_cfg.div = DivMode::off;
      }
      FinetuneResult ft = finetune(pre.model, latent, ds.train.y, schedule, ft_cfg,
                                   derive_seed(cfg.seed, {kFinetuneStream}));
      const json flags = {{"method", to_string(m)},
                          {"repr", to_string(ft_cfg.repr)},
                          {"div", to_string(ft_cfg.div)},
                          {"lambda_r", ft_cfg.lambda_r},
                          {"lambda_d", ft_cfg.lambda_d},
                          {"clean_estimate", to_string(ft_cfg.clean_estimate)},
                          {"partition", to_string(ft_cfg.partition)}};
      const std::string ckpt = to_string(m) + ".mda";
      ft.model.save(root / kCheckpointDir / ckpt, schedule, flags);
      manifest.add_artifact(fs::path(kCheckpointDir) / ckpt, "checkpoint");
      const std::string trace = to_string(m) + "_loss.csv";
      write_loss_trace_csv(root / kCheckpointDir / trace, ft.trace);
      manifest.add_artifact(fs::path(kCheckpointDir) / trace, "loss_trace");
      manifest.add_timing("distill." + to_string(m) + ".finetune", seconds_since(t0));

      t0 = Clock::now();
      const SamplerOptions opts{spec.stochastic_sampler};
      for (int ipc : cfg.ipc) {
        Matrix x(static_cast<Eigen::Index>(n_classes) * ipc, ds.train.x.cols());
        Labels y;
        for (int c = 0; c < n_classes; ++c) {
          const std::uint64_t seed =
              derive_seed(cfg.seed, {kSampleStream, static_cast<std::uint64_t>(c), static_cast<std::uint64_t>(ipc)});
          Matrix items = encoder.decode(ancestral_sample(ft.model, schedule, c, spec.sampling_steps, ipc, seed, opts));
          if (ds.train.image_shape) items = items.cwiseMax(-1.0).cwiseMin(1.0);
          x.middleRows(static_cast<Eigen::Index>(c) * ipc, ipc) = items;
          y.insert(y.end(), ipc, c);
        }
        const std::string file = surrogate_file(m, ipc);
        write_surrogate_csv(root / kSurrogateDir / file, x, y);
        manifest.add_artifact(fs::path(kSurrogateDir) / file, "surrogate");
      }
      manifest.add_timing("distill." + to_string(m) + ".sample", seconds_since(t0));
    }
    return 0;
  });
}

std::vector<MetricsReport> run_eval(const ExperimentConfig& cfg) {
  cfg.validate();
  return run_verb(cfg, "eval", [&](Manifest& manifest) {
    const fs::path root = cfg.output;
    for (Method m : cfg.methods)
      for (int ipc : cfg.ipc)
        require(fs::exists(root / kSurrogateDir / surrogate_file(m, ipc)), ErrorCode::orchestration,
                "missing surrogate for (" + to_string(m) + ", ipc " + std::to_string(ipc) + "); run distill first");

    auto t0 = Clock::now();
    const Dataset ds = load_dataset(cfg);
    FeatureExtractor extractor = FeatureExtractor::identity();
    if (cfg.eval.features == "convnet") {
      require(ds.train.image_shape.has_value(), ErrorCode::config,
              "config key 'eval.features': convnet features need image data");
      EvalProtocol p = cfg.eval.protocol;
      p.test_model = "conv3";
      extractor = FeatureExtractor::convnet(ds.train, p, derive_seed(cfg.seed, {kFeatureStream}));
    }
    const Matrix real_features = extractor.extract(ds.test.x);
    manifest.add_timing("eval.features", seconds_since(t0));

    const std::vector<std::uint64_t> seeds = eval_seeds(cfg);
    std::vector<MetricsReport> reports;
    for (Method m : cfg.methods) {
      for (int ipc : cfg.ipc) {
        t0 = Clock::now();
        LabeledData sur = read_surrogate_csv(root / kSurrogateDir / surrogate_file(m, ipc), ds.train.num_classes);
        sur.image_shape = ds.train.image_shape;
        const Matrix gen_features = extractor.extract(sur.x);
        const double mmd = mmd_rbf(real_features, gen_features);
        const double fid = gaussian_fid(real_features, gen_features);
        const PrdcResult pr = prdc(real_features, gen_features, cfg.eval.prdc_k);
        for (const std::string& model : cfg.eval.test_models) {
          EvalProtocol p = cfg.eval.protocol;
          p.test_model = model;
          const AccuracySummary acc = train_eval_classifier(sur, ds.test, p, seeds);
          MetricsReport report = build_report(acc, mmd, fid, pr, to_string(m), ipc, model);
          const std::string file = report_file(m, ipc, model);
          write_report_json(root / kReportDir / file, report);
          manifest.add_artifact(fs::path(kReportDir) / file, "report");
          reports.push_back(std::move(report));
        }
        manifest.add_timing("eval." + to_string(m) + ".ipc" + std::to_string(ipc), seconds_since(t0));
      }
    }
    write_aggregate_csv(root / kReportDir / "aggregate.csv", reports);
    manifest.add_artifact(fs::path(kReportDir) / "aggregate.csv", "aggregate");
    return reports;
  });
}

void run_control_sim(const ExperimentConfig& cfg) {
  cfg.validate();
  run_verb(cfg, "control-sim", [&](Manifest& manifest) {
    const fs::path root = cfg.output;
    const ControlSpec& spec = cfg.control;
    std::vector<Vector> means;
    for (const auto& m : spec.means) means.push_back(Eigen::Map<const Vector>(m.data(), static_cast<Eigen::Index>(m.size())));
    const GaussianMixture mix = GaussianMixture::make(spec.weights, means);
    const int d = mix.dimension();
    const Vector z0 = Vector::Zero(d);
    const std::uint64_t seed = derive_seed(cfg.seed, {kControlStream});
    const DriftFn follmer = [&mix](const Vector& z, double t) { return follmer_drift(z, t, mix); };
    const DriftFn zero = [d](const Vector&, double) { return Vector::Zero(d); };

    auto t0 = Clock::now();
    SimulationOptions terminal_only;
    terminal_only.record_paths = false;
    const TrajectoryBundle bundle = simulate_sde(follmer, z0, spec.steps, spec.particles, seed, terminal_only);
    const TrajectoryBundle reference = simulate_sde(zero, z0, spec.steps, spec.particles, seed, terminal_only);
    // Same per-particle streams, so these paths are the first particles of `bundle`.
    const int n_paths = std::min(spec.path_particles, spec.particles);
    const TrajectoryBundle paths = simulate_sde(follmer, z0, spec.steps, n_paths, seed);
    manifest.add_timing("control.simulate", seconds_since(t0));

    Rng direct_rng(derive_seed(cfg.seed, {kDirectStream}));
    const Matrix direct = mix.sample(spec.particles, direct_rng);
    json w1 = json::array();
    for (int j = 0; j < d; ++j) {
      std::vector<double> a(bundle.terminal.col(j).data(), bundle.terminal.col(j).data() + spec.particles);
      std::vector<double> b(direct.col(j).data(), direct.col(j).data() + spec.particles);
      w1.push_back(wasserstein1_1d(a, b));
    }

    const Matrix quantile_samples = direct.topRows(std::min<Eigen::Index>(spec.quantile_samples, direct.rows()));
    double jr = 0.0;
    for (int i = 0; i < n_paths; ++i) jr += repr_path_cost(paths.path(i), paths.times, quantile_samples, spec.q_tilde);
    jr /= n_paths;
    const Matrix anchors = Matrix::Zero(n_paths, d);

    json report = {{"particles", spec.particles},
                   {"steps", spec.steps},
                   {"dimension", d},
                   {"wasserstein1_per_coordinate", w1},
                   {"cost_to_go", {{"follmer", cost_json(cost_to_go_estimate(bundle, mix))},
                                   {"zero_drift", cost_json(cost_to_go_estimate(reference, mix))}}},
                   {"path_particles", n_paths},
                   {"q_tilde", spec.q_tilde},
                   {"repr_path_cost_mean", jr},
                   {"diversity_terminal_cost", n_paths >= 2 ? json(diversity_terminal_cost(paths)) : json(nullptr)},
                   {"scalarized_objective",
                    scalarized_objective(paths.terminal, anchors, quantile_samples, spec.lambda_r, spec.lambda_d,
                                         spec.q_tilde)}};
    write_json(root / kReportDir / "control_sim.json", report);
    manifest.add_artifact(fs::path(kReportDir) / "control_sim.json", "report");
    paths.save(root / kCheckpointDir / "trajectory_bundle.mda");
    manifest.add_artifact(fs::path(kCheckpointDir) / "trajectory_bundle.mda", "trajectory_bundle");

    t0 = Clock::now();
    const TrilevelSpec& ts = spec.trilevel;
    TrilevelInstance inst;
    inst.samples.resize(ts.sample_count, 2);
    for (int i = 0; i < ts.sample_count; ++i) {
      const double frac = ts.sample_count == 1 ? 0.0 : -1.0 + 2.0 * i / (ts.sample_count - 1);
      const double angle = (ts.sample_angle_deg + frac * ts.sample_spread_deg) * std::numbers::pi / 180.0;
      inst.samples(i, 0) = ts.radius * std::cos(angle);
      inst.samples(i, 1) = ts.radius * std::sin(angle);
    }
    inst.n_particles = ts.n_particles;
    inst.q_tilde = ts.q_tilde;
    inst.radius = ts.radius;
    inst.angular_resolution = ts.angular_resolution;
    inst.radial_resolution = ts.radial_resolution;
    inst.level_tolerance = ts.level_tolerance;
    const TrilevelSolution sol = solve_trilevel_toy(inst);
    json tri = {{"positions", matrix_json(sol.positions)},
                {"level_values",
                 {{"inner", sol.inner_value},
                  {"inner_global_min", sol.inner_global_min},
                  {"middle", sol.middle_value},
                  {"top", sol.top_value}}},
                {"grid_resolution", {{"angular", inst.angular_resolution}, {"radial", inst.radial_resolution}}},
                {"feasible_counts", {{"inner", sol.inner_feasible}, {"middle", sol.middle_feasible}}}};
    write_json(root / kReportDir / "trilevel.json", tri);
    manifest.add_artifact(fs::path(kReportDir) / "trilevel.json", "report");
    manifest.add_timing("control.trilevel", seconds_since(t0));
    return 0;
  });
}

void run_plot(const ExperimentConfig& cfg) {
  cfg.validate();
  run_verb(cfg, "plot", [&](Manifest& manifest) {
    const fs::path root = cfg.output;
    const Dataset ds = load_dataset(cfg);
    for (int ipc : cfg.ipc) {
      std::vector<ScatterPanel> panels;
      for (Method m : cfg.methods) {
        const fs::path file = root / kSurrogateDir / surrogate_file(m, ipc);
        require(fs::exists(file), ErrorCode::orchestration,
                "missing surrogate for (" + to_string(m) + ", ipc " + std::to_string(ipc) + "); run distill first");
        ScatterPanel panel;
        panel.method = to_string(m);
        panel.points = read_surrogate_csv(file, ds.train.num_classes).x;
        const fs::path report = root / kReportDir / report_file(m, ipc, cfg.eval.test_models.front());
        if (fs::exists(report)) panel.accuracy = MetricsReport::from_json(json::parse(read_file(report))).top1_mean;
        panels.push_back(std::move(panel));
      }
      const std::string name = "embedding_ipc" + std::to_string(ipc) + ".png";
      plot_embedding_scatter(ds.train.x, panels, root / kPlotDir / name, cfg.plot, derive_seed(cfg.seed, {kPlotStream}));
      manifest.add_artifact(fs::path(kPlotDir) / name, "plot");
    }
    return 0;
  });
}

void run_all(const ExperimentConfig& cfg) {
  run_distill(cfg);
  run_eval(cfg);
  run_control_sim(cfg);
  run_plot(cfg);
}

}  // namespace mmdd
