#include "mmdd/experiment/config.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include "mmdd/error.hpp"
#include "mmdd/hash.hpp"

namespace mmdd {

using nlohmann::json;

namespace {

// Walks one JSON object, remembering which keys were consumed so leftovers can
// be reported as unknown.
class Reader {
 public:
  Reader(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    require(j_.is_object(), ErrorCode::config, "config key '" + display() + "' must be an object");
  }

  bool has(const std::string& key) const { return j_.contains(key); }

  template <class T>
  void get(const std::string& key, T& out) {
    if (!j_.contains(key)) return;
    seen_.insert(key);
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      fail(ErrorCode::config, "config key '" + path(key) + "' has an invalid value");
    }
  }

  // Parses a string-valued enum with the given converter.
  template <class T, class F>
  void get_enum(const std::string& key, T& out, F parse) {
    if (!j_.contains(key)) return;
    std::string s;
    get(key, s);
    try {
      out = parse(s);
    } catch (const Error&) {
      fail(ErrorCode::config, "config key '" + path(key) + "' has unknown value '" + s + "'");
    }
  }

  Reader section(const std::string& key) {
    seen_.insert(key);
    return Reader(j_.at(key), path(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      require(seen_.count(item.key()) != 0, ErrorCode::config, "unknown config key '" + path(item.key()) + "'");
    }
  }

  std::string path(const std::string& key) const { return prefix_.empty() ? key : prefix_ + "." + key; }

 private:
  std::string display() const { return prefix_.empty() ? "<root>" : prefix_; }

  const json& j_;
  std::string prefix_;
  std::set<std::string> seen_;
};

void check(bool ok, const std::string& key, const std::string& what) {
  require(ok, ErrorCode::config, "config key '" + key + "': " + what);
}

DatasetSpec read_dataset(Reader r) {
  DatasetSpec d;
  r.get("kind", d.kind);
  r.get("preset", d.preset);
  r.get("num_classes", d.num_classes);
  r.get("modes", d.modes);
  r.get("radius", d.radius);
  r.get("component_std", d.component_std);
  r.get("class_spread", d.class_spread);
  r.get("mode_weights", d.mode_weights);
  if (r.has("classes")) {
    json arr;
    r.get("classes", arr);
    check(arr.is_array(), r.path("classes"), "must be a list");
    for (std::size_t i = 0; i < arr.size(); ++i) {
      Reader c(arr[i], r.path("classes") + "[" + std::to_string(i) + "]");
      ClassMixtureSpec spec;
      c.get("weights", spec.weights);
      c.get("means", spec.means);
      c.get("std", spec.std);
      c.finish();
      d.classes.push_back(std::move(spec));
    }
  }
  r.get("n_per_class", d.n_per_class);
  r.get("n_test_per_class", d.n_test_per_class);
  r.get("path", d.path);
  r.get("resolution", d.resolution);
  r.get("test_fraction", d.test_fraction);
  r.finish();
  return d;
}

json dataset_json(const DatasetSpec& d) {
  json j = {{"kind", d.kind}};
  if (d.kind == "image_folder") {
    j["path"] = d.path;
    j["resolution"] = d.resolution;
    j["test_fraction"] = d.test_fraction;
    return j;
  }
  j["preset"] = d.preset;
  j["num_classes"] = d.num_classes;
  j["n_per_class"] = d.n_per_class;
  j["n_test_per_class"] = d.n_test_per_class;
  if (d.preset == "custom") {
    json arr = json::array();
    for (const auto& c : d.classes) arr.push_back({{"weights", c.weights}, {"means", c.means}, {"std", c.std}});
    j["classes"] = arr;
  } else {
    j["modes"] = d.modes;
    j["radius"] = d.radius;
    j["component_std"] = d.component_std;
    j["mode_weights"] = d.mode_weights;
    if (d.preset == "ring") j["class_spread"] = d.class_spread;
  }
  return j;
}

MinimaxConfig read_minimax(Reader r) {
  MinimaxConfig m;
  r.get("lambda_r", m.lambda_r);
  r.get("lambda_d", m.lambda_d);
  r.get("batch_size", m.batch_size);
  r.get("epochs", m.epochs);
  r.get("learning_rate", m.learning_rate);
  r.get("weight_decay", m.weight_decay);
  r.get("memory_capacity", m.memory_capacity);
  r.get_enum("repr", m.repr, repr_mode_from_string);
  r.get_enum("div", m.div, div_mode_from_string);
  r.get_enum("partition", m.partition, bank_partition_from_string);
  r.get_enum("clean_estimate", m.clean_estimate, clean_estimate_from_string);
  r.finish();
  return m;
}

json minimax_json(const MinimaxConfig& m) {
  return {{"lambda_r", m.lambda_r},
          {"lambda_d", m.lambda_d},
          {"batch_size", m.batch_size},
          {"epochs", m.epochs},
          {"learning_rate", m.learning_rate},
          {"weight_decay", m.weight_decay},
          {"memory_capacity", m.memory_capacity},
          {"repr", to_string(m.repr)},
          {"div", to_string(m.div)},
          {"partition", to_string(m.partition)},
          {"clean_estimate", to_string(m.clean_estimate)}};
}

DiffusionSpec read_diffusion(Reader r) {
  DiffusionSpec d;
  r.get_enum("schedule", d.schedule, schedule_kind_from_string);
  r.get("steps", d.steps);
  r.get("sampling_steps", d.sampling_steps);
  r.get("stochastic_sampler", d.stochastic_sampler);
  r.get("hidden_width", d.hidden_width);
  r.get("hidden_layers", d.hidden_layers);
  r.get("time_features", d.time_features);
  r.get("class_embedding_dim", d.class_embedding_dim);
  r.get_enum("activation", d.activation, activation_from_string);
  r.get("latent_dim", d.latent_dim);
  r.get("pretrain_epochs", d.pretrain_epochs);
  r.get("pretrain_batch_size", d.pretrain_batch_size);
  r.get("pretrain_learning_rate", d.pretrain_learning_rate);
  r.finish();
  return d;
}

json diffusion_json(const DiffusionSpec& d) {
  return {{"schedule", to_string(d.schedule)},
          {"steps", d.steps},
          {"sampling_steps", d.sampling_steps},
          {"stochastic_sampler", d.stochastic_sampler},
          {"hidden_width", d.hidden_width},
          {"hidden_layers", d.hidden_layers},
          {"time_features", d.time_features},
          {"class_embedding_dim", d.class_embedding_dim},
          {"activation", to_string(d.activation)},
          {"latent_dim", d.latent_dim},
          {"pretrain_epochs", d.pretrain_epochs},
          {"pretrain_batch_size", d.pretrain_batch_size},
          {"pretrain_learning_rate", d.pretrain_learning_rate}};
}

EvalSpec read_eval(Reader r) {
  EvalSpec e;
  EvalProtocol& p = e.protocol;
  r.get("learning_rate", p.learning_rate);
  r.get("epochs", p.epochs);
  r.get("milestones", p.milestones);
  r.get("decay", p.decay);
  r.get("batch_size", p.batch_size);
  r.get("momentum", p.momentum);
  r.get("weight_decay", p.weight_decay);
  r.get("augment_flip", p.augment_flip);
  r.get("augment_noise", p.augment_noise);
  r.get("repeats", p.repeats);
  r.get("hidden_width", p.hidden_width);
  r.get("test_models", e.test_models);
  r.get("features", e.features);
  r.get("prdc_k", e.prdc_k);
  r.finish();
  if (!e.test_models.empty()) p.test_model = e.test_models.front();
  return e;
}

json eval_json(const EvalSpec& e) {
  const EvalProtocol& p = e.protocol;
  return {{"learning_rate", p.learning_rate},
          {"epochs", p.epochs},
          {"milestones", p.milestones},
          {"decay", p.decay},
          {"batch_size", p.batch_size},
          {"momentum", p.momentum},
          {"weight_decay", p.weight_decay},
          {"augment_flip", p.augment_flip},
          {"augment_noise", p.augment_noise},
          {"repeats", p.repeats},
          {"hidden_width", p.hidden_width},
          {"test_models", e.test_models},
          {"features", e.features},
          {"prdc_k", e.prdc_k}};
}

ControlSpec read_control(Reader r) {
  ControlSpec c;
  r.get("weights", c.weights);
  r.get("means", c.means);
  r.get("particles", c.particles);
  r.get("steps", c.steps);
  r.get("q_tilde", c.q_tilde);
  r.get("quantile_samples", c.quantile_samples);
  r.get("path_particles", c.path_particles);
  r.get("lambda_r", c.lambda_r);
  r.get("lambda_d", c.lambda_d);
  if (r.has("trilevel")) {
    Reader t = r.section("trilevel");
    TrilevelSpec& s = c.trilevel;
    t.get("n_particles", s.n_particles);
    t.get("q_tilde", s.q_tilde);
    t.get("radius", s.radius);
    t.get("angular_resolution", s.angular_resolution);
    t.get("radial_resolution", s.radial_resolution);
    t.get("level_tolerance", s.level_tolerance);
    t.get("sample_count", s.sample_count);
    t.get("sample_angle_deg", s.sample_angle_deg);
    t.get("sample_spread_deg", s.sample_spread_deg);
    t.finish();
  }
  r.finish();
  return c;
}

json control_json(const ControlSpec& c) {
  const TrilevelSpec& s = c.trilevel;
  return {{"weights", c.weights},
          {"means", c.means},
          {"particles", c.particles},
          {"steps", c.steps},
          {"q_tilde", c.q_tilde},
          {"quantile_samples", c.quantile_samples},
          {"path_particles", c.path_particles},
          {"lambda_r", c.lambda_r},
          {"lambda_d", c.lambda_d},
          {"trilevel",
           {{"n_particles", s.n_particles},
            {"q_tilde", s.q_tilde},
            {"radius", s.radius},
            {"angular_resolution", s.angular_resolution},
            {"radial_resolution", s.radial_resolution},
            {"level_tolerance", s.level_tolerance},
            {"sample_count", s.sample_count},
            {"sample_angle_deg", s.sample_angle_deg},
            {"sample_spread_deg", s.sample_spread_deg}}}};
}

PlotSpec read_plot(Reader r) {
  PlotSpec p;
  r.get("projection", p.projection);
  r.get("panel_size", p.panel_size);
  r.get("perplexity", p.perplexity);
  r.get("tsne_iterations", p.tsne_iterations);
  r.finish();
  return p;
}

json plot_json(const PlotSpec& p) {
  return {{"projection", p.projection},
          {"panel_size", p.panel_size},
          {"perplexity", p.perplexity},
          {"tsne_iterations", p.tsne_iterations}};
}

bool finite_nonempty(const std::vector<double>& v) {
  if (v.empty()) return false;
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

std::string to_string(Method m) {
  switch (m) {
    case Method::random: return "random";
    case Method::herding: return "herding";
    case Method::kcenter: return "kcenter";
    case Method::diffusion_base: return "diffusion_base";
    case Method::diffusion_minimax: return "diffusion_minimax";
  }
  return "unknown";
}

Method method_from_string(const std::string& s) {
  for (Method m : {Method::random, Method::herding, Method::kcenter, Method::diffusion_base,
                   Method::diffusion_minimax}) {
    if (to_string(m) == s) return m;
  }
  fail(ErrorCode::invalid_argument, "unknown method '" + s + "'");
}

bool is_diffusion(Method m) { return m == Method::diffusion_base || m == Method::diffusion_minimax; }

bool ExperimentConfig::uses_diffusion() const {
  for (Method m : methods)
    if (is_diffusion(m)) return true;
  return false;
}

void ExperimentConfig::validate() const {
  check(!name.empty(), "name", "must not be empty");
  check(!output.empty(), "output", "must not be empty");

  const DatasetSpec& d = dataset;
  check(d.kind == "synthetic" || d.kind == "image_folder", "dataset.kind", "must be synthetic or image_folder");
  if (d.kind == "synthetic") {
    check(d.preset == "sectors" || d.preset == "ring" || d.preset == "custom", "dataset.preset",
          "must be sectors, ring or custom");
    check(d.n_per_class >= 1, "dataset.n_per_class", "must be positive");
    check(d.n_test_per_class >= 1, "dataset.n_test_per_class", "must be positive");
    if (d.preset == "custom") {
      check(!d.classes.empty(), "dataset.classes", "custom preset needs at least one class");
      check(static_cast<int>(d.classes.size()) == d.num_classes, "dataset.num_classes",
            "must equal the number of custom classes");
    } else {
      check(d.num_classes >= 1, "dataset.num_classes", "must be positive");
      check(d.modes >= 1, "dataset.modes", "must be positive");
      check(d.radius > 0.0, "dataset.radius", "must be positive");
      check(d.component_std > 0.0, "dataset.component_std", "must be positive");
      check(d.class_spread >= 0.0, "dataset.class_spread", "must be nonnegative");
      check(d.mode_weights.empty() || static_cast<int>(d.mode_weights.size()) == d.modes, "dataset.mode_weights",
            "needs one weight per mode");
    }
  } else {
    check(!d.path.empty(), "dataset.path", "image_folder needs a path");
    check(d.resolution >= 4, "dataset.resolution", "must be at least 4");
    check(d.test_fraction > 0.0 && d.test_fraction < 1.0, "dataset.test_fraction", "must be in (0, 1)");
  }

  check(!ipc.empty(), "ipc", "needs at least one value");
  for (int v : ipc) check(v > 0, "ipc", "values must be positive");
  check(!methods.empty(), "method", "needs at least one method");

  try {
    minimax.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config section 'minimax': ") + e.what());
  }
  const DiffusionSpec& f = diffusion;
  check(f.steps >= 1, "diffusion.steps", "must be positive");
  check(f.sampling_steps >= 1 && f.sampling_steps <= f.steps, "diffusion.sampling_steps", "must be in [1, steps]");
  check(f.hidden_width >= 1, "diffusion.hidden_width", "must be positive");
  check(f.hidden_layers >= 1, "diffusion.hidden_layers", "must be positive");
  check(f.time_features >= 2 && f.time_features % 2 == 0, "diffusion.time_features", "must be even and >= 2");
  check(f.class_embedding_dim >= 1, "diffusion.class_embedding_dim", "must be positive");
  check(f.latent_dim >= 0, "diffusion.latent_dim", "must be nonnegative");
  check(f.pretrain_epochs >= 0, "diffusion.pretrain_epochs", "must be nonnegative");
  check(f.pretrain_batch_size >= 1, "diffusion.pretrain_batch_size", "must be positive");
  check(f.pretrain_learning_rate > 0.0, "diffusion.pretrain_learning_rate", "must be positive");

  try {
    eval.protocol.validate();
  } catch (const Error& e) {
    fail(ErrorCode::config, std::string("config section 'eval': ") + e.what());
  }
  check(!eval.test_models.empty(), "eval.test_models", "needs at least one model");
  for (const auto& m : eval.test_models) check(m == "mlp2" || m == "conv3", "eval.test_models", "unknown model '" + m + "'");
  check(eval.features == "identity" || eval.features == "convnet", "eval.features", "must be identity or convnet");
  check(eval.prdc_k >= 1, "eval.prdc_k", "must be positive");

  const ControlSpec& c = control;
  check(finite_nonempty(c.weights), "control.weights", "must be a nonempty finite list");
  check(c.means.size() == c.weights.size(), "control.means", "needs one mean per weight");
  for (const auto& m : c.means)
    check(finite_nonempty(m) && m.size() == c.means.front().size(), "control.means", "must share a dimension");
  double wsum = 0.0;
  for (double w : c.weights) {
    check(w > 0.0, "control.weights", "must be positive");
    wsum += w;
  }
  check(std::abs(wsum - 1.0) <= 1e-12, "control.weights", "must sum to 1");
  check(c.particles >= 2, "control.particles", "must be at least 2");
  check(c.steps >= 1, "control.steps", "must be positive");
  check(c.q_tilde >= 0.0 && c.q_tilde <= 1.0, "control.q_tilde", "must be in [0, 1]");
  check(c.quantile_samples >= 1, "control.quantile_samples", "must be positive");
  check(c.path_particles >= 1, "control.path_particles", "must be positive");
  check(c.lambda_r >= 0.0 && c.lambda_d >= 0.0, "control.lambda_r", "weights must be nonnegative");
  const TrilevelSpec& t = c.trilevel;
  check(t.n_particles >= 2, "control.trilevel.n_particles", "must be at least 2");
  check(t.q_tilde >= 0.0 && t.q_tilde <= 1.0, "control.trilevel.q_tilde", "must be in [0, 1]");
  check(t.radius > 0.0, "control.trilevel.radius", "must be positive");
  check(t.sample_count >= 1, "control.trilevel.sample_count", "must be positive");
  check(t.level_tolerance >= 0.0, "control.trilevel.level_tolerance", "must be nonnegative");

  check(plot.projection == "pca" || plot.projection == "tsne", "plot.projection", "must be pca or tsne");
  check(plot.panel_size >= 120, "plot.panel_size", "must be at least 120");
  check(plot.perplexity > 0.0, "plot.perplexity", "must be positive");
  check(plot.tsne_iterations >= 1, "plot.tsne_iterations", "must be positive");
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig cfg;
  Reader r(j, "");
  r.get("name", cfg.name);
  r.get("seed", cfg.seed);
  r.get("output", cfg.output);
  require(r.has("dataset"), ErrorCode::config, "config key 'dataset' is required");
  cfg.dataset = read_dataset(r.section("dataset"));
  if (r.has("ipc")) {
    if (j.at("ipc").is_number()) {
      int v = 0;
      r.get("ipc", v);
      cfg.ipc = {v};
    } else {
      r.get("ipc", cfg.ipc);
    }
  }
  require(r.has("method"), ErrorCode::config, "config key 'method' is required");
  std::vector<std::string> names;
  if (j.at("method").is_string()) {
    std::string one;
    r.get("method", one);
    names = {one};
  } else {
    r.get("method", names);
  }
  cfg.methods.clear();
  for (const auto& n : names) {
    try {
      cfg.methods.push_back(method_from_string(n));
    } catch (const Error&) {
      fail(ErrorCode::config, "config key 'method' has unknown value '" + n + "'");
    }
  }
  for (const char* key : {"minimax", "diffusion"}) {
    require(!r.has(key) || cfg.uses_diffusion(), ErrorCode::config,
            std::string("config section '") + key + "' is only valid with a diffusion method");
  }
  if (r.has("minimax")) cfg.minimax = read_minimax(r.section("minimax"));
  if (r.has("diffusion")) cfg.diffusion = read_diffusion(r.section("diffusion"));
  if (r.has("eval")) cfg.eval = read_eval(r.section("eval"));
  if (r.has("control")) cfg.control = read_control(r.section("control"));
  if (r.has("plot")) cfg.plot = read_plot(r.section("plot"));
  r.finish();
  cfg.validate();
  return cfg;
}

json ExperimentConfig::to_json() const {
  json names = json::array();
  for (Method m : methods) names.push_back(to_string(m));
  json j = {{"name", name},         {"seed", seed},
            {"output", output},     {"dataset", dataset_json(dataset)},
            {"ipc", ipc},           {"method", names},
            {"eval", eval_json(eval)}, {"control", control_json(control)},
            {"plot", plot_json(plot)}};
  if (uses_diffusion()) {
    j["minimax"] = minimax_json(minimax);
    j["diffusion"] = diffusion_json(diffusion);
  }
  return j;
}

std::string ExperimentConfig::hash() const { return sha256_hex(to_json().dump()); }

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), ErrorCode::config, "cannot open config file " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::config, "config file " + path.string() + " does not parse: " + e.what());
  }
  return ExperimentConfig::from_json(j);
}

void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), ErrorCode::io, "cannot write config file " + path.string());
  out << cfg.to_json().dump(2) << "\n";
  require(static_cast<bool>(out), ErrorCode::io, "failed writing config file " + path.string());
}

}  // namespace mmdd
