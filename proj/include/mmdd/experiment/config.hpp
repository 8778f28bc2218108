#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmdd/diffusion/denoiser.hpp"
#include "mmdd/diffusion/schedule.hpp"
#include "mmdd/eval/protocol.hpp"
#include "mmdd/minimax/config.hpp"

namespace mmdd {

enum class Method { random, herding, kcenter, diffusion_base, diffusion_minimax };

std::string to_string(Method m);
Method method_from_string(const std::string& s);
bool is_diffusion(Method m);

// One class of a synthetic dataset: isotropic Gaussian components.
struct ClassMixtureSpec {
  std::vector<double> weights;
  std::vector<std::vector<double>> means;
  double std = 0.25;
};

struct DatasetSpec {
  std::string kind = "synthetic";  // synthetic | image_folder

  // synthetic presets:
  //   sectors: class c owns `modes` components spread over the angular sector
  //            [2 pi c / C, 2 pi (c + 1) / C) of a radius-`radius` circle.
  //   ring:    class c is a ring of `modes` components around a class centre;
  //            centres sit on a circle of radius `class_spread`.
  //   custom:  explicit `classes`.
  std::string preset = "sectors";
  int num_classes = 10;
  int modes = 3;
  double radius = 4.0;
  double component_std = 0.25;
  double class_spread = 12.0;
  std::vector<double> mode_weights;  // empty: uniform
  std::vector<ClassMixtureSpec> classes;
  int n_per_class = 200;
  int n_test_per_class = 100;

  // image folders
  std::string path;
  int resolution = 16;
  double test_fraction = 0.2;
};

struct DiffusionSpec {
  ScheduleKind schedule = ScheduleKind::linear;
  int steps = 1000;
  int sampling_steps = 50;
  bool stochastic_sampler = false;
  int hidden_width = 64;
  int hidden_layers = 2;
  int time_features = 16;
  int class_embedding_dim = 8;
  Activation activation = Activation::silu;
  int latent_dim = 0;  // 0: identity encoder
  int pretrain_epochs = 200;
  int pretrain_batch_size = 32;
  double pretrain_learning_rate = 1e-3;
};

struct EvalSpec {
  EvalProtocol protocol;
  std::vector<std::string> test_models{"mlp2"};
  std::string features = "identity";  // identity | convnet
  int prdc_k = 5;
};

struct TrilevelSpec {
  int n_particles = 2;
  double q_tilde = 0.0;
  double radius = 1.0;
  int angular_resolution = 360;
  int radial_resolution = 81;
  double level_tolerance = 0.02;
  int sample_count = 20;
  double sample_angle_deg = 0.0;
  double sample_spread_deg = 10.0;
};

struct ControlSpec {
  std::vector<double> weights{0.5, 0.5};
  std::vector<std::vector<double>> means{{-2.0}, {2.0}};
  int particles = 10000;
  int steps = 1000;
  double q_tilde = 0.02;
  int quantile_samples = 50;
  int path_particles = 32;
  double lambda_r = 0.002;
  double lambda_d = 0.008;
  TrilevelSpec trilevel;
};

struct PlotSpec {
  std::string projection = "pca";  // pca | tsne
  int panel_size = 320;
  double perplexity = 30.0;
  int tsne_iterations = 500;
};

struct ExperimentConfig {
  std::string name = "experiment";
  std::uint64_t seed = 0;
  std::string output = "runs/experiment";
  DatasetSpec dataset;
  std::vector<int> ipc{10};
  std::vector<Method> methods{Method::random};
  MinimaxConfig minimax;
  DiffusionSpec diffusion;
  EvalSpec eval;
  ControlSpec control;
  PlotSpec plot;

  bool uses_diffusion() const;
  // Invariant breaches raise config errors naming the key.
  void validate() const;

  // Unknown keys are config errors. Sections tied to a method family
  // ("minimax", "diffusion") are accepted only when such a method is listed.
  static ExperimentConfig from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
  // SHA-256 of the canonical serialization with all defaults resolved.
  std::string hash() const;
};

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

}  // namespace mmdd
