#include "mmdd/diffusion/denoiser.hpp"

#include <cmath>

#include "mmdd/archive.hpp"
#include "mmdd/error.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

namespace {

constexpr double kMaxFrequency = 100.0;

}  // namespace

std::string to_string(Activation a) {
  switch (a) {
    case Activation::silu: return "silu";
    case Activation::relu: return "relu";
    case Activation::tanh: return "tanh";
  }
  return "silu";
}

Activation activation_from_string(const std::string& name) {
  if (name == "silu") return Activation::silu;
  if (name == "relu") return Activation::relu;
  if (name == "tanh") return Activation::tanh;
  fail(ErrorCode::invalid_argument, "unknown activation '" + name + "'");
}

Denoiser::Denoiser(const DenoiserConfig& config, std::uint64_t seed) : config_(config) {
  require(config.dimension > 0 && config.num_classes > 0 && config.num_steps > 0,
          ErrorCode::invalid_argument, "denoiser dimension, class count and steps must be positive");
  require(config.time_features >= 0 && config.time_features % 2 == 0, ErrorCode::invalid_argument,
          "time feature count must be even and nonnegative");
  require(config.class_embedding_dim >= 0 && config.hidden_width > 0 && config.hidden_layers >= 1,
          ErrorCode::invalid_argument, "invalid denoiser layer sizes");

  std::vector<int> widths{config.dimension + config.time_features + config.class_embedding_dim};
  for (int l = 0; l < config.hidden_layers; ++l) {
    widths.push_back(config.hidden_width);
  }
  widths.push_back(config.dimension);
  stack_ = DenseStack(widths, config.activation);

  params_.assign(class_table_size() + stack_.parameter_count(), 0.0);
  Rng rng(seed);
  for (std::size_t i = 0; i < class_table_size(); ++i) {
    params_[i] = rng.gaussian();
  }
  stack_.initialize(std::span<double>(params_).subspan(class_table_size()), rng);
}

Vector Denoiser::time_features(int t) const {
  const int half = config_.time_features / 2;
  Vector f(config_.time_features);
  const double tau = static_cast<double>(t) / config_.num_steps;
  for (int k = 0; k < half; ++k) {
    const double freq = half == 1 ? 1.0 : std::pow(kMaxFrequency, static_cast<double>(k) / (half - 1));
    f(k) = std::sin(freq * tau);
    f(half + k) = std::cos(freq * tau);
  }
  return f;
}

Matrix Denoiser::forward(const Matrix& zt, const std::vector<int>& t, const Labels& labels,
                         Pass* pass) const {
  const auto n = zt.rows();
  require(zt.cols() == config_.dimension, ErrorCode::invalid_argument,
          "denoiser input dimension mismatch");
  require(static_cast<Eigen::Index>(t.size()) == n && static_cast<Eigen::Index>(labels.size()) == n,
          ErrorCode::invalid_argument, "denoiser needs one step and one label per row");

  const int d = config_.dimension;
  const int f = config_.time_features;
  const int e = config_.class_embedding_dim;
  Eigen::Map<const Matrix> table(params_.data(), e, config_.num_classes);

  Matrix input(d + f + e, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    require(labels[i] >= 0 && labels[i] < config_.num_classes, ErrorCode::invalid_argument,
            "class label out of range");
    input.col(i).head(d) = zt.row(i).transpose();
    if (f > 0) input.col(i).segment(d, f) = time_features(t[i]);
    if (e > 0) input.col(i).tail(e) = table.col(labels[i]);
  }
  std::span<const double> stack_params(params_.data() + class_table_size(), stack_.parameter_count());
  Matrix out = stack_.forward(stack_params, input, pass ? &pass->cache : nullptr);
  if (pass) {
    pass->input = std::move(input);
  }
  return out.transpose();
}

Matrix Denoiser::predict_noise(const Matrix& zt, const std::vector<int>& t, const Labels& labels) const {
  return forward(zt, t, labels, nullptr);
}

void Denoiser::backward(const Pass& pass, const Matrix& d_eps, const Labels& labels,
                        std::span<double> grad) const {
  require(grad.size() == params_.size(), ErrorCode::invalid_argument, "gradient buffer size mismatch");
  std::span<const double> stack_params(params_.data() + class_table_size(), stack_.parameter_count());
  Matrix d_input = stack_.backward(stack_params, pass.cache, d_eps.transpose(),
                                   grad.subspan(class_table_size()));
  const int e = config_.class_embedding_dim;
  if (e == 0) {
    return;
  }
  const int offset = config_.dimension + config_.time_features;
  Eigen::Map<Matrix> g_table(grad.data(), e, config_.num_classes);
  for (Eigen::Index i = 0; i < d_input.cols(); ++i) {
    g_table.col(labels[i]) += d_input.col(i).segment(offset, e);
  }
}

void Denoiser::save(const std::filesystem::path& path, const NoiseSchedule& schedule,
                    const nlohmann::json& mode_flags) const {
  ArrayArchive archive;
  archive.meta = {
      {"dimension", config_.dimension},
      {"schedule_kind", to_string(schedule.kind)},
      {"T", schedule.steps},
      {"class_count", config_.num_classes},
      {"mode_flags", mode_flags},
      {"time_features", config_.time_features},
      {"class_embedding_dim", config_.class_embedding_dim},
      {"hidden_width", config_.hidden_width},
      {"hidden_layers", config_.hidden_layers},
      {"activation", to_string(config_.activation)},
  };
  archive.put("class_table", {config_.num_classes, config_.class_embedding_dim},
              std::vector<double>(params_.begin(), params_.begin() + class_table_size()));
  archive.put("network", {static_cast<std::int64_t>(stack_.parameter_count())},
              std::vector<double>(params_.begin() + class_table_size(), params_.end()));
  write_archive(path, archive);
}

Denoiser Denoiser::load(const std::filesystem::path& path, nlohmann::json* meta) {
  ArrayArchive archive = read_archive(path);
  const auto& m = archive.meta;
  DenoiserConfig cfg;
  try {
    cfg.dimension = m.at("dimension").get<int>();
    cfg.num_classes = m.at("class_count").get<int>();
    cfg.num_steps = m.at("T").get<int>();
    cfg.time_features = m.at("time_features").get<int>();
    cfg.class_embedding_dim = m.at("class_embedding_dim").get<int>();
    cfg.hidden_width = m.at("hidden_width").get<int>();
    cfg.hidden_layers = m.at("hidden_layers").get<int>();
    cfg.activation = activation_from_string(m.at("activation").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::io, "checkpoint header incomplete in " + path.string() + ": " + e.what());
  }
  Denoiser model(cfg, 0);
  const auto& table = archive.get("class_table").data;
  const auto& network = archive.get("network").data;
  require(table.size() + network.size() == model.params_.size(), ErrorCode::io,
          "checkpoint parameter count does not match its header: " + path.string());
  std::copy(table.begin(), table.end(), model.params_.begin());
  std::copy(network.begin(), network.end(), model.params_.begin() + table.size());
  if (meta) {
    *meta = m;
  }
  return model;
}

}  // namespace mmdd
