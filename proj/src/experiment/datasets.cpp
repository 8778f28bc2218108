#include "mmdd/experiment/datasets.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>

#include "mmdd/error.hpp"
#include "mmdd/experiment/image_io.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kTrainStream = 1;
constexpr std::uint64_t kTestStream = 2;

Vector normalized_weights(const std::vector<double>& w, int count) {
  if (w.empty()) return Vector::Constant(count, 1.0 / count);
  Vector v = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  require((v.array() > 0.0).all() && v.allFinite(), ErrorCode::config, "mixture weights must be positive");
  return v / v.sum();
}

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

}  // namespace

void ClassMixture::validate() const {
  require(!means.empty() && weights.size() == static_cast<Eigen::Index>(means.size()), ErrorCode::config,
          "degenerate mixture: needs one weight per component");
  require((weights.array() > 0.0).all(), ErrorCode::config, "degenerate mixture: weights must be positive");
  require(std::abs(weights.sum() - 1.0) <= 1e-9, ErrorCode::config, "degenerate mixture: weights must sum to 1");
  require(std > 0.0 && std::isfinite(std), ErrorCode::config, "degenerate mixture: std must be positive");
  for (const auto& m : means) {
    require(m.size() == means.front().size() && m.size() > 0 && m.allFinite(), ErrorCode::config,
            "degenerate mixture: means must be finite with a shared dimension");
  }
}

std::vector<ClassMixture> synthetic_mixtures(const DatasetSpec& spec) {
  std::vector<ClassMixture> out;
  const double two_pi = 2.0 * std::numbers::pi;
  if (spec.preset == "custom") {
    for (const auto& c : spec.classes) {
      ClassMixture m;
      require(!c.means.empty(), ErrorCode::config, "degenerate mixture: no components");
      m.weights = normalized_weights(c.weights, static_cast<int>(c.means.size()));
      require(c.weights.empty() || c.weights.size() == c.means.size(), ErrorCode::config,
              "degenerate mixture: needs one weight per component");
      for (const auto& mean : c.means) {
        m.means.push_back(Eigen::Map<const Vector>(mean.data(), static_cast<Eigen::Index>(mean.size())));
      }
      m.std = c.std;
      m.validate();
      out.push_back(std::move(m));
    }
    return out;
  }
  const int n_classes = spec.num_classes;
  for (int c = 0; c < n_classes; ++c) {
    ClassMixture m;
    m.weights = normalized_weights(spec.mode_weights, spec.modes);
    m.std = spec.component_std;
    Vector centre = Vector::Zero(2);
    if (spec.preset == "ring" && n_classes > 1) {
      centre << spec.class_spread * std::cos(two_pi * c / n_classes), spec.class_spread * std::sin(two_pi * c / n_classes);
    }
    for (int k = 0; k < spec.modes; ++k) {
      const double angle = spec.preset == "sectors" ? two_pi * (c + (k + 0.5) / spec.modes) / n_classes
                                                    : two_pi * k / spec.modes;
      Vector mean(2);
      mean << centre(0) + spec.radius * std::cos(angle), centre(1) + spec.radius * std::sin(angle);
      m.means.push_back(mean);
    }
    m.validate();
    out.push_back(std::move(m));
  }
  return out;
}

SyntheticSample make_synthetic_dataset(const std::vector<ClassMixture>& classes, int n_per_class,
                                       std::uint64_t seed) {
  require(n_per_class >= 1, ErrorCode::invalid_argument, "n_per_class must be positive");
  require(!classes.empty(), ErrorCode::config, "synthetic dataset needs at least one class");
  for (const auto& c : classes) {
    c.validate();
    require(c.dimension() == classes.front().dimension(), ErrorCode::config, "classes must share a dimension");
  }
  const int d = classes.front().dimension();
  const int n_classes = static_cast<int>(classes.size());
  SyntheticSample out;
  out.data.num_classes = n_classes;
  out.data.x.resize(static_cast<Eigen::Index>(n_classes) * n_per_class, d);
  out.data.y.reserve(out.data.x.rows());
  out.components.reserve(out.data.x.rows());
  Eigen::Index row = 0;
  for (int c = 0; c < n_classes; ++c) {
    const ClassMixture& mix = classes[c];
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
    for (int i = 0; i < n_per_class; ++i, ++row) {
      double u = rng.uniform();
      int k = 0;
      while (k + 1 < static_cast<int>(mix.means.size()) && u >= mix.weights(k)) {
        u -= mix.weights(k);
        ++k;
      }
      for (int j = 0; j < d; ++j) out.data.x(row, j) = mix.means[k](j) + mix.std * rng.gaussian();
      out.data.y.push_back(c);
      out.components.push_back(k);
    }
  }
  return out;
}

ImageFolder load_image_folder(const fs::path& root, int resolution) {
  require(resolution >= 1, ErrorCode::invalid_argument, "resolution must be positive");
  require(fs::is_directory(root), ErrorCode::ingestion, "image folder " + root.string() + " is not a directory");
  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root)) {
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  }
  std::sort(class_dirs.begin(), class_dirs.end());
  require(!class_dirs.empty(), ErrorCode::ingestion, "image folder " + root.string() + " has no class directories");

  ImageFolder out;
  out.data.num_classes = static_cast<int>(class_dirs.size());
  out.data.image_shape = ImageShape{3, resolution, resolution};
  const int flat = out.data.image_shape->flat_size();
  std::vector<std::vector<double>> rows;
  for (std::size_t c = 0; c < class_dirs.size(); ++c) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(class_dirs[c])) {
      if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    const std::string name = class_dirs[c].filename().string();
    require(!files.empty(), ErrorCode::ingestion, "class directory '" + name + "' holds no images");
    out.class_names.push_back(name);
    for (const auto& f : files) {
      RasterImage img = resize_bilinear(read_image(f), resolution, resolution);
      std::vector<double> row(flat);
      for (int ch = 0; ch < 3; ++ch)
        for (int y = 0; y < resolution; ++y)
          for (int x = 0; x < resolution; ++x) {
            const std::uint8_t v = img.pixels[(static_cast<std::size_t>(y) * resolution + x) * 3 + ch];
            row[(static_cast<std::size_t>(ch) * resolution + y) * resolution + x] = v / 127.5 - 1.0;
          }
      rows.push_back(std::move(row));
      out.data.y.push_back(static_cast<int>(c));
      out.files.push_back(f);
    }
  }
  out.data.x.resize(static_cast<Eigen::Index>(rows.size()), flat);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < flat; ++j) out.data.x(static_cast<Eigen::Index>(i), j) = rows[i][j];
  return out;
}

Dataset load_dataset(const ExperimentConfig& cfg) {
  const DatasetSpec& spec = cfg.dataset;
  Dataset ds;
  if (spec.kind == "synthetic") {
    ds.mixtures = synthetic_mixtures(spec);
    SyntheticSample train = make_synthetic_dataset(ds.mixtures, spec.n_per_class, derive_seed(cfg.seed, {kTrainStream}));
    SyntheticSample test =
        make_synthetic_dataset(ds.mixtures, spec.n_test_per_class, derive_seed(cfg.seed, {kTestStream}));
    ds.train = std::move(train.data);
    ds.train_components = std::move(train.components);
    ds.test = std::move(test.data);
    for (int c = 0; c < ds.train.num_classes; ++c) ds.class_names.push_back("class_" + std::to_string(c));
    return ds;
  }

  ImageFolder folder = load_image_folder(spec.path, spec.resolution);
  ds.class_names = folder.class_names;
  const int n_classes = folder.data.num_classes;
  std::vector<Eigen::Index> train_rows, test_rows;
  for (int c = 0; c < n_classes; ++c) {
    std::vector<Eigen::Index> members;
    for (Eigen::Index i = 0; i < folder.data.size(); ++i)
      if (folder.data.y[i] == c) members.push_back(i);
    const auto n_test = static_cast<std::size_t>(std::floor(spec.test_fraction * members.size()));
    require(n_test >= 1 && n_test < members.size(), ErrorCode::ingestion,
            "class '" + folder.class_names[c] + "' has too few images for a train/test split");
    train_rows.insert(train_rows.end(), members.begin(), members.end() - static_cast<std::ptrdiff_t>(n_test));
    test_rows.insert(test_rows.end(), members.end() - static_cast<std::ptrdiff_t>(n_test), members.end());
  }
  auto take = [&](const std::vector<Eigen::Index>& rows) {
    LabeledData d;
    d.num_classes = n_classes;
    d.image_shape = folder.data.image_shape;
    d.x.resize(static_cast<Eigen::Index>(rows.size()), folder.data.x.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      d.x.row(static_cast<Eigen::Index>(i)) = folder.data.x.row(rows[i]);
      d.y.push_back(folder.data.y[rows[i]]);
    }
    return d;
  };
  ds.train = take(train_rows);
  ds.test = take(test_rows);
  return ds;
}

}  // namespace mmdd
