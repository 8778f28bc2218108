#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mmdd/eval/protocol.hpp"
#include "mmdd/experiment/config.hpp"

namespace mmdd {

// Ground-truth mixture of one synthetic class, kept for oracle metrics.
struct ClassMixture {
  Vector weights;
  std::vector<Vector> means;
  double std = 1.0;

  void validate() const;  // degenerate mixtures are config errors
  int dimension() const { return means.empty() ? 0 : static_cast<int>(means.front().size()); }
};

struct SyntheticSample {
  LabeledData data;
  std::vector<int> components;  // mixture component index per row
};

struct Dataset {
  LabeledData train;
  LabeledData test;
  std::vector<ClassMixture> mixtures;  // synthetic only
  std::vector<int> train_components;
  std::vector<std::string> class_names;
};

// Draws n_per_class points per class, class by class, rows ordered by class.
SyntheticSample make_synthetic_dataset(const std::vector<ClassMixture>& classes, int n_per_class,
                                       std::uint64_t seed);

// Resolves the preset of a synthetic dataset spec into per-class mixtures.
std::vector<ClassMixture> synthetic_mixtures(const DatasetSpec& spec);

// Directory of class subdirectories holding PNG or JPEG files. Classes and
// files are taken in lexicographic order; images are resized (bilinear) to
// resolution x resolution RGB and scaled to [-1, 1].
struct ImageFolder {
  LabeledData data;
  std::vector<std::string> class_names;
  std::vector<std::filesystem::path> files;
};
ImageFolder load_image_folder(const std::filesystem::path& root, int resolution);

// Builds train and test splits for an experiment config.
Dataset load_dataset(const ExperimentConfig& cfg);

}  // namespace mmdd
