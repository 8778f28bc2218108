#pragma once

#include <filesystem>
#include <vector>

#include "mmdd/types.hpp"

namespace mmdd {

struct FeatureSet {
  Matrix features;               // N x d
  Labels labels;                 // length N, in [0, num_classes)
  std::vector<long> source_ids;  // length N, indices into the originating dataset
  int num_classes = 0;

  Eigen::Index size() const { return features.rows(); }
  Eigen::Index dimension() const { return features.cols(); }

  // Builds a set whose source ids are 0..N-1. num_classes defaults to max label + 1.
  static FeatureSet from(Matrix features, Labels labels, int num_classes = -1);

  // N >= 1, finite rows, labels in range, consistent lengths.
  void validate() const;

  // Row positions (not source ids) of each class, in row order.
  std::vector<std::vector<Eigen::Index>> rows_by_class() const;
};

// Selected source ids per class, in selection (rank) order.
struct Selection {
  std::vector<std::vector<long>> by_class;

  std::size_t total() const;
};

// CSV with header class,rank,source_id.
void write_selection_csv(const std::filesystem::path& path, const Selection& selection);
Selection read_selection_csv(const std::filesystem::path& path, int num_classes);

}  // namespace mmdd
