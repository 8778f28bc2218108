#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "mmdd/experiment/config.hpp"
#include "mmdd/experiment/projection.hpp"

namespace mmdd {

struct ScatterPanel {
  std::string method;
  Matrix points;                   // surrogate features, may be empty
  std::optional<double> accuracy;  // percent
};

struct ScatterResult {
  Projection2D projection;  // identity for 2D input or when t-SNE is used
  std::vector<std::string> warnings;
};

// One panel per method: real points in the background, surrogate points in
// front, a legend and an accuracy annotation. Higher-dimensional features are
// reduced to 2D by the principal projection of the real features (or t-SNE).
ScatterResult plot_embedding_scatter(const Matrix& real, const std::vector<ScatterPanel>& panels,
                                     const std::filesystem::path& out, const PlotSpec& spec = {},
                                     std::uint64_t seed = 0);

}  // namespace mmdd
