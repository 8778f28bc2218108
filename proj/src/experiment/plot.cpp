#include "mmdd/experiment/plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mmdd/error.hpp"
#include "mmdd/experiment/raster.hpp"

namespace mmdd {

namespace {

constexpr Rgb kInk{30, 30, 30};
constexpr Rgb kReal{195, 195, 195};
constexpr Rgb kWarn{200, 30, 30};
constexpr Rgb kPalette[] = {{31, 119, 180}, {255, 127, 14}, {44, 160, 44}, {214, 39, 40}, {148, 103, 189},
                            {140, 86, 75},  {227, 119, 194}, {23, 190, 207}};

std::string accuracy_label(const std::optional<double>& acc) {
  if (!acc) return "acc n/a";
  char buf[32];
  std::snprintf(buf, sizeof(buf), "acc %.1f%%", *acc);
  return buf;
}

}  // namespace

ScatterResult plot_embedding_scatter(const Matrix& real, const std::vector<ScatterPanel>& panels,
                                     const std::filesystem::path& out, const PlotSpec& spec, std::uint64_t seed) {
  require(real.cols() >= 2, ErrorCode::plotting, "scatter plots need at least 2 feature dimensions");
  require(real.rows() >= 1, ErrorCode::plotting, "scatter plots need real points");
  require(!panels.empty(), ErrorCode::plotting, "scatter plots need at least one panel");
  for (const auto& p : panels) {
    require(p.points.rows() == 0 || p.points.cols() == real.cols(), ErrorCode::plotting,
            "surrogate features of '" + p.method + "' do not match the real feature dimension");
  }

  ScatterResult result;
  Matrix real2;
  std::vector<Matrix> pts2;
  if (spec.projection == "tsne" && real.cols() > 2) {
    Eigen::Index total = real.rows();
    for (const auto& p : panels) total += p.points.rows();
    Matrix all(total, real.cols());
    all.topRows(real.rows()) = real;
    Eigen::Index at = real.rows();
    for (const auto& p : panels) {
      if (p.points.rows() > 0) all.middleRows(at, p.points.rows()) = p.points;
      at += p.points.rows();
    }
    const double perplexity = std::min(spec.perplexity, (total - 1) / 3.0);
    const Matrix emb = tsne_2d(all, perplexity, spec.tsne_iterations, seed);
    real2 = emb.topRows(real.rows());
    at = real.rows();
    for (const auto& p : panels) {
      pts2.push_back(emb.middleRows(at, p.points.rows()));
      at += p.points.rows();
    }
  } else {
    result.projection = fit_pca_2d(real);
    real2 = result.projection.apply(real);
    for (const auto& p : panels) pts2.push_back(p.points.rows() > 0 ? result.projection.apply(p.points) : Matrix(0, 2));
  }

  double lo_x = real2.col(0).minCoeff(), hi_x = real2.col(0).maxCoeff();
  double lo_y = real2.col(1).minCoeff(), hi_y = real2.col(1).maxCoeff();
  for (const auto& m : pts2) {
    if (m.rows() == 0) continue;
    lo_x = std::min(lo_x, m.col(0).minCoeff());
    hi_x = std::max(hi_x, m.col(0).maxCoeff());
    lo_y = std::min(lo_y, m.col(1).minCoeff());
    hi_y = std::max(hi_y, m.col(1).maxCoeff());
  }
  require(std::isfinite(lo_x) && std::isfinite(hi_x) && std::isfinite(lo_y) && std::isfinite(hi_y),
          ErrorCode::plotting, "non-finite plot coordinates");
  const double span = std::max({hi_x - lo_x, hi_y - lo_y, 1e-9}) * 1.08;
  const double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);

  const int size = spec.panel_size;
  const int header = 28;
  const int cols = std::min<int>(3, static_cast<int>(panels.size()));
  const int rows = (static_cast<int>(panels.size()) + cols - 1) / cols;
  Canvas canvas(cols * size, rows * (size + header));

  for (std::size_t k = 0; k < panels.size(); ++k) {
    const int ox = static_cast<int>(k % cols) * size;
    const int oy = static_cast<int>(k / cols) * (size + header);
    const int inner = size - 16;
    const int px0 = ox + 8, py0 = oy + header;
    auto to_px = [&](double x, double y) {
      return std::pair<double, double>{px0 + (x - cx) / span * inner + inner / 2.0,
                                       py0 + inner / 2.0 - (y - cy) / span * inner};
    };
    const Rgb colour = kPalette[k % std::size(kPalette)];
    canvas.draw_rect(px0, py0, px0 + inner, py0 + inner, kInk);
    canvas.draw_text(ox + 8, oy + 4, panels[k].method, kInk, 1);
    const std::string acc = accuracy_label(panels[k].accuracy);
    canvas.draw_text(ox + size - 8 - Canvas::text_width(acc), oy + 4, acc, kInk, 1);

    for (Eigen::Index i = 0; i < real2.rows(); ++i) {
      auto [x, y] = to_px(real2(i, 0), real2(i, 1));
      canvas.fill_circle(x, y, 1.6, kReal);
    }
    for (Eigen::Index i = 0; i < pts2[k].rows(); ++i) {
      auto [x, y] = to_px(pts2[k](i, 0), pts2[k](i, 1));
      canvas.fill_circle(x, y, 2.4, colour);
    }
    if (pts2[k].rows() == 0) {
      const std::string warning = "warning: empty surrogate";
      canvas.draw_text(px0 + 6, py0 + 6, warning, kWarn, 1);
      result.warnings.push_back(panels[k].method + ": empty surrogate set");
    }

    const int ly = py0 + inner - 26;
    canvas.fill_rect(px0 + 4, ly - 2, px0 + 90, ly + 20, {255, 255, 255});
    canvas.fill_circle(px0 + 12, ly + 4, 3.0, kReal);
    canvas.draw_text(px0 + 20, ly + 1, "real", kInk, 1);
    canvas.fill_circle(px0 + 12, ly + 15, 3.0, colour);
    canvas.draw_text(px0 + 20, ly + 12, "surrogate", kInk, 1);
  }
  write_png(out, canvas.image());
  return result;
}

}  // namespace mmdd
