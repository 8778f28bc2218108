#include <doctest.h>

#include "mmdd/error.hpp"
#include "mmdd/experiment/image_io.hpp"
#include "mmdd/experiment/plot.hpp"
#include "mmdd/experiment/projection.hpp"
#include "support.hpp"

using namespace mmdd;

TEST_CASE("principal projection") {
  std::mt19937_64 gen(2);
  const Matrix flat = testing::random_matrix(gen, 40, 2);
  const Projection2D id = fit_pca_2d(flat);
  CHECK(id.identity);
  CHECK(id.apply(flat) == flat);

  // Ten dimensions with decreasing spread along the axes.
  Matrix x = testing::random_matrix(gen, 500, 10);
  for (int j = 0; j < 10; ++j) x.col(j) *= 10.0 - j;
  const Projection2D p = fit_pca_2d(x);
  CHECK_FALSE(p.identity);
  REQUIRE(p.eigenvalues.size() == 10);
  for (int j = 1; j < 10; ++j) CHECK(p.eigenvalues[j] <= p.eigenvalues[j - 1]);
  CHECK(std::abs(p.basis(0, 0)) > 0.95);
  CHECK(std::abs(p.basis(1, 1)) > 0.9);
  CHECK((p.basis.transpose() * p.basis - Matrix::Identity(2, 2)).norm() <= 1e-10);
  CHECK(p.apply(x).cols() == 2);

  CHECK_THROWS_AS(fit_pca_2d(Matrix::Zero(5, 1)), Error);
}

TEST_CASE("scatter plot panels") {
  std::mt19937_64 gen(4);
  const Matrix real = testing::random_matrix(gen, 100, 3);
  testing::TempDir dir("plot");
  const ScatterResult r = plot_embedding_scatter(
      real, {{"random", real.topRows(10), 41.5}, {"herding", Matrix(0, 3), std::nullopt}}, dir / "scatter.png");
  CHECK(r.warnings.size() == 1);
  CHECK(r.warnings[0].find("herding") != std::string::npos);
  CHECK_FALSE(r.projection.identity);
  const RasterImage img = read_image(dir / "scatter.png");
  CHECK(img.width > img.height);

  try {
    plot_embedding_scatter(Matrix::Zero(10, 1), {{"random", Matrix::Zero(2, 1), std::nullopt}}, dir / "bad.png");
    FAIL("expected a plotting error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::plotting);
  }
}

TEST_CASE("t-SNE keeps separated clusters apart") {
  std::mt19937_64 gen(8);
  Matrix x = testing::random_matrix(gen, 40, 5, 0.1);
  x.bottomRows(20).array() += 5.0;
  const Matrix y = tsne_2d(x, 5.0, 300, 1);
  const Eigen::RowVectorXd a = y.topRows(20).colwise().mean(), b = y.bottomRows(20).colwise().mean();
  double spread = 0.0;
  for (int i = 0; i < 20; ++i) spread = std::max(spread, (y.row(i) - a).norm());
  CHECK((a - b).norm() > spread);
  CHECK(tsne_2d(x, 5.0, 300, 1) == y);
}
