#include "mmdd/coreset/selectors.hpp"

#include <algorithm>
#include <limits>

#include "mmdd/error.hpp"
#include "mmdd/random.hpp"

namespace mmdd {

namespace {

// Class members as row positions sorted by source id.
std::vector<std::vector<Eigen::Index>> members_by_class(const FeatureSet& fs, int ipc) {
  fs.validate();
  require(ipc >= 1, ErrorCode::invalid_argument, "ipc must be positive");
  auto rows = fs.rows_by_class();
  for (int c = 0; c < fs.num_classes; ++c) {
    require(static_cast<int>(rows[c].size()) >= ipc, ErrorCode::insufficient_data,
            "class " + std::to_string(c) + " has " + std::to_string(rows[c].size()) +
                " members, fewer than ipc " + std::to_string(ipc));
    std::sort(rows[c].begin(), rows[c].end(),
              [&](Eigen::Index a, Eigen::Index b) { return fs.source_ids[a] < fs.source_ids[b]; });
  }
  return rows;
}

bool better(double value, long id, double best_value, long best_id, bool maximize) {
  if (value == best_value) return id < best_id;
  return maximize ? value > best_value : value < best_value;
}

}  // namespace

Selection random_select(const FeatureSet& fs, int ipc, std::uint64_t seed) {
  auto rows = members_by_class(fs, ipc);
  Selection s;
  s.by_class.resize(fs.num_classes);
  for (int c = 0; c < fs.num_classes; ++c) {
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
    auto& pool = rows[c];
    const long n = static_cast<long>(pool.size());
    for (long k = 0; k < ipc; ++k) {
      const long j = rng.uniform_int(k, n - 1);
      std::swap(pool[k], pool[j]);
      s.by_class[c].push_back(fs.source_ids[pool[k]]);
    }
  }
  return s;
}

Selection herding_select(const FeatureSet& fs, int ipc) {
  const auto rows = members_by_class(fs, ipc);
  Selection s;
  s.by_class.resize(fs.num_classes);
  for (int c = 0; c < fs.num_classes; ++c) {
    const auto& members = rows[c];
    const auto m = static_cast<Eigen::Index>(members.size());
    Matrix x(m, fs.dimension());
    for (Eigen::Index i = 0; i < m; ++i) x.row(i) = fs.features.row(members[i]);
    const Eigen::RowVectorXd mean = x.colwise().mean();
    x.rowwise() -= mean;

    std::vector<bool> taken(m, false);
    Eigen::RowVectorXd running = Eigen::RowVectorXd::Zero(fs.dimension());
    for (int k = 1; k <= ipc; ++k) {
      Eigen::Index best = -1;
      double best_dist = 0.0;
      for (Eigen::Index i = 0; i < m; ++i) {
        if (taken[i]) continue;
        // Centred class mean is 0, so this is |prefix mean - class mean|^2 up to k^2.
        const double dist = (running + x.row(i)).squaredNorm();
        if (best < 0 || better(dist, fs.source_ids[members[i]], best_dist, fs.source_ids[members[best]], false)) {
          best = i;
          best_dist = dist;
        }
      }
      taken[best] = true;
      running += x.row(best);
      s.by_class[c].push_back(fs.source_ids[members[best]]);
    }
  }
  return s;
}

std::vector<Eigen::Index> kcenter_greedy(const Matrix& points, const std::vector<long>& ids, int count,
                                         Eigen::Index start) {
  const auto n = points.rows();
  require(static_cast<Eigen::Index>(ids.size()) == n, ErrorCode::invalid_argument, "one id per point required");
  require(count >= 1 && count <= n, ErrorCode::insufficient_data, "k-center count outside [1, points]");
  require(start >= 0 && start < n, ErrorCode::invalid_argument, "k-center start out of range");
  std::vector<Eigen::Index> chosen{start};
  std::vector<bool> taken(n, false);
  taken[start] = true;
  std::vector<double> nearest(n);
  for (Eigen::Index i = 0; i < n; ++i) nearest[i] = (points.row(i) - points.row(start)).norm();
  while (static_cast<int>(chosen.size()) < count) {
    Eigen::Index best = -1;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (taken[i]) continue;
      if (best < 0 || better(nearest[i], ids[i], nearest[best], ids[best], true)) best = i;
    }
    taken[best] = true;
    chosen.push_back(best);
    for (Eigen::Index i = 0; i < n; ++i) {
      nearest[i] = std::min(nearest[i], (points.row(i) - points.row(best)).norm());
    }
  }
  return chosen;
}

Selection kcenter_select(const FeatureSet& fs, int ipc, std::uint64_t seed) {
  const auto rows = members_by_class(fs, ipc);
  Selection s;
  s.by_class.resize(fs.num_classes);
  for (int c = 0; c < fs.num_classes; ++c) {
    const auto& members = rows[c];
    const auto m = static_cast<Eigen::Index>(members.size());
    Matrix x(m, fs.dimension());
    std::vector<long> ids(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      x.row(i) = fs.features.row(members[i]);
      ids[i] = fs.source_ids[members[i]];
    }
    Rng rng(derive_seed(seed, {static_cast<std::uint64_t>(c)}));
    const Eigen::Index start = rng.uniform_int(0, m - 1);
    for (Eigen::Index r : kcenter_greedy(x, ids, ipc, start)) s.by_class[c].push_back(ids[r]);
  }
  return s;
}

double covering_radius(const Matrix& points, const std::vector<Eigen::Index>& selected) {
  require(!selected.empty(), ErrorCode::empty_input, "covering radius needs a nonempty selection");
  double radius = 0.0;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (Eigen::Index j : selected) nearest = std::min(nearest, (points.row(i) - points.row(j)).norm());
    radius = std::max(radius, nearest);
  }
  return radius;
}

}  // namespace mmdd
