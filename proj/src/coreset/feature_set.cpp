#include "mmdd/coreset/feature_set.hpp"

#include <fstream>
#include <sstream>

#include "mmdd/error.hpp"

namespace mmdd {

FeatureSet FeatureSet::from(Matrix features, Labels labels, int num_classes) {
  FeatureSet fs;
  fs.features = std::move(features);
  fs.labels = std::move(labels);
  fs.source_ids.resize(fs.labels.size());
  for (std::size_t i = 0; i < fs.source_ids.size(); ++i) fs.source_ids[i] = static_cast<long>(i);
  if (num_classes < 0) {
    int max_label = -1;
    for (int l : fs.labels) max_label = std::max(max_label, l);
    num_classes = max_label + 1;
  }
  fs.num_classes = num_classes;
  return fs;
}

void FeatureSet::validate() const {
  require(features.rows() >= 1, ErrorCode::empty_input, "feature set is empty");
  require(static_cast<Eigen::Index>(labels.size()) == features.rows() &&
              static_cast<Eigen::Index>(source_ids.size()) == features.rows(),
          ErrorCode::invalid_argument, "feature set lengths disagree");
  require(features.allFinite(), ErrorCode::invalid_argument, "feature set has non-finite rows");
  for (int l : labels) {
    require(l >= 0 && l < num_classes, ErrorCode::invalid_argument,
            "label " + std::to_string(l) + " outside the class set");
  }
}

std::vector<std::vector<Eigen::Index>> FeatureSet::rows_by_class() const {
  std::vector<std::vector<Eigen::Index>> rows(num_classes);
  for (std::size_t i = 0; i < labels.size(); ++i) rows[labels[i]].push_back(static_cast<Eigen::Index>(i));
  return rows;
}

std::size_t Selection::total() const {
  std::size_t n = 0;
  for (const auto& c : by_class) n += c.size();
  return n;
}

void write_selection_csv(const std::filesystem::path& path, const Selection& selection) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot write selection: " + path.string());
  out << "class,rank,source_id\n";
  for (std::size_t c = 0; c < selection.by_class.size(); ++c) {
    for (std::size_t r = 0; r < selection.by_class[c].size(); ++r) {
      out << c << ',' << r << ',' << selection.by_class[c][r] << '\n';
    }
  }
  require(out.good(), ErrorCode::io, "failed writing selection: " + path.string());
}

Selection read_selection_csv(const std::filesystem::path& path, int num_classes) {
  std::ifstream in(path);
  require(in.good(), ErrorCode::io, "cannot read selection: " + path.string());
  std::string line;
  std::getline(in, line);
  require(line == "class,rank,source_id", ErrorCode::io, "unexpected selection header in " + path.string());
  Selection s;
  s.by_class.resize(num_classes);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    long c = 0, r = 0, id = 0;
    char comma1 = 0, comma2 = 0;
    row >> c >> comma1 >> r >> comma2 >> id;
    require(!row.fail() && comma1 == ',' && comma2 == ',' && c >= 0 && c < num_classes, ErrorCode::io,
            "malformed selection row '" + line + "' in " + path.string());
    auto& ids = s.by_class[c];
    require(r == static_cast<long>(ids.size()), ErrorCode::io, "selection ranks out of order in " + path.string());
    ids.push_back(id);
  }
  return s;
}

}  // namespace mmdd
