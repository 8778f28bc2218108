#include "mmdd/eval/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mmdd/error.hpp"

namespace mmdd {

namespace {

void check_percent(double v, const char* name) {
  require(std::isfinite(v) && v >= 0.0 && v <= 100.0, ErrorCode::validation,
          std::string(name) + " must be a percentage in [0, 100]");
}

}  // namespace

nlohmann::json MetricsReport::to_json() const {
  return {{"method", method},       {"ipc", ipc},
          {"test_model", test_model}, {"top1_mean", top1_mean},
          {"top1_std", top1_std},   {"top1_per_seed", top1_per_seed},
          {"mmd", mmd},             {"fid", fid},
          {"precision", precision}, {"recall", recall},
          {"density", density},     {"coverage", coverage}};
}

MetricsReport MetricsReport::from_json(const nlohmann::json& j) {
  MetricsReport r;
  try {
    r.method = j.at("method").get<std::string>();
    r.ipc = j.at("ipc").get<int>();
    r.test_model = j.at("test_model").get<std::string>();
    r.top1_mean = j.at("top1_mean").get<double>();
    r.top1_std = j.at("top1_std").get<double>();
    r.top1_per_seed = j.value("top1_per_seed", std::vector<double>{});
    r.mmd = j.at("mmd").get<double>();
    r.fid = j.at("fid").get<double>();
    r.precision = j.at("precision").get<double>();
    r.recall = j.at("recall").get<double>();
    r.density = j.value("density", 0.0);
    r.coverage = j.at("coverage").get<double>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::validation, std::string("malformed metrics report: ") + e.what());
  }
  validate_report(r);
  return r;
}

void validate_report(const MetricsReport& r) {
  check_percent(r.top1_mean, "top1_mean");
  require(std::isfinite(r.top1_std) && r.top1_std >= 0.0, ErrorCode::validation,
          "top1_std must be nonnegative");
  for (double a : r.top1_per_seed) check_percent(a, "top1_per_seed");
  require(std::isfinite(r.mmd) && r.mmd >= -kMmdTolerance, ErrorCode::validation, "mmd must be nonnegative");
  require(std::isfinite(r.fid) && r.fid >= 0.0, ErrorCode::validation, "fid must be nonnegative");
  check_percent(r.precision, "precision");
  check_percent(r.recall, "recall");
  check_percent(r.coverage, "coverage");
  require(std::isfinite(r.density) && r.density >= 0.0, ErrorCode::validation, "density must be nonnegative");
  require(r.ipc >= 0, ErrorCode::validation, "ipc must be nonnegative");
}

MetricsReport build_report(const AccuracySummary& accuracy, double mmd, double fid, const PrdcResult& prdc,
                           std::string method, int ipc, std::string test_model) {
  MetricsReport r;
  r.method = std::move(method);
  r.ipc = ipc;
  r.test_model = std::move(test_model);
  r.top1_mean = accuracy.mean;
  r.top1_std = accuracy.std;
  r.top1_per_seed = accuracy.per_seed;
  r.mmd = mmd;
  r.fid = fid;
  r.precision = prdc.precision;
  r.recall = prdc.recall;
  r.density = prdc.density;
  r.coverage = prdc.coverage;
  validate_report(r);
  return r;
}

void write_report_json(const std::filesystem::path& path, const MetricsReport& report) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot write report: " + path.string());
  out << report.to_json().dump(2) << '\n';
}

void write_aggregate_csv(const std::filesystem::path& path, const std::vector<MetricsReport>& reports) {
  std::ofstream out(path, std::ios::trunc);
  require(out.good(), ErrorCode::io, "cannot write aggregate CSV: " + path.string());
  out << "method,ipc,test_model,top1_mean,top1_std,mmd,fid,precision,recall,coverage\n";
  char line[512];
  for (const auto& r : reports) {
    std::snprintf(line, sizeof(line), "%s,%d,%s,%.4f,%.4f,%.8f,%.8f,%.4f,%.4f,%.4f\n", r.method.c_str(), r.ipc,
                  r.test_model.c_str(), r.top1_mean, r.top1_std, r.mmd, r.fid, r.precision, r.recall, r.coverage);
    out << line;
  }
}

}  // namespace mmdd
