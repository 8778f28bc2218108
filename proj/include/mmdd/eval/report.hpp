#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmdd/eval/classifier.hpp"
#include "mmdd/eval/metrics.hpp"

namespace mmdd {

struct MetricsReport {
  std::string method;
  int ipc = 0;
  std::string test_model;
  double top1_mean = 0.0;  // percent
  double top1_std = 0.0;   // percent
  std::vector<double> top1_per_seed;
  double mmd = 0.0;
  double fid = 0.0;
  double precision = 0.0;  // percent
  double recall = 0.0;     // percent
  double density = 0.0;
  double coverage = 0.0;   // percent

  nlohmann::json to_json() const;
  static MetricsReport from_json(const nlohmann::json& j);
};

inline constexpr double kMmdTolerance = 1e-12;

// Assembles and validates a report; invariant breaches are validation errors.
MetricsReport build_report(const AccuracySummary& accuracy, double mmd, double fid, const PrdcResult& prdc,
                           std::string method = {}, int ipc = 0, std::string test_model = {});

void validate_report(const MetricsReport& report);

void write_report_json(const std::filesystem::path& path, const MetricsReport& report);

// method,ipc,test_model,top1_mean,top1_std,mmd,fid,precision,recall,coverage
void write_aggregate_csv(const std::filesystem::path& path, const std::vector<MetricsReport>& reports);

}  // namespace mmdd
