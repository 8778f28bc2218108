#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mmdd/eval/protocol.hpp"
#include "mmdd/eval/report.hpp"
#include "mmdd/experiment/config.hpp"

namespace mmdd {

// Experiment directory layout, relative to cfg.output.
inline constexpr const char* kSurrogateDir = "surrogate";
inline constexpr const char* kCheckpointDir = "checkpoints";
inline constexpr const char* kReportDir = "reports";
inline constexpr const char* kPlotDir = "plots";
inline constexpr const char* kManifestFile = "manifest.json";

// Records what a run produced. Every file written by a verb is listed with its
// SHA-256; a verb that throws leaves the manifest marked incomplete.
class Manifest {
 public:
  // Loads the manifest already in `dir` if its config hash matches; a manifest
  // from a different config is an orchestration error.
  static Manifest open(const std::filesystem::path& dir, const ExperimentConfig& cfg);

  void begin(const std::string& verb);
  void finish(const std::string& verb, double seconds);
  void abort(const std::string& verb, const std::string& message);
  void add_artifact(const std::filesystem::path& relative, const std::string& kind);
  void add_timing(const std::string& stage, double seconds);
  void save() const;

  const nlohmann::json& document() const { return doc_; }

 private:
  std::filesystem::path dir_;
  nlohmann::json doc_;
};

std::string surrogate_file(Method m, int ipc);
std::string report_file(Method m, int ipc, const std::string& test_model);

// CSV with header label,f0,...,f{d-1}.
void write_surrogate_csv(const std::filesystem::path& path, const Matrix& x, const Labels& y);
LabeledData read_surrogate_csv(const std::filesystem::path& path, int num_classes);

void run_distill(const ExperimentConfig& cfg);
std::vector<MetricsReport> run_eval(const ExperimentConfig& cfg);
void run_control_sim(const ExperimentConfig& cfg);
void run_plot(const ExperimentConfig& cfg);
void run_all(const ExperimentConfig& cfg);

}  // namespace mmdd
