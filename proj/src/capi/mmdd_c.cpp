#include "mmdd/mmdd.h"

#include <cstring>
#include <exception>
#include <string>

#include "mmdd/control/mixture.hpp"
#include "mmdd/coreset/selectors.hpp"
#include "mmdd/diffusion/noising.hpp"
#include "mmdd/diffusion/schedule.hpp"
#include "mmdd/error.hpp"
#include "mmdd/eval/metrics.hpp"
#include "mmdd/experiment/config.hpp"
#include "mmdd/experiment/pipeline.hpp"
#include "mmdd/minimax/losses.hpp"
#include "mmdd/minimax/memory_bank.hpp"

struct mmdd_config {
  mmdd::ExperimentConfig cfg;
};

struct mmdd_schedule {
  mmdd::NoiseSchedule schedule;
};

struct mmdd_bank {
  mmdd::MemoryBank bank;
};

struct mmdd_mixture {
  mmdd::GaussianMixture mixture;
};

namespace {

thread_local std::string g_last_error;

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

mmdd::Matrix rows_to_matrix(const double* data, size_t n, size_t dim) {
  if (n == 0 || dim == 0) return mmdd::Matrix(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
  return Eigen::Map<const RowMatrix>(data, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(dim));
}

template <class F>
mmdd_status guarded(F&& body) {
  g_last_error.clear();
  try {
    body();
    return MMDD_OK;
  } catch (const mmdd::Error& e) {
    g_last_error = e.what();
    return static_cast<mmdd_status>(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return MMDD_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return MMDD_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown error";
    return MMDD_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  mmdd::require(p != nullptr, mmdd::ErrorCode::invalid_argument, std::string(what) + " must not be null");
}

mmdd::Labels to_labels(const int* labels, size_t n) { return mmdd::Labels(labels, labels + n); }

}  // namespace

extern "C" {

const char* mmdd_version(void) { return "0.1.0"; }

const char* mmdd_status_name(mmdd_status status) {
  if (status == MMDD_OK) return "ok";
  return mmdd::error_code_name(static_cast<mmdd::ErrorCode>(status));
}

const char* mmdd_last_error(void) { return g_last_error.c_str(); }

mmdd_status mmdd_config_load(const char* path, mmdd_config** out) {
  return guarded([&] {
    need(path, "path");
    need(out, "out");
    *out = new mmdd_config{mmdd::load_config(path)};
  });
}

mmdd_status mmdd_config_parse(const char* json_text, mmdd_config** out) {
  return guarded([&] {
    need(json_text, "json_text");
    need(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
      mmdd::fail(mmdd::ErrorCode::config, std::string("config does not parse: ") + e.what());
    }
    *out = new mmdd_config{mmdd::ExperimentConfig::from_json(j)};
  });
}

void mmdd_config_free(mmdd_config* cfg) { delete cfg; }

mmdd_status mmdd_config_set_seed(mmdd_config* cfg, uint64_t seed) {
  return guarded([&] {
    need(cfg, "cfg");
    cfg->cfg.seed = seed;
  });
}

mmdd_status mmdd_config_set_output(mmdd_config* cfg, const char* dir) {
  return guarded([&] {
    need(cfg, "cfg");
    need(dir, "dir");
    mmdd::require(dir[0] != '\0', mmdd::ErrorCode::config, "config key 'output': must not be empty");
    cfg->cfg.output = dir;
  });
}

mmdd_status mmdd_config_hash(const mmdd_config* cfg, char* buf, size_t buf_len) {
  return guarded([&] {
    need(cfg, "cfg");
    need(buf, "buf");
    const std::string h = cfg->cfg.hash();
    mmdd::require(buf_len > h.size(), mmdd::ErrorCode::invalid_argument, "hash buffer needs 65 bytes");
    std::memcpy(buf, h.c_str(), h.size() + 1);
  });
}

mmdd_status mmdd_config_save(const mmdd_config* cfg, const char* path) {
  return guarded([&] {
    need(cfg, "cfg");
    need(path, "path");
    mmdd::save_config(cfg->cfg, path);
  });
}

mmdd_status mmdd_run_distill(const mmdd_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    mmdd::run_distill(cfg->cfg);
  });
}

mmdd_status mmdd_run_eval(const mmdd_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    mmdd::run_eval(cfg->cfg);
  });
}

mmdd_status mmdd_run_control_sim(const mmdd_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    mmdd::run_control_sim(cfg->cfg);
  });
}

mmdd_status mmdd_run_plot(const mmdd_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    mmdd::run_plot(cfg->cfg);
  });
}

mmdd_status mmdd_run_all(const mmdd_config* cfg) {
  return guarded([&] {
    need(cfg, "cfg");
    mmdd::run_all(cfg->cfg);
  });
}

mmdd_status mmdd_schedule_create(int steps, const char* kind, mmdd_schedule** out) {
  return guarded([&] {
    need(kind, "kind");
    need(out, "out");
    *out = new mmdd_schedule{mmdd::make_noise_schedule(steps, mmdd::schedule_kind_from_string(kind))};
  });
}

void mmdd_schedule_free(mmdd_schedule* schedule) { delete schedule; }

mmdd_status mmdd_schedule_alpha_bar(const mmdd_schedule* schedule, int t, double* out) {
  return guarded([&] {
    need(schedule, "schedule");
    need(out, "out");
    mmdd::require(t >= 0 && t <= schedule->schedule.steps, mmdd::ErrorCode::invalid_argument, "t out of range");
    *out = schedule->schedule.alpha_bar[t];
  });
}

mmdd_status mmdd_forward_noise(const mmdd_schedule* schedule, const double* z0, const double* eps, size_t dim,
                               int t, double* out) {
  return guarded([&] {
    need(schedule, "schedule");
    need(z0, "z0");
    need(eps, "eps");
    need(out, "out");
    const auto d = static_cast<Eigen::Index>(dim);
    const mmdd::Vector zt = mmdd::forward_noise(Eigen::Map<const mmdd::Vector>(z0, d), t,
                                                Eigen::Map<const mmdd::Vector>(eps, d), schedule->schedule);
    std::memcpy(out, zt.data(), dim * sizeof(double));
  });
}

mmdd_status mmdd_bank_create(int capacity, int num_classes, int dim, int global_partition, mmdd_bank** out) {
  return guarded([&] {
    need(out, "out");
    *out = new mmdd_bank{mmdd::MemoryBank(capacity, num_classes, dim,
                                          global_partition ? mmdd::BankPartition::global
                                                           : mmdd::BankPartition::per_class)};
  });
}

void mmdd_bank_free(mmdd_bank* bank) { delete bank; }

mmdd_status mmdd_bank_enqueue(mmdd_bank* bank, const double* rows, const int* labels, size_t n) {
  return guarded([&] {
    need(bank, "bank");
    if (n == 0) return;
    need(rows, "rows");
    need(labels, "labels");
    bank->bank.enqueue(rows_to_matrix(rows, n, static_cast<size_t>(bank->bank.dimension())), to_labels(labels, n));
  });
}

mmdd_status mmdd_bank_size(const mmdd_bank* bank, int label, size_t* out) {
  return guarded([&] {
    need(bank, "bank");
    need(out, "out");
    *out = bank->bank.size(label);
  });
}

mmdd_status mmdd_repr_loss(const mmdd_bank* bank, const double* z_hat, const int* labels, size_t n, double* out) {
  return guarded([&] {
    need(bank, "bank");
    need(z_hat, "z_hat");
    need(labels, "labels");
    need(out, "out");
    *out = mmdd::repr_loss(rows_to_matrix(z_hat, n, static_cast<size_t>(bank->bank.dimension())), bank->bank,
                           to_labels(labels, n))
               .value;
  });
}

mmdd_status mmdd_div_loss(const mmdd_bank* bank, const double* z_hat, const int* labels, size_t n, double* out) {
  return guarded([&] {
    need(bank, "bank");
    need(z_hat, "z_hat");
    need(labels, "labels");
    need(out, "out");
    *out = mmdd::div_loss(rows_to_matrix(z_hat, n, static_cast<size_t>(bank->bank.dimension())), bank->bank,
                          to_labels(labels, n))
               .value;
  });
}

mmdd_status mmdd_select(const char* method, const double* features, const int* labels, size_t n, size_t dim,
                        int num_classes, int ipc, uint64_t seed, int64_t* out_ids) {
  return guarded([&] {
    need(method, "method");
    need(features, "features");
    need(labels, "labels");
    need(out_ids, "out_ids");
    const mmdd::FeatureSet fs = mmdd::FeatureSet::from(rows_to_matrix(features, n, dim), to_labels(labels, n),
                                                       num_classes);
    const std::string m = method;
    mmdd::Selection sel;
    if (m == "random") {
      sel = mmdd::random_select(fs, ipc, seed);
    } else if (m == "herding") {
      sel = mmdd::herding_select(fs, ipc);
    } else if (m == "kcenter") {
      sel = mmdd::kcenter_select(fs, ipc, seed);
    } else {
      mmdd::fail(mmdd::ErrorCode::invalid_argument, "unknown selection method '" + m + "'");
    }
    size_t at = 0;
    for (const auto& cls : sel.by_class)
      for (long id : cls) out_ids[at++] = id;
  });
}

mmdd_status mmdd_mmd_rbf(const double* a, size_t na, const double* b, size_t nb, size_t dim, double bandwidth,
                         double* out) {
  return guarded([&] {
    need(a, "a");
    need(b, "b");
    need(out, "out");
    std::optional<double> h;
    if (bandwidth > 0.0) h = bandwidth;
    *out = mmdd::mmd_rbf(rows_to_matrix(a, na, dim), rows_to_matrix(b, nb, dim), h);
  });
}

mmdd_status mmdd_prdc(const double* real, size_t n_real, const double* gen, size_t n_gen, size_t dim, int k,
                      double* out) {
  return guarded([&] {
    need(real, "real");
    need(gen, "gen");
    need(out, "out");
    const mmdd::PrdcResult r = mmdd::prdc(rows_to_matrix(real, n_real, dim), rows_to_matrix(gen, n_gen, dim), k);
    out[0] = r.precision;
    out[1] = r.recall;
    out[2] = r.density;
    out[3] = r.coverage;
  });
}

mmdd_status mmdd_gaussian_fid(const double* real, size_t n_real, const double* gen, size_t n_gen, size_t dim,
                              double* out) {
  return guarded([&] {
    need(real, "real");
    need(gen, "gen");
    need(out, "out");
    *out = mmdd::gaussian_fid(rows_to_matrix(real, n_real, dim), rows_to_matrix(gen, n_gen, dim));
  });
}

mmdd_status mmdd_mixture_create(const double* weights, const double* means, size_t components, size_t dim,
                                mmdd_mixture** out) {
  return guarded([&] {
    need(weights, "weights");
    need(means, "means");
    need(out, "out");
    std::vector<mmdd::Vector> m;
    for (size_t k = 0; k < components; ++k)
      m.push_back(Eigen::Map<const mmdd::Vector>(means + k * dim, static_cast<Eigen::Index>(dim)));
    *out = new mmdd_mixture{mmdd::GaussianMixture::make(std::vector<double>(weights, weights + components), m)};
  });
}

void mmdd_mixture_free(mmdd_mixture* mixture) { delete mixture; }

mmdd_status mmdd_follmer_drift(const mmdd_mixture* mixture, const double* z, double t, double* out) {
  return guarded([&] {
    need(mixture, "mixture");
    need(z, "z");
    need(out, "out");
    const auto d = static_cast<Eigen::Index>(mixture->mixture.dimension());
    const mmdd::Vector u = mmdd::follmer_drift(Eigen::Map<const mmdd::Vector>(z, d), t, mixture->mixture);
    std::memcpy(out, u.data(), static_cast<size_t>(d) * sizeof(double));
  });
}

}  // extern "C"
