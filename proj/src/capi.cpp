#include "wetting/wetting.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <new>
#include <optional>
#include <string>

#include "wetting/model.hpp"
#include "wetting/oracle.hpp"
#include "wetting/regimes.hpp"
#include "wetting/renewal.hpp"
#include "wetting/sampler.hpp"
#include "wetting/scaling.hpp"

#ifndef WETTING_VERSION
#define WETTING_VERSION "0.1.0"
#endif

using namespace wetting;

struct wt_model {
  DiscretePotential potential;
  WalkLaw walk;
};

struct wt_kernel {
  ContactKernel kernel;
};

struct wt_table {
  PartitionTable table;
};

struct wt_sampler {
  WalkLaw walk;
  std::size_t n = 0;
  Boundary boundary = Boundary::Free;
  bool infinite = false;
  std::optional<FiniteVolumeSampler> finite;
  std::optional<InfiniteVolumeSampler> limit;
  std::optional<PathSampler> paths;
};

struct wt_sample {
  ContactSet contacts;
  InterfacePath path;
};

struct wt_rows {
  std::vector<OracleRow> rows;
};

namespace {

thread_local std::string last_error;

wt_status fail(wt_status status, const char* what) {
  last_error = what;
  return status;
}

// Runs `body`, translating exceptions into status codes.
template <class F>
wt_status guarded(F&& body) {
  try {
    body();
    last_error.clear();
    return WT_OK;
  } catch (const Error& e) {
    return fail(static_cast<wt_status>(static_cast<int>(e.code())), e.what());
  } catch (const std::bad_alloc&) {
    return fail(WT_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return fail(WT_INTERNAL, e.what());
  }
}

void need(const void* p, const char* name) {
  if (p == nullptr) throw Error(Errc::InvalidArgument, std::string(name) + " must not be NULL");
}

Boundary to_boundary(wt_boundary b) {
  if (b == WT_FREE) return Boundary::Free;
  if (b == WT_CONSTRAINED) return Boundary::Constrained;
  throw Error(Errc::InvalidArgument, "unknown boundary");
}

SolverOptions to_options(wt_solver s) {
  SolverOptions o;
  switch (s) {
    case WT_SOLVER_AUTO: o.strategy = SolverStrategy::Auto; break;
    case WT_SOLVER_DIRECT: o.strategy = SolverStrategy::Direct; break;
    case WT_SOLVER_FAST: o.strategy = SolverStrategy::Fast; break;
    default: throw Error(Errc::InvalidArgument, "unknown solver strategy");
  }
  return o;
}

wt_status make_model(DiscretePotential potential, wt_model** out) {
  return guarded([&] {
    need(out, "out");
    *out = nullptr;
    WalkLaw walk = build_walk(potential);
    *out = new wt_model{std::move(potential), std::move(walk)};
  });
}

}  // namespace

extern "C" {

const char* wt_version(void) { return WETTING_VERSION; }

const char* wt_status_name(wt_status status) {
  if (status == WT_OK) return "Ok";
  if (status == WT_INTERNAL) return "Internal";
  if (status >= WT_INVALID_ARGUMENT && status <= WT_INFEASIBLE) return errc_name(static_cast<Errc>(status));
  return "Unknown";
}

const char* wt_last_error(void) { return last_error.c_str(); }

wt_status wt_model_load(const char* path, wt_model** out) {
  if (path == nullptr) return fail(WT_INVALID_ARGUMENT, "path must not be NULL");
  DiscretePotential potential;
  const wt_status st = guarded([&] { potential = DiscretePotential::load(path); });
  return st != WT_OK ? st : make_model(std::move(potential), out);
}

wt_status wt_model_parse(const char* text, wt_model** out) {
  if (text == nullptr) return fail(WT_INVALID_ARGUMENT, "text must not be NULL");
  DiscretePotential potential;
  const wt_status st = guarded([&] { potential = DiscretePotential::parse(text); });
  return st != WT_OK ? st : make_model(std::move(potential), out);
}

void wt_model_free(wt_model* model) { delete model; }

wt_status wt_model_get_info(const wt_model* model, wt_model_info* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    out->min_step = model->walk.min_step;
    out->max_step = model->walk.max_step;
    out->exact = model->potential.exact() ? 1 : 0;
    out->kappa = model->walk.kappa;
    out->mean = model->walk.mean;
    out->sigma2 = model->walk.sigma2;
    out->l_const = model->walk.l_const;
    out->fingerprint = model->potential.fingerprint();
  });
}

wt_status wt_model_survival(const wt_model* model, size_t n_max, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    const auto p = survival_probabilities(model->walk, n_max);
    std::memcpy(out, p.data(), p.size() * sizeof(double));
  });
}

wt_status wt_model_bridge_weight(const wt_model* model, size_t n, double* out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = bridge_weight(model->walk, n);
  });
}

wt_status wt_model_exact_gamma(const wt_model* model, double* out, int* available) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    need(available, "available");
    const auto g = skip_free_gamma(model->potential);
    *available = g ? 1 : 0;
    *out = g ? g->get_d() : 0.0;
  });
}

wt_status wt_kernel_build(const wt_model* model, size_t n_max, wt_kernel** out) {
  return guarded([&] {
    need(model, "model");
    need(out, "out");
    *out = nullptr;
    *out = new wt_kernel{contact_kernel(model->walk, n_max)};
  });
}

void wt_kernel_free(wt_kernel* kernel) { delete kernel; }

wt_status wt_kernel_get_info(const wt_kernel* kernel, wt_kernel_info* out) {
  return guarded([&] {
    need(kernel, "kernel");
    need(out, "out");
    const ContactKernel& k = kernel->kernel;
    out->n_max = k.n_max();
    out->period = k.period;
    out->gamma = k.gamma;
    out->cq = k.cq_estimate;
    out->l_const = k.l_const;
    out->tail_coeff = k.tail_coeff;
    out->table_mass = k.table_mass();
    out->tail_mass = k.tail_mass();
  });
}

wt_status wt_kernel_values(const wt_kernel* kernel, double* out) {
  return guarded([&] {
    need(kernel, "kernel");
    need(out, "out");
    std::memcpy(out, kernel->kernel.q.data(), kernel->kernel.q.size() * sizeof(double));
  });
}

wt_status wt_epsilon_to_delta(const wt_kernel* kernel, double epsilon, double* delta) {
  return guarded([&] {
    need(kernel, "kernel");
    need(delta, "delta");
    if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
      throw Error(Errc::NegativeDelta, "epsilon must be finite and >= 0");
    *delta = kernel->kernel.gamma * epsilon;
  });
}

wt_status wt_table_build(const wt_model* model, const wt_kernel* kernel, double delta, size_t n, wt_solver solver,
                         wt_table** out) {
  return guarded([&] {
    need(model, "model");
    need(kernel, "kernel");
    need(out, "out");
    *out = nullptr;
    const auto surv = survival_probabilities(model->walk, n);
    *out = new wt_table{partition_table(kernel->kernel, surv, delta, n, to_options(solver))};
  });
}

void wt_table_free(wt_table* table) { delete table; }

size_t wt_table_size(const wt_table* table) { return table == nullptr ? 0 : table->table.size(); }

wt_status wt_table_log_values(const wt_table* table, double* log_zc, double* log_zf) {
  return guarded([&] {
    need(table, "table");
    const PartitionTable& t = table->table;
    for (std::size_t i = 0; i <= t.size(); ++i) {
      if (log_zc) log_zc[i] = t.log_zc(i);
      if (log_zf) log_zf[i] = t.log_zf(i);
    }
  });
}

wt_status wt_neumann_series(const wt_kernel* kernel, double delta, size_t n, size_t k_max, double* out) {
  return guarded([&] {
    need(kernel, "kernel");
    need(out, "out");
    const auto v = neumann_series(kernel->kernel, delta, n, k_max);
    std::memcpy(out, v.data(), v.size() * sizeof(double));
  });
}

wt_status wt_classify(double delta, wt_regime* out) {
  return guarded([&] {
    need(out, "out");
    *out = static_cast<wt_regime>(static_cast<int>(classify(delta)));
  });
}

const char* wt_regime_name(wt_regime regime) {
  if (regime < WT_STRICTLY_DELOCALIZED || regime > WT_LOCALIZED) return "unknown";
  return wetting::regime_name(static_cast<Regime>(regime));
}

wt_status wt_free_energy_compute(const wt_kernel* kernel, double delta, wt_free_energy* out) {
  return guarded([&] {
    need(kernel, "kernel");
    need(out, "out");
    const FreeEnergy fe = free_energy(kernel->kernel, delta);
    *out = wt_free_energy{};
    out->localized = fe.localized ? 1 : 0;
    out->f_delta = fe.f_delta;
    out->residual = fe.residual;
    out->truncated_residual = fe.truncated_residual;
    out->truncation_bias = fe.truncation_bias;
    if (fe.localized) out->mu_delta = tilted_kernel(kernel->kernel, delta).mu_delta;
  });
}

wt_status wt_predict(const wt_model* model, const wt_kernel* kernel, double delta, size_t n, wt_prediction* out) {
  return guarded([&] {
    need(model, "model");
    need(kernel, "kernel");
    need(out, "out");
    const PartitionPrediction p = predict_partition(kernel->kernel, model->walk, delta, n);
    out->regime = static_cast<wt_regime>(static_cast<int>(p.regime));
    out->zc = p.zc;
    out->zf = p.zf;
    out->log_scale = p.log_scale;
  });
}

wt_status wt_sampler_create(const wt_model* model, const wt_kernel* kernel, double delta, size_t n,
                            wt_boundary boundary, int infinite, int with_paths, wt_sampler** out) {
  return guarded([&] {
    need(model, "model");
    need(kernel, "kernel");
    need(out, "out");
    *out = nullptr;
    if (n < 1) throw Error(Errc::InvalidArgument, "N must be >= 1");
    auto s = std::make_unique<wt_sampler>();
    s->walk = model->walk;
    s->n = n;
    s->boundary = to_boundary(boundary);
    s->infinite = infinite != 0;
    if (s->infinite) {
      s->limit.emplace(kernel->kernel, regime_params(kernel->kernel, delta), n);
    } else {
      const auto surv = survival_probabilities(model->walk, n + 1);
      s->finite.emplace(kernel->kernel, surv, delta, n, s->boundary);
    }
    if (with_paths) s->paths.emplace(model->walk, n + 1);
    *out = s.release();
  });
}

void wt_sampler_free(wt_sampler* sampler) { delete sampler; }

wt_status wt_sample_create(wt_sample** out) {
  return guarded([&] {
    need(out, "out");
    *out = new wt_sample{};
  });
}

void wt_sample_free(wt_sample* sample) { delete sample; }

wt_status wt_sampler_draw(const wt_sampler* sampler, uint64_t seed, uint64_t index, wt_sample* into) {
  return guarded([&] {
    need(sampler, "sampler");
    need(into, "into");
    CounterRng rng(seed, index);
    into->contacts = sampler->infinite ? sampler->limit->sample(rng) : sampler->finite->sample(rng);
    into->path.heights.clear();
    if (sampler->paths) {
      // the infinite-volume segment after the last visible contact is open-ended
      const Boundary b = sampler->infinite ? Boundary::Free : sampler->boundary;
      into->path = assemble_path(into->contacts, *sampler->paths, b, rng);
    }
  });
}

size_t wt_sample_contact_count(const wt_sample* sample) { return sample ? sample->contacts.taus.size() : 0; }
const int64_t* wt_sample_contacts(const wt_sample* sample) {
  return sample ? sample->contacts.taus.data() : nullptr;
}
size_t wt_sample_height_count(const wt_sample* sample) { return sample ? sample->path.heights.size() : 0; }
const int64_t* wt_sample_heights(const wt_sample* sample) {
  return sample ? sample->path.heights.data() : nullptr;
}
int wt_sample_terminated(const wt_sample* sample) { return sample && sample->contacts.terminated ? 1 : 0; }
int wt_sample_beyond_horizon(const wt_sample* sample) { return sample && sample->contacts.beyond_horizon ? 1 : 0; }
size_t wt_sample_returns(const wt_sample* sample) { return sample ? sample->contacts.returns : 0; }

wt_status wt_sample_first_zero_after(const wt_sample* sample, size_t n, double t, double* out) {
  return guarded([&] {
    need(sample, "sample");
    need(out, "out");
    if (n < 1) throw Error(Errc::InvalidArgument, "N must be >= 1");
    *out = first_zero_after(sample->contacts, n, t);
  });
}

wt_status wt_sample_rescaled_at(const wt_sample* sample, const wt_model* model, double t, double* out) {
  return guarded([&] {
    need(sample, "sample");
    need(model, "model");
    need(out, "out");
    if (sample->path.heights.empty()) throw Error(Errc::InvalidArgument, "sample has no heights");
    *out = rescale(sample->path, model->walk).at(t);
  });
}

wt_status wt_deloc_last_zero_law(const wt_kernel* kernel, double delta, size_t k_max, double* law, double* tail) {
  return guarded([&] {
    need(kernel, "kernel");
    need(law, "law");
    const DelocLaw d = deloc_last_zero_law(kernel->kernel, delta, k_max);
    for (std::size_t k = 0; k <= k_max; ++k) law[k] = k < d.law.size() ? d.law[k] : 0.0;
    if (tail) *tail = d.tail;
  });
}

wt_status wt_deloc_return_law(double delta, size_t k_max, double* law, double* tail) {
  return guarded([&] {
    need(law, "law");
    const DelocLaw d = deloc_return_law(delta, k_max);
    std::memcpy(law, d.law.data(), d.law.size() * sizeof(double));
    if (tail) *tail = d.tail;
  });
}

wt_status wt_bm_zero_tail(double t, double x, double* out) {
  return guarded([&] {
    need(out, "out");
    *out = bm_zero_tail(t, x);
  });
}

wt_status wt_zero_set_test(const double* d_values, size_t count, double t, double x_known,
                           wt_zero_set_row rows[WT_ZERO_SET_GRID], double* sup_deviation) {
  return guarded([&] {
    need(d_values, "d_values");
    const auto grid = zero_set_grid(t);
    const ZeroSetReport rep = zero_set_test(std::span<const double>(d_values, count), t, grid, x_known);
    if (rows)
      for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        const auto& r = rep.rows[i];
        rows[i] = wt_zero_set_row{r.x, r.empirical, r.reference, r.deviation, r.half_width};
      }
    if (sup_deviation) *sup_deviation = rep.sup_deviation;
  });
}

wt_status wt_marginal_test(const double* values, size_t count, wt_boundary boundary, double t,
                           wt_marginal_row rows[WT_MARGINAL_ROWS], double* ks, int* degenerate) {
  return guarded([&] {
    need(values, "values");
    const MarginalReport rep = marginal_test(std::span<const double>(values, count), to_boundary(boundary), t);
    if (rows)
      for (std::size_t i = 0; i < rep.rows.size(); ++i)
        rows[i] = wt_marginal_row{rep.rows[i].x, rep.rows[i].empirical, rep.rows[i].reference};
    if (ks) *ks = rep.ks;
    if (degenerate) *degenerate = rep.degenerate ? 1 : 0;
  });
}

wt_status wt_oracle_check(const wt_model* model, const char* check, size_t n, wt_rows** out) {
  return guarded([&] {
    need(model, "model");
    need(check, "check");
    need(out, "out");
    *out = nullptr;
    const std::string c(check);
    auto rows = std::make_unique<wt_rows>();
    if (c == "partition")
      rows->rows = check_partition(model->potential, n);
    else if (c == "ladder")
      rows->rows = check_ladder(model->potential, n);
    else if (c == "llt")
      rows->rows = check_llt(model->potential, n);
    else if (c == "contacts")
      rows->rows = check_contacts(model->potential, n);
    else
      throw Error(Errc::InvalidArgument, "unknown oracle check '" + c + "' (partition, ladder, llt, contacts)");
    *out = rows.release();
  });
}

size_t wt_rows_count(const wt_rows* rows) { return rows ? rows->rows.size() : 0; }

wt_status wt_rows_get(const wt_rows* rows, size_t i, const char** label, const char** lhs, const char** rhs,
                      int* pass) {
  return guarded([&] {
    need(rows, "rows");
    if (i >= rows->rows.size()) throw Error(Errc::InvalidArgument, "row index out of range");
    const OracleRow& r = rows->rows[i];
    if (label) *label = r.label.c_str();
    if (lhs) *lhs = r.lhs.c_str();
    if (rhs) *rhs = r.rhs.c_str();
    if (pass) *pass = r.pass ? 1 : 0;
  });
}

void wt_rows_free(wt_rows* rows) { delete rows; }

}  // extern "C"
