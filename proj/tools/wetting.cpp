// wetting: command-line front end over the C interface.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wetting/wetting.h"

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

struct Failure : std::runtime_error {
  int code;
  Failure(int c, const std::string& m) : std::runtime_error(m), code(c) {}
};

void check(wt_status st) {
  if (st != WT_OK) throw Failure(2, std::string(wt_status_name(st)) + ": " + wt_last_error());
}

template <class T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Model = std::unique_ptr<wt_model, Deleter<wt_model, wt_model_free>>;
using Kernel = std::unique_ptr<wt_kernel, Deleter<wt_kernel, wt_kernel_free>>;
using Table = std::unique_ptr<wt_table, Deleter<wt_table, wt_table_free>>;
using Sampler = std::unique_ptr<wt_sampler, Deleter<wt_sampler, wt_sampler_free>>;
using Sample = std::unique_ptr<wt_sample, Deleter<wt_sample, wt_sample_free>>;
using Rows = std::unique_ptr<wt_rows, Deleter<wt_rows, wt_rows_free>>;

// Options shared by the subcommands; not every command uses every field.
struct Options {
  std::string model_path;
  std::optional<double> delta;
  std::optional<double> epsilon;
  std::size_t n = 0;
  std::size_t n_max = 65536;
  std::size_t samples = 0;
  std::optional<std::uint64_t> seed;
  std::string boundary = "free";
  std::string out;
  std::string out_dir;
  std::string solver = "auto";
  bool contacts_only = false;
  bool infinite = false;
  std::size_t k_max = 50;
  double t = 0.3;
  double marginal_t = 1.0;
  std::string check = "partition";
  double tolerance = 0.0;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

// exp(log_value) written as a decimal even when it leaves the double range
std::string from_log(double log_value) {
  if (std::isinf(log_value)) return log_value < 0 ? "0" : "inf";
  if (std::abs(log_value) < 700.0) return num(std::exp(log_value));
  const double l10 = log_value / std::log(10.0);
  double e = std::floor(l10);
  double m = std::pow(10.0, l10 - e);
  if (m >= 10.0) m /= 10.0, e += 1.0;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.15fe%+.0f", m, e);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

std::string hex64(std::uint64_t v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

fs::path output_path(const Options& o, const std::string& fallback) {
  fs::path p = o.out.empty() ? fs::path(fallback) : fs::path(o.out);
  if (p.is_absolute()) return p;
  std::string dir = o.out_dir;
  if (dir.empty())
    if (const char* env = std::getenv("WETTING_OUTPUT_DIR")) dir = env;
  if (dir.empty()) return p;
  fs::create_directories(dir);
  return fs::path(dir) / p;
}

std::ofstream open_csv(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream f(p, std::ios::binary);
  if (!f) throw Failure(2, "cannot write " + p.string());
  return f;
}

struct Context {
  Model model;
  Kernel kernel;
  wt_model_info info{};
  wt_kernel_info kinfo{};
  double delta = 0.0;
  json meta;
};

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return buf;
}

Context load(const Options& o, const std::string& command, bool need_delta) {
  if (o.model_path.empty()) throw Failure(2, "--model is required");
  Context c;
  wt_model* m = nullptr;
  check(wt_model_load(o.model_path.c_str(), &m));
  c.model.reset(m);
  check(wt_model_get_info(c.model.get(), &c.info));
  wt_kernel* k = nullptr;
  check(wt_kernel_build(c.model.get(), o.n_max, &k));
  c.kernel.reset(k);
  check(wt_kernel_get_info(c.kernel.get(), &c.kinfo));

  c.meta = {{"command", command},
            {"version", wt_version()},
            {"timestamp", utc_now()},
            {"model", {{"path", o.model_path},
                       {"fingerprint", hex64(c.info.fingerprint)},
                       {"kappa", c.info.kappa},
                       {"mean", c.info.mean},
                       {"sigma2", c.info.sigma2}}},
            {"kernel", {{"n_max", c.kinfo.n_max},
                        {"gamma", c.kinfo.gamma},
                        {"cq", c.kinfo.cq},
                        {"tail_mass", c.kinfo.tail_mass}}}};
  if (need_delta) {
    if (o.delta && o.epsilon) throw Failure(2, "--delta and --epsilon are mutually exclusive");
    if (!o.delta && !o.epsilon) throw Failure(2, "one of --delta or --epsilon is required");
    if (o.epsilon) {
      check(wt_epsilon_to_delta(c.kernel.get(), *o.epsilon, &c.delta));
      c.meta["epsilon"] = *o.epsilon;
    } else {
      c.delta = *o.delta;
    }
    c.meta["delta"] = c.delta;
    wt_regime r;
    check(wt_classify(c.delta, &r));
    c.meta["regime"] = wt_regime_name(r);
    if (c.delta != 1.0 && std::abs(c.delta - 1.0) < 1e-6)
      std::cerr << "warning: |delta - 1| < 1e-6; asymptotics converge slowly near the transition\n";
  }
  if (o.seed) c.meta["seed"] = *o.seed;
  if (o.n) c.meta["N"] = o.n;
  return c;
}

void write_meta(const fs::path& data, const json& meta) {
  fs::path p = data;
  p += ".meta.json";
  std::ofstream f(p);
  if (!f) throw Failure(2, "cannot write " + p.string());
  f << meta.dump(2) << "\n";
}

wt_boundary parse_boundary(const std::string& s) { return s == "constrained" ? WT_CONSTRAINED : WT_FREE; }

// ---------------------------------------------------------------------------

int cmd_kernel(const Options& o) {
  Context c = load(o, "kernel", false);
  std::vector<double> q(c.kinfo.n_max + 1);
  check(wt_kernel_values(c.kernel.get(), q.data()));
  const fs::path out = output_path(o, "kernel.csv");
  auto f = open_csv(out);
  f << "n,q,cumulative\n";
  double cum = 0.0, comp = 0.0;  // Kahan, so the last row matches table_mass
  for (std::size_t n = 1; n < q.size(); ++n) {
    const double y = q[n] - comp, t = cum + y;
    comp = (t - cum) - y;
    cum = t;
    f << n << "," << num(q[n]) << "," << num(cum) << "\n";
  }
  write_meta(out, c.meta);
  std::cout << "kappa " << num(c.info.kappa) << "\nmean " << num(c.info.mean) << "\nsigma2 " << num(c.info.sigma2)
            << "\ngamma " << num(c.kinfo.gamma) << "\nc_q " << num(c.kinfo.cq) << "\ntable_mass "
            << num(c.kinfo.table_mass) << "\ntail_mass " << num(c.kinfo.tail_mass) << "\n";
  return 0;
}

int cmd_partition(const Options& o) {
  Context c = load(o, "partition", true);
  const wt_solver solver = o.solver == "direct" ? WT_SOLVER_DIRECT : o.solver == "fast" ? WT_SOLVER_FAST
                                                                                         : WT_SOLVER_AUTO;
  wt_table* t = nullptr;
  check(wt_table_build(c.model.get(), c.kernel.get(), c.delta, o.n, solver, &t));
  Table table(t);
  std::vector<double> lc(o.n + 1), lf(o.n + 1);
  check(wt_table_log_values(table.get(), lc.data(), lf.data()));
  const fs::path out = output_path(o, "partition.csv");
  auto f = open_csv(out);
  f << "n,Zc,Zf,log_Zc,log_Zf\n";
  for (std::size_t n = 0; n <= o.n; ++n)
    f << n << "," << from_log(lc[n]) << "," << from_log(lf[n]) << "," << num(lc[n]) << "," << num(lf[n]) << "\n";
  c.meta["solver"] = o.solver;
  write_meta(out, c.meta);
  std::cout << "wrote " << out.string() << "\n";
  return 0;
}

int cmd_free_energy(const Options& o) {
  Context c = load(o, "free-energy", true);
  wt_free_energy fe;
  check(wt_free_energy_compute(c.kernel.get(), c.delta, &fe));
  std::cout << "regime " << c.meta["regime"].get<std::string>() << "\nF " << num(fe.f_delta) << "\n";
  if (fe.localized)
    std::cout << "mu " << num(fe.mu_delta) << "\nresidual " << num(fe.residual) << "\ntruncated_residual "
              << num(fe.truncated_residual) << "\ntruncation_bias " << num(fe.truncation_bias) << "\n";
  if (!o.out.empty()) {
    const fs::path out = output_path(o, o.out);
    c.meta["free_energy"] = {{"F", fe.f_delta},
                             {"mu", fe.mu_delta},
                             {"residual", fe.residual},
                             {"truncated_residual", fe.truncated_residual},
                             {"truncation_bias", fe.truncation_bias}};
    auto f = open_csv(out);
    f << "delta,F,mu,residual,truncated_residual,truncation_bias\n"
      << num(c.delta) << "," << num(fe.f_delta) << "," << num(fe.mu_delta) << "," << num(fe.residual) << ","
      << num(fe.truncated_residual) << "," << num(fe.truncation_bias) << "\n";
    write_meta(out, c.meta);
  }
  return 0;
}

int cmd_verify(const Options& o) {
  Context c = load(o, "verify-asymptotics", true);
  wt_regime regime;
  check(wt_classify(c.delta, &regime));
  const double tol = o.tolerance > 0 ? o.tolerance : regime == WT_LOCALIZED ? 0.01 : 0.05;
  wt_table* t = nullptr;
  check(wt_table_build(c.model.get(), c.kernel.get(), c.delta, o.n, WT_SOLVER_AUTO, &t));
  Table table(t);
  std::vector<double> lc(o.n + 1), lf(o.n + 1);
  check(wt_table_log_values(table.get(), lc.data(), lf.data()));

  std::vector<std::size_t> grid;
  for (std::size_t n = 16; n < o.n; n *= 2) grid.push_back(n);
  grid.push_back(o.n);

  const fs::path out = output_path(o, "asymptotics.csv");
  auto f = open_csv(out);
  f << "N,boundary,exact,predicted,ratio\n";
  bool ok = true;
  for (std::size_t n : grid) {
    wt_prediction p;
    check(wt_predict(c.model.get(), c.kernel.get(), c.delta, n, &p));
    for (int b = 0; b < 2; ++b) {
      const double log_exact = b == 0 ? lc[n] : lf[n];
      const double pred = b == 0 ? p.zc : p.zf;
      const double ratio = std::exp(log_exact - p.log_scale - std::log(pred));
      const double log_pred = std::log(pred) + p.log_scale;
      f << n << "," << (b == 0 ? "constrained" : "free") << "," << from_log(log_exact) << ","
        << from_log(log_pred) << "," << num(ratio) << "\n";
      if (n == o.n) {
        const bool pass = std::abs(ratio - 1.0) < tol;
        ok = ok && pass;
        std::cout << (b == 0 ? "constrained" : "free") << " N=" << n << " ratio " << num(ratio) << " tolerance "
                  << tol << (pass ? " PASS" : " FAIL") << "\n";
      }
    }
  }
  c.meta["tolerance"] = tol;
  c.meta["pass"] = ok;
  write_meta(out, c.meta);
  return ok ? 0 : 1;
}

int cmd_sample(const Options& o) {
  Context c = load(o, "sample", true);
  if (!o.seed) throw Failure(2, "--seed is required for sampling");
  if (o.samples == 0) throw Failure(2, "--samples must be positive");
  wt_sampler* s = nullptr;
  check(wt_sampler_create(c.model.get(), c.kernel.get(), c.delta, o.n, parse_boundary(o.boundary),
                          o.infinite ? 1 : 0, o.contacts_only ? 0 : 1, &s));
  Sampler sampler(s);
  wt_sample* d = nullptr;
  check(wt_sample_create(&d));
  Sample draw(d);

  const fs::path out = output_path(o, o.contacts_only ? "contacts.csv" : "paths.csv");
  auto f = open_csv(out);
  f << (o.contacts_only ? "sample,returns,terminated,contacts\n" : "sample,heights\n");
  for (std::size_t i = 0; i < o.samples; ++i) {
    check(wt_sampler_draw(sampler.get(), *o.seed, i, draw.get()));
    std::string row = std::to_string(i) + ",";
    if (o.contacts_only) {
      row += std::to_string(wt_sample_returns(draw.get())) + "," + std::to_string(wt_sample_terminated(draw.get())) +
             ",";
      const int64_t* taus = wt_sample_contacts(draw.get());
      for (std::size_t k = 0; k < wt_sample_contact_count(draw.get()); ++k)
        row += (k ? ";" : "") + std::to_string(taus[k]);
    } else {
      const int64_t* h = wt_sample_heights(draw.get());
      for (std::size_t k = 0; k < wt_sample_height_count(draw.get()); ++k)
        row += (k ? ";" : "") + std::to_string(h[k]);
    }
    f << row << "\n";
  }
  c.meta["boundary"] = o.infinite ? "infinite-volume" : o.boundary;
  c.meta["samples"] = o.samples;
  write_meta(out, c.meta);
  std::cout << "wrote " << o.samples << " samples to " << out.string() << "\n";
  return 0;
}

int cmd_deloc(const Options& o) {
  Context c = load(o, "deloc-stats", true);
  std::vector<double> returns(o.k_max + 1), last(o.k_max + 1);
  double tail_r = 0.0, tail_l = 0.0;
  check(wt_deloc_return_law(c.delta, o.k_max, returns.data(), &tail_r));
  check(wt_deloc_last_zero_law(c.kernel.get(), c.delta, o.k_max, last.data(), &tail_l));
  const fs::path out = output_path(o, "deloc.csv");
  auto f = open_csv(out);
  f << "k,P_returns,P_last_zero\n";
  for (std::size_t k = 0; k <= o.k_max; ++k) f << k << "," << num(returns[k]) << "," << num(last[k]) << "\n";
  c.meta["k_max"] = o.k_max;
  c.meta["tail_returns"] = tail_r;
  c.meta["tail_last_zero"] = tail_l;
  write_meta(out, c.meta);
  std::cout << "tail mass beyond k_max: returns " << num(tail_r) << ", last zero " << num(tail_l) << "\n";
  return 0;
}

int cmd_scaling(const Options& o) {
  Options opt = o;
  if (!opt.delta && !opt.epsilon) opt.delta = 1.0;
  Context c = load(opt, "scaling-test", true);
  if (!o.seed) throw Failure(2, "--seed is required for sampling");
  if (o.samples == 0) throw Failure(2, "--samples must be positive");
  if (!(o.t > 0 && o.t < 1)) throw Failure(2, "--t must lie in (0, 1)");
  wt_regime regime;
  check(wt_classify(c.delta, &regime));
  const bool critical = regime == WT_CRITICAL;
  if (!critical) std::cerr << "warning: NotCritical: the Brownian references describe delta = 1 only\n";

  wt_sample* d = nullptr;
  check(wt_sample_create(&d));
  Sample draw(d);

  // zero set: infinite-volume renewal observed far enough to decide d_t >= 5t
  const double x_max = o.t * 5.0;
  const auto horizon = static_cast<std::size_t>(std::ceil(x_max * static_cast<double>(o.n))) + 1;
  wt_sampler* s = nullptr;
  check(wt_sampler_create(c.model.get(), c.kernel.get(), c.delta, horizon, WT_FREE, 1, 0, &s));
  Sampler zeros(s);
  std::vector<double> dvals(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i) {
    check(wt_sampler_draw(zeros.get(), *o.seed, i, draw.get()));
    check(wt_sample_first_zero_after(draw.get(), o.n, o.t, &dvals[i]));
  }
  wt_zero_set_row zrows[WT_ZERO_SET_GRID];
  double sup = 0.0;
  check(wt_zero_set_test(dvals.data(), dvals.size(), o.t,
                         static_cast<double>(horizon) / static_cast<double>(o.n), zrows, &sup));

  // path marginal at marginal_t, finite volume
  const wt_boundary b = parse_boundary(o.boundary);
  check(wt_sampler_create(c.model.get(), c.kernel.get(), c.delta, o.n, b, 0, 1, &s));
  Sampler paths(s);
  std::vector<double> xs(o.samples);
  for (std::size_t i = 0; i < o.samples; ++i) {
    check(wt_sampler_draw(paths.get(), *o.seed + 1, i, draw.get()));
    check(wt_sample_rescaled_at(draw.get(), c.model.get(), o.marginal_t, &xs[i]));
  }
  wt_marginal_row mrows[WT_MARGINAL_ROWS];
  double ks = 0.0;
  int degenerate = 0;
  check(wt_marginal_test(xs.data(), xs.size(), b, o.marginal_t, mrows, &ks, &degenerate));

  const fs::path out = output_path(o, "scaling.csv");
  auto f = open_csv(out);
  f << "test,x,empirical,reference,deviation,half_width\n";
  for (const auto& r : zrows)
    f << "zero_set," << num(r.x) << "," << num(r.empirical) << "," << num(r.reference) << "," << num(r.deviation)
      << "," << num(r.half_width) << "\n";
  for (const auto& r : mrows)
    f << "marginal," << num(r.x) << "," << num(r.empirical) << "," << num(r.reference) << ","
      << num(std::abs(r.empirical - r.reference)) << ",\n";

  const double zero_limit = 0.015 + 1.0 / std::sqrt(static_cast<double>(o.n));
  const double ks_limit = 0.02;
  const bool zero_ok = sup < zero_limit, ks_ok = ks < ks_limit;
  std::cout << "zero-set sup deviation " << num(sup) << " (limit " << num(zero_limit) << ")"
            << (critical ? (zero_ok ? " PASS" : " FAIL") : "") << "\n";
  std::cout << "marginal KS at t=" << num(o.marginal_t) << " " << num(ks) << " (limit " << ks_limit << ")"
            << (degenerate ? " degenerate" : "") << (critical ? (ks_ok ? " PASS" : " FAIL") : "") << "\n";
  c.meta["t"] = o.t;
  c.meta["marginal_t"] = o.marginal_t;
  c.meta["samples"] = o.samples;
  c.meta["boundary"] = o.boundary;
  c.meta["zero_set_sup_deviation"] = sup;
  c.meta["marginal_ks"] = ks;
  write_meta(out, c.meta);
  return !critical || (zero_ok && ks_ok) ? 0 : 1;
}

int cmd_oracle(const Options& o) {
  if (o.model_path.empty()) throw Failure(2, "--model is required");
  wt_model* m = nullptr;
  check(wt_model_load(o.model_path.c_str(), &m));
  Model model(m);
  std::size_t n = o.n;
  if (n == 0) n = o.check == "partition" ? 10 : o.check == "ladder" ? 12 : o.check == "llt" ? 4096 : 8;
  wt_rows* r = nullptr;
  check(wt_oracle_check(model.get(), o.check.c_str(), n, &r));
  Rows rows(r);
  bool ok = true;
  std::optional<std::ofstream> f;
  if (!o.out.empty()) {
    f = open_csv(output_path(o, o.out));
    *f << "label,lhs,rhs,pass\n";
  }
  for (std::size_t i = 0; i < wt_rows_count(rows.get()); ++i) {
    const char *label, *lhs, *rhs;
    int pass;
    check(wt_rows_get(rows.get(), i, &label, &lhs, &rhs, &pass));
    ok = ok && pass;
    std::cout << label << ": " << lhs << " | " << rhs << " | " << (pass ? "PASS" : "FAIL") << "\n";
    if (f) *f << csv_field(label) << "," << csv_field(lhs) << "," << csv_field(rhs) << "," << pass << "\n";
  }
  if (f) {
    wt_model_info info;
    check(wt_model_get_info(model.get(), &info));
    write_meta(output_path(o, o.out), {{"command", "oracle"},
                                       {"check", o.check},
                                       {"N", n},
                                       {"version", wt_version()},
                                       {"timestamp", utc_now()},
                                       {"model", {{"path", o.model_path}, {"fingerprint", hex64(info.fingerprint)}}},
                                       {"pass", ok}});
  }
  std::cout << (ok ? "all identities hold" : "FAILED") << "\n";
  return ok ? 0 : 1;
}

void add_model(CLI::App* sub, Options& o) {
  sub->add_option("--model", o.model_path, "model file (step weight pairs)")->check(CLI::ExistingFile);
}

void add_kernel_opts(CLI::App* sub, Options& o) {
  sub->add_option("--nmax", o.n_max, "kernel table length")->check(CLI::Range(16, 1 << 24));
}

void add_coupling(CLI::App* sub, Options& o) {
  auto* d = sub->add_option("--delta", o.delta, "rescaled reward delta = gamma * epsilon");
  auto* e = sub->add_option("--epsilon", o.epsilon, "contact reward epsilon");
  d->excludes(e);
}

void add_output(CLI::App* sub, Options& o) {
  sub->add_option("--out", o.out, "output file (relative paths go under --out-dir)");
  sub->add_option("--out-dir", o.out_dir, "output directory")->envname("WETTING_OUTPUT_DIR");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Renewal analysis and exact sampling of discrete wetting models"};
  app.set_config("--config", "", "read options from a TOML/INI file (flags take precedence)");
  app.set_version_flag("--version", std::string(wt_version()));
  app.require_subcommand(1);
  Options o;

  auto* kernel = app.add_subcommand("kernel", "contact kernel q(n), gamma and c_q");
  add_model(kernel, o);
  add_kernel_opts(kernel, o);
  add_output(kernel, o);

  auto* partition = app.add_subcommand("partition", "modified partition functions Z~^c and Z~^f up to N");
  add_model(partition, o);
  add_kernel_opts(partition, o);
  add_coupling(partition, o);
  partition->add_option("--N", o.n, "largest size")->required()->check(CLI::PositiveNumber);
  partition->add_option("--solver", o.solver, "convolution strategy")
      ->check(CLI::IsMember({"auto", "direct", "fast"}));
  add_output(partition, o);

  auto* fe = app.add_subcommand("free-energy", "free energy F, mean mu of the tilted kernel, residual");
  add_model(fe, o);
  add_kernel_opts(fe, o);
  add_coupling(fe, o);
  add_output(fe, o);

  auto* verify = app.add_subcommand("verify-asymptotics", "exact vs predicted partition functions on N = 16, 32, ...");
  add_model(verify, o);
  add_kernel_opts(verify, o);
  add_coupling(verify, o);
  verify->add_option("--N", o.n, "largest size")->required()->check(CLI::PositiveNumber);
  verify->add_option("--tolerance", o.tolerance, "relative tolerance at N (default 5%, 1% when localized)");
  add_output(verify, o);

  auto* sample = app.add_subcommand("sample", "exact samples of contact sets or paths");
  add_model(sample, o);
  add_kernel_opts(sample, o);
  add_coupling(sample, o);
  sample->add_option("--N", o.n, "system size (horizon with --infinite)")->required()->check(CLI::PositiveNumber);
  sample->add_option("--boundary", o.boundary)->check(CLI::IsMember({"free", "constrained"}));
  sample->add_option("--samples", o.samples)->required()->check(CLI::PositiveNumber);
  sample->add_option("--seed", o.seed)->required();
  sample->add_flag("--contacts-only", o.contacts_only, "write contact epochs instead of heights");
  sample->add_flag("--infinite", o.infinite, "sample the infinite-volume limit up to horizon N");
  add_output(sample, o);

  auto* deloc = app.add_subcommand("deloc-stats", "laws of the number of returns and of the last zero (delta < 1)");
  add_model(deloc, o);
  add_kernel_opts(deloc, o);
  add_coupling(deloc, o);
  deloc->add_option("--kmax", o.k_max, "largest k")->check(CLI::PositiveNumber);
  add_output(deloc, o);

  auto* scaling = app.add_subcommand("scaling-test", "zero-set and path-marginal tests against Brownian limits");
  add_model(scaling, o);
  add_kernel_opts(scaling, o);
  add_coupling(scaling, o);
  scaling->add_option("--N", o.n)->required()->check(CLI::PositiveNumber);
  scaling->add_option("--samples", o.samples)->required()->check(CLI::PositiveNumber);
  scaling->add_option("--t", o.t, "time of the zero-set test, in (0, 1)");
  scaling->add_option("--marginal-t", o.marginal_t, "time of the path marginal, in (0, 1]");
  scaling->add_option("--boundary", o.boundary, "boundary for the path marginal")
      ->check(CLI::IsMember({"free", "constrained"}));
  scaling->add_option("--seed", o.seed)->required();
  add_output(scaling, o);

  auto* oracle = app.add_subcommand("oracle", "brute-force checks of the exact identities");
  add_model(oracle, o);
  oracle->add_option("--check", o.check)->check(CLI::IsMember({"partition", "ladder", "llt", "contacts"}));
  oracle->add_option("--N", o.n, "size (defaults: partition 10, ladder 12, llt 4096, contacts 8)");
  add_output(oracle, o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*kernel) return cmd_kernel(o);
    if (*partition) return cmd_partition(o);
    if (*fe) return cmd_free_energy(o);
    if (*verify) return cmd_verify(o);
    if (*sample) return cmd_sample(o);
    if (*deloc) return cmd_deloc(o);
    if (*scaling) return cmd_scaling(o);
    if (*oracle) return cmd_oracle(o);
  } catch (const Failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
