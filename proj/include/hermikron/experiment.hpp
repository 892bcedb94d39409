#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "hermikron/canonical.hpp"
#include "hermikron/error.hpp"
#include "hermikron/generic_bundles.hpp"
#include "hermikron/infer.hpp"
#include "hermikron/random.hpp"

namespace hermikron {

enum class ExperimentKind { Regular, Rank };

/// Bounded-rank samplers: stratified uniform over (d, c), or d weighted by
/// exp(-codim_bundle / 2).
enum class RankGenerator { Stratified, DimensionWeighted };

inline std::string_view to_string(RankGenerator g) {
  return g == RankGenerator::Stratified ? "g1-stratified" : "g2-dimension-weighted";
}

inline RankGenerator parse_generator(std::string_view s) {
  if (s == "g1" || s == "g1-stratified" || s == "stratified") return RankGenerator::Stratified;
  if (s == "g2" || s == "g2-dimension-weighted" || s == "weighted") return RankGenerator::DimensionWeighted;
  throw Error(ErrorCode::InvalidArgument, "unknown generator " + std::string(s));
}

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::Regular;
  int n = 20;
  int r = 0;
  int trials = 350;
  std::uint64_t seed = 0;
  std::string shift_rule = "jlogj";
  RankGenerator generator = RankGenerator::Stratified;
  EigenvaluePolicy policy = EigenvaluePolicy::Gaussian;
  bool verbose = false;
  /// 0 means: hardware concurrency, capped by HERMIKRON_THREADS.
  unsigned workers = 0;
};

struct ExperimentRow {
  int j = 0;
  int real_count = 0;
  /// Largest |im| over the finite (matched) eigenvalues; 0 when there are none.
  double max_abs_imag = 0.0;
  int nonreal_count = 0;
  std::vector<Complex> eigenvalues;
  std::optional<BundleDescriptor> sampled;
  std::optional<bool> round_trip;
};

inline double shift_value(std::string_view rule, int j) {
  if (rule == "jlogj") return j * std::log(static_cast<double>(j)) / 100.0;
  if (rule == "linear") return j / 100.0;
  if (rule == "none") return 0.0;
  throw Error(ErrorCode::InvalidArgument, "unknown shift rule " + std::string(rule));
}

inline void validate(const ExperimentConfig& cfg) {
  if (cfg.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be at least 1");
  if (cfg.n < 1) throw Error(ErrorCode::InvalidArgument, "n must be at least 1");
  if (cfg.kind == ExperimentKind::Rank && (cfg.r < 1 || cfg.r > cfg.n - 1))
    throw Error(ErrorCode::InvalidArgument, "rank experiment needs 1 <= r <= n-1");
  if (cfg.kind == ExperimentKind::Regular) (void)shift_value(cfg.shift_rule, 1);
}

/// Worker count: requested (or hardware) capped by HERMIKRON_THREADS.
inline unsigned worker_count(unsigned requested = 0) {
  unsigned w = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("HERMIKRON_THREADS")) {
    char* end = nullptr;
    const unsigned long cap = std::strtoul(env, &end, 10);
    if (end != env && cap >= 1) w = std::min<unsigned>(w, static_cast<unsigned>(cap));
  }
  return std::max(1u, w);
}

/// Runs body(j) for j = 1..trials on striped workers; rows land by index.
template <class Body>
std::vector<ExperimentRow> run_trials(int trials, unsigned workers, Body body) {
  std::vector<ExperimentRow> rows(trials);
  std::vector<std::exception_ptr> errors(workers);
  auto work = [&](unsigned w) {
    try {
      for (int j = 1 + static_cast<int>(w); j <= trials; j += static_cast<int>(workers)) rows[j - 1] = body(j);
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
  return rows;
}

inline ExperimentRow regular_trial(const ExperimentConfig& cfg, int j) {
  Rng rng = make_rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(j)));
  const ComplexMatrix a0 = random_hermitian(cfg.n, rng);
  const ComplexMatrix b0 = random_hermitian(cfg.n, rng);
  const double w = shift_value(cfg.shift_rule, j);
  const ComplexMatrix id = ComplexMatrix::Identity(cfg.n, cfg.n);
  const std::vector<Complex> eigs = pencil_eigenvalues(a0 + w * id, b0 + w * id);
  ExperimentRow row;
  row.j = j;
  for (const Complex& z : eigs) {
    if (is_infinite(z)) continue;
    row.max_abs_imag = std::max(row.max_abs_imag, std::abs(z.imag()));
    if (std::abs(z.imag()) <= kRealTol * (1.0 + std::abs(z.real())))
      ++row.real_count;
    else
      ++row.nonreal_count;
  }
  if (cfg.verbose) row.eigenvalues = eigs;
  return row;
}

inline BundleDescriptor sample_descriptor(const ExperimentConfig& cfg, Rng& rng) {
  const int dmax = cfg.r / 2;
  int d = 0;
  if (cfg.generator == RankGenerator::Stratified) {
    d = std::uniform_int_distribution<int>(0, dmax)(rng);
  } else {
    std::vector<double> weights;
    const double base = static_cast<double>(codim_closed_form({cfg.n, cfg.r, 0, dmax}).bundle);
    for (int k = 0; k <= dmax; ++k) {
      const double codim = static_cast<double>(codim_closed_form({cfg.n, cfg.r, 0, k}).bundle);
      weights.push_back(std::exp(-(codim - base) / 2.0));
    }
    d = std::discrete_distribution<int>(weights.begin(), weights.end())(rng);
  }
  const int c = std::uniform_int_distribution<int>(0, cfg.r - 2 * d)(rng);
  return {cfg.n, cfg.r, c, d};
}

inline ExperimentRow rank_trial(const ExperimentConfig& cfg, int j) {
  const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(j));
  Rng rng = make_rng(trial_seed);
  const BundleDescriptor desc = sample_descriptor(cfg, rng);
  const HermitianPencil p = random_congruence(build_hkcf(realize(desc, cfg.policy, rng)), rng);
  ExperimentRow row;
  row.j = j;
  row.sampled = desc;
  const std::uint64_t infer_seed = derive_seed(trial_seed, 0x7E57);
  StructureReport rep;
  try {
    rep = full_report(p, infer_seed);
    row.round_trip = match_descriptor(rep, desc);
  } catch (const Error&) {
    // Minimal-index or sign inference failed; the eigenvalues still count.
    rep.finite_eigs.clear();
    for (const Complex& z : eigs_singular(p, infer_seed)) {
      EigenInfo e;
      e.value = z;
      e.raw = z;
      e.real = std::abs(z.imag()) <= kRealTol * (1.0 + std::abs(z.real()));
      rep.finite_eigs.push_back(e);
    }
    row.round_trip = false;
  }
  for (const auto& e : rep.finite_eigs) {
    if (cfg.verbose) row.eigenvalues.push_back(e.value);
    row.max_abs_imag = std::max(row.max_abs_imag, std::abs(e.raw.imag()));
    if (e.real)
      ++row.real_count;
    else
      ++row.nonreal_count;
  }
  return row;
}

inline std::vector<ExperimentRow> experiment_regular(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::Regular) throw Error(ErrorCode::InvalidArgument, "config kind is not regular");
  return run_trials(cfg.trials, worker_count(cfg.workers), [&](int j) { return regular_trial(cfg, j); });
}

inline std::vector<ExperimentRow> experiment_rank(const ExperimentConfig& cfg) {
  validate(cfg);
  if (cfg.kind != ExperimentKind::Rank) throw Error(ErrorCode::InvalidArgument, "config kind is not rank");
  return run_trials(cfg.trials, worker_count(cfg.workers), [&](int j) { return rank_trial(cfg, j); });
}

inline std::string format_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = "j,real_count,max_abs_imag\n";
  char buf[96];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%d,%d,%.17g\n", r.j, r.real_count, r.max_abs_imag);
    out += buf;
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  f << text;
  if (!f) throw Error(ErrorCode::IoError, "write failed for " + path.string());
}

inline void emit_csv(const std::vector<ExperimentRow>& rows, const std::filesystem::path& path) {
  write_text(path, format_csv(rows));
}

inline std::filesystem::path plot_script_path(const std::filesystem::path& csv) {
  std::filesystem::path p = csv;
  p.replace_filename(csv.stem().string() + "_plot.py");
  return p;
}

/// CSV plus a matplotlib script drawing real_count against j.
inline void emit_plotdata(const std::vector<ExperimentRow>& rows, const std::filesystem::path& path,
                          std::string_view title = "Number of real eigenvalues") {
  emit_csv(rows, path);
  std::string script;
  script += "import csv\nimport matplotlib.pyplot as plt\n\n";
  script += "with open(\"" + path.filename().string() + "\") as f:\n";
  script += "    rows = list(csv.DictReader(f))\n";
  script += "j = [int(r[\"j\"]) for r in rows]\n";
  script += "count = [int(r[\"real_count\"]) for r in rows]\n";
  script += "plt.scatter(j, count, s=6)\n";
  script += "plt.xlabel(\"j\")\nplt.ylabel(\"real eigenvalues\")\n";
  script += "plt.title(\"" + std::string(title) + "\")\n";
  script += "plt.savefig(\"" + path.stem().string() + ".png\", dpi=150)\n";
  write_text(plot_script_path(path), script);
}

/// Spearman rank correlation with average ranks for ties.
inline double spearman(const std::vector<double>& x, const std::vector<double>& y) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> idx(v.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < idx.size();) {
      std::size_t k = i;
      while (k + 1 < idx.size() && v[idx[k + 1]] == v[idx[i]]) ++k;
      const double avg = 0.5 * static_cast<double>(i + k) + 1.0;
      for (std::size_t t = i; t <= k; ++t) r[idx[t]] = avg;
      i = k + 1;
    }
    return r;
  };
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  const std::vector<double> rx = ranks(x);
  const std::vector<double> ry = ranks(y);
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace hermikron
