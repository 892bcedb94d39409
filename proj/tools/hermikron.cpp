#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "hermikron/hermikron.hpp"

namespace hk = hermikron;
using hk::io::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitVerification = 2;

struct Globals {
  std::uint64_t seed = 0;
  bool json = false;
  bool csv = false;
  std::string out;
};

void emit(const Globals& g, const std::string& text) {
  if (g.out.empty()) {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    hk::write_text(g.out, text.back() == '\n' ? text : text + "\n");
  }
}

void emit_json(const Globals& g, const json& j) { emit(g, j.dump(2)); }

std::map<std::string, std::string> parse_params(const std::string& text) {
  std::map<std::string, std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0)
      throw hk::Error(hk::ErrorCode::InvalidParams, "parameter '" + item + "' is not key=value");
    out[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return out;
}

double to_double(const std::map<std::string, std::string>& m, const std::string& key, double fallback) {
  const auto it = m.find(key);
  if (it == m.end()) return fallback;
  try {
    std::size_t used = 0;
    const double v = std::stod(it->second, &used);
    if (used != it->second.size()) throw std::invalid_argument(key);
    return v;
  } catch (const std::exception&) {
    throw hk::Error(hk::ErrorCode::InvalidParams, "parameter " + key + " is not a number");
  }
}

int to_int(const std::map<std::string, std::string>& m, const std::string& key, int fallback) {
  const double v = to_double(m, key, fallback);
  if (v != static_cast<int>(v)) throw hk::Error(hk::ErrorCode::InvalidParams, "parameter " + key + " must be an integer");
  return static_cast<int>(v);
}

hk::PerturbationSpec spec_from(const std::string& family, const std::string& params) {
  const auto m = parse_params(params);
  static const char* known[] = {"a", "k", "sign", "d", "eps", "m", "muRe", "muIm"};
  for (const auto& [key, value] : m) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw hk::Error(hk::ErrorCode::InvalidParams, "unknown parameter " + key);
  }
  hk::PerturbationSpec s;
  s.family = hk::parse_family(family);
  s.a = to_double(m, "a", 0.0);
  s.k = to_int(m, "k", s.family == hk::Family::ConjPairSplit || s.family == hk::Family::SingularAbsorb ? 1 : 2);
  s.sign = to_int(m, "sign", 1);
  s.d = to_int(m, "d", 0);
  s.eps = to_double(m, "eps", 1.0);
  s.m = to_int(m, "m", 1);
  s.mu = {to_double(m, "muRe", 0.0), to_double(m, "muIm", 1.0)};
  return s;
}

json spec_to_json(const hk::PerturbationSpec& s) {
  return {{"family", std::string(hk::to_string(s.family))},
          {"a", s.a},
          {"k", s.k},
          {"sign", s.sign},
          {"d", s.d},
          {"eps", s.eps},
          {"m", s.m},
          {"muRe", s.mu.real()},
          {"muIm", s.mu.imag()}};
}

std::string descriptors_csv(const std::vector<hk::BundleDescriptor>& ds) {
  std::string out = "n,r,c,d,alpha,s,codim_orbit,codim_bundle,pos,neg,zero\n";
  char buf[256];
  for (const auto& d : ds) {
    const auto cd = hk::codim_closed_form(d);
    const auto in = hk::leading_inertia(d);
    std::snprintf(buf, sizeof buf, "%d,%d,%d,%d,%d,%d,%lld,%lld,%d,%d,%d\n", d.n, d.r, d.c, d.d, d.alpha(), d.s(),
                  static_cast<long long>(cd.orbit), static_cast<long long>(cd.bundle), in.pos, in.neg, in.zero);
    out += buf;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian matrix pencils: canonical forms, generic bundles, codimensions, inference"};
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_flag("--json", g.json, "JSON output");
  app.add_flag("--csv", g.csv, "CSV output");
  app.add_option("--out", g.out, "Write output to this file instead of stdout");

  // enumerate
  auto* en = app.add_subcommand("enumerate", "List generic descriptors with counts, codimensions and inertia");
  int en_n = 0;
  std::optional<int> en_r;
  en->add_option("--n", en_n, "Pencil size")->required();
  en->add_option("--r", en_r, "Rank bound (omit for the regular family)");

  // codim
  auto* cd = app.add_subcommand("codim", "Orbit and bundle codimension by brute force");
  std::string cd_file;
  bool cd_exact = false, cd_float = false, cd_assemble = false, cd_tables = false;
  int cd_kmax = 4;
  cd->add_option("--hkcf", cd_file, "Canonical form JSON");
  cd->add_flag("--exact", cd_exact, "Rational backend (default)");
  cd->add_flag("--float", cd_float, "Singular-value backend");
  cd->add_flag("--assemble", cd_assemble, "Sum per-block and pairwise systems");
  cd->add_flag("--verify-tables", cd_tables, "Reproduce the per-block and pairwise dimension tables");
  cd->add_option("--kmax", cd_kmax, "Largest singular block index for --verify-tables")->capture_default_str();

  // perturb
  auto* pe = app.add_subcommand("perturb", "Build a perturbation family member and its predicted structure");
  std::string pe_family, pe_params;
  bool pe_verify = false, pe_grid = false;
  pe->add_option("--family", pe_family, "finiteJordan|infiniteJordan|conjPairSplit|singularAbsorb|regularizeM");
  pe->add_option("--params", pe_params, "Comma-separated key=value list: a,k,sign,d,eps,m,muRe,muIm");
  pe->add_flag("--verify", pe_verify, "Check predictions numerically");
  pe->add_flag("--grid", pe_grid, "Verify the default parameter grid");

  // infer
  auto* in = app.add_subcommand("infer", "Recover eigenstructure data from a numeric Hermitian pencil");
  std::string in_file, in_match;
  in->add_option("--pencil", in_file, "Pencil JSON")->required();
  in->add_option("--match", in_match, "Descriptor JSON {n,r,c,d} to compare against");

  // experiment
  auto* ex = app.add_subcommand("experiment", "Seeded numerical experiments");
  ex->require_subcommand(1);
  hk::ExperimentConfig reg_cfg;
  reg_cfg.kind = hk::ExperimentKind::Regular;
  auto* ex_reg = ex->add_subcommand("regular", "Real-eigenvalue counts of shifted random Hermitian pencils");
  ex_reg->add_option("--n", reg_cfg.n)->capture_default_str();
  ex_reg->add_option("--trials", reg_cfg.trials)->capture_default_str();
  ex_reg->add_option("--shift", reg_cfg.shift_rule, "jlogj|linear|none")->capture_default_str();
  ex_reg->add_flag("--verbose", reg_cfg.verbose, "Include eigenvalues in JSON rows");
  hk::ExperimentConfig rank_cfg;
  rank_cfg.kind = hk::ExperimentKind::Rank;
  rank_cfg.n = 17;
  rank_cfg.r = 9;
  rank_cfg.trials = 1000;
  std::string rank_gen = "g1", rank_policy = "gaussian";
  auto* ex_rank = ex->add_subcommand("rank", "Eigenvalues of random bounded-rank Hermitian pencils");
  ex_rank->add_option("--n", rank_cfg.n)->capture_default_str();
  ex_rank->add_option("--r", rank_cfg.r)->capture_default_str();
  ex_rank->add_option("--trials", rank_cfg.trials)->capture_default_str();
  ex_rank->add_option("--generator", rank_gen, "g1 (stratified) | g2 (dimension-weighted)")->capture_default_str();
  ex_rank->add_option("--policy", rank_policy, "integers|rationals|gaussian")->capture_default_str();
  ex_rank->add_flag("--verbose", rank_cfg.verbose, "Include eigenvalues in JSON rows");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*en) {
      const auto ds = en_r ? hk::enumerate_bounded(en_n, *en_r) : hk::enumerate_regular(en_n);
      if (g.csv) {
        emit(g, descriptors_csv(ds));
      } else {
        json arr = json::array();
        for (const auto& d : ds) arr.push_back(hk::io::descriptor_to_json(d));
        const int r = en_r ? *en_r : en_n;
        emit_json(g, {{"n", en_n}, {"r", r}, {"count", ds.size()}, {"formula", hk::generic_count(r)}, {"descriptors", arr}});
      }
      return kExitOk;
    }

    if (*cd) {
      if (cd_exact && cd_float) throw hk::Error(hk::ErrorCode::InvalidArgument, "--exact and --float are exclusive");
      const hk::Backend backend = cd_float ? hk::Backend::Floating : hk::Backend::Exact;
      if (cd_tables) {
        const auto checks = hk::verify_tables(cd_kmax, backend);
        bool ok = true;
        for (const auto& c : checks) ok = ok && c.pass();
        if (g.json) {
          json arr = json::array();
          for (const auto& c : checks)
            arr.push_back({{"system", c.label}, {"expected", c.expected}, {"computed", c.computed}, {"pass", c.pass()}});
          emit_json(g, {{"backend", std::string(hk::to_string(backend))}, {"checks", arr}, {"pass", ok}});
        } else {
          std::string text;
          char buf[160];
          for (const auto& c : checks) {
            std::snprintf(buf, sizeof buf, "%-28s expected %4lld computed %4lld  %s\n", c.label.c_str(),
                          static_cast<long long>(c.expected), static_cast<long long>(c.computed), c.pass() ? "PASS" : "FAIL");
            text += buf;
          }
          text += ok ? "all entries PASS\n" : "some entries FAIL\n";
          emit(g, text);
        }
        return ok ? kExitOk : kExitVerification;
      }
      if (cd_file.empty()) throw hk::Error(hk::ErrorCode::InvalidArgument, "codim needs --hkcf or --verify-tables");
      const hk::HKCF h = hk::io::hkcf_from_json(hk::io::read_json_file(cd_file));
      const auto mode = cd_assemble ? hk::CodimMode::Assemble : hk::CodimMode::Full;
      emit_json(g, hk::io::codim_to_json(hk::orbit_codim_bruteforce(h, backend, mode)));
      return kExitOk;
    }

    if (*pe) {
      if (pe_grid) {
        json cells = json::array();
        int failed = 0;
        for (const auto& spec : hk::default_grid()) {
          const auto checks = hk::verify_perturbation(hk::make_perturbation(spec), g.seed);
          const bool ok = hk::all_pass(checks);
          failed += ok ? 0 : 1;
          cells.push_back({{"spec", spec_to_json(spec)}, {"pass", ok}, {"checks", hk::io::checks_to_json(checks)}});
        }
        emit_json(g, {{"cells", cells}, {"failed", failed}, {"pass", failed == 0}});
        return failed == 0 ? kExitOk : kExitVerification;
      }
      if (pe_family.empty()) throw hk::Error(hk::ErrorCode::InvalidParams, "perturb needs --family or --grid");
      const auto spec = spec_from(pe_family, pe_params);
      const auto pt = hk::make_perturbation(spec);
      json out = {{"spec", spec_to_json(spec)},
                  {"pencil", hk::io::pencil_to_json(pt.pencil.pencil())},
                  {"prediction", hk::io::prediction_to_json(pt.prediction)}};
      bool ok = true;
      if (pe_verify) {
        const auto checks = hk::verify_perturbation(pt, g.seed);
        ok = hk::all_pass(checks);
        out["checks"] = hk::io::checks_to_json(checks);
        out["verdict"] = ok ? "pass" : "fail";
      }
      emit_json(g, out);
      return ok ? kExitOk : kExitVerification;
    }

    if (*in) {
      const auto pencil = hk::HermitianPencil::from_measured(hk::io::pencil_from_json(hk::io::read_json_file(in_file)));
      const auto rep = hk::full_report(pencil, g.seed);
      json out = hk::io::report_to_json(rep);
      bool ok = true;
      if (!in_match.empty()) {
        const auto desc = hk::io::descriptor_from_json(hk::io::read_json_file(in_match));
        ok = hk::match_descriptor(rep, desc);
        out["match"] = ok;
      }
      emit_json(g, out);
      return ok ? kExitOk : kExitVerification;
    }

    if (*ex) {
      const bool regular = static_cast<bool>(*ex_reg);
      hk::ExperimentConfig cfg = regular ? reg_cfg : rank_cfg;
      cfg.seed = g.seed;
      if (!regular) {
        cfg.generator = hk::parse_generator(rank_gen);
        cfg.policy = hk::parse_policy(rank_policy);
      }
      const auto rows = regular ? hk::experiment_regular(cfg) : hk::experiment_rank(cfg);
      if (g.json) {
        json meta = {{"kind", regular ? "regular" : "rank"}, {"n", cfg.n}, {"trials", cfg.trials}, {"seed", cfg.seed}};
        if (regular) {
          meta["shift"] = cfg.shift_rule;
        } else {
          meta["r"] = cfg.r;
          meta["generator"] = std::string(hk::to_string(cfg.generator));
          meta["policy"] = std::string(hk::to_string(cfg.policy));
        }
        emit_json(g, {{"metadata", meta}, {"rows", hk::io::rows_to_json(rows)}});
      } else if (!g.out.empty()) {
        hk::emit_plotdata(rows, g.out,
                          regular ? "Number of real eigenvalues"
                                  : "Real eigenvalues, generator " + std::string(hk::to_string(cfg.generator)));
        if (!regular) std::cerr << "generator: " << hk::to_string(cfg.generator) << "\n";
      } else {
        std::cout << hk::format_csv(rows);
      }
      return kExitOk;
    }
  } catch (const hk::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
