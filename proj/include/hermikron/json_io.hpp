#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hermikron/canonical.hpp"
#include "hermikron/codim.hpp"
#include "hermikron/error.hpp"
#include "hermikron/experiment.hpp"
#include "hermikron/generic_bundles.hpp"
#include "hermikron/infer.hpp"
#include "hermikron/pencil.hpp"
#include "hermikron/perturb.hpp"
#include "hermikron/verify.hpp"

namespace hermikron::io {

using json = nlohmann::json;

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream f(path);
  if (!f) throw Error(ErrorCode::IoError, "cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
  }
}

// Non-finite doubles are written as null (JSON has no Inf/NaN).
inline json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

inline json matrix_to_json(const ComplexMatrix& m) {
  json re = json::array();
  json im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorCode::ParseError, std::string("missing field ") + key);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::ParseError, std::string("bad field ") + key + ": " + e.what());
  }
}

inline ComplexMatrix matrix_from_json(const json& j) {
  const long rows = field<long>(j, "rows");
  const long cols = field<long>(j, "cols");
  if (rows < 0 || cols < 0) throw Error(ErrorCode::ParseError, "negative matrix dimension");
  const auto re = field<std::vector<double>>(j, "re");
  const auto im = j.contains("im") ? field<std::vector<double>>(j, "im") : std::vector<double>(re.size(), 0.0);
  const auto count = static_cast<std::size_t>(rows * cols);
  if (re.size() != count || im.size() != count)
    throw Error(ErrorCode::ParseError, "entry count does not match rows x cols");
  ComplexMatrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long c = 0; c < cols; ++c) {
      const std::size_t k = static_cast<std::size_t>(i * cols + c);
      if (!std::isfinite(re[k]) || !std::isfinite(im[k])) throw Error(ErrorCode::ParseError, "non-finite entry");
      m(i, c) = {re[k], im[k]};
    }
  return m;
}

inline json pencil_to_json(const MatrixPencil& p) { return {{"A", matrix_to_json(p.A())}, {"B", matrix_to_json(p.B())}}; }

inline MatrixPencil pencil_from_json(const json& j) {
  if (!j.is_object() || !j.contains("A") || !j.contains("B")) throw Error(ErrorCode::ParseError, "pencil needs A and B");
  return {matrix_from_json(j.at("A")), matrix_from_json(j.at("B"))};
}

inline json block_to_json(const CanonicalBlock& b) {
  return std::visit(
      [](const auto& x) -> json {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, RealJordan>)
          return {{"type", "realJordan"}, {"k", x.k}, {"a", x.a}, {"sign", x.sign}};
        else if constexpr (std::is_same_v<T, InfJordan>)
          return {{"type", "infJordan"}, {"k", x.k}, {"sign", x.sign}};
        else if constexpr (std::is_same_v<T, ConjPair>)
          return {{"type", "conjPair"}, {"k", x.k}, {"muRe", x.mu.real()}, {"muIm", x.mu.imag()}};
        else
          return {{"type", "singular"}, {"d", x.d}};
      },
      b);
}

inline CanonicalBlock block_from_json(const json& j) {
  const auto type = field<std::string>(j, "type");
  CanonicalBlock b;
  if (type == "realJordan")
    b = RealJordan{field<int>(j, "k"), field<double>(j, "a"), field<int>(j, "sign")};
  else if (type == "infJordan")
    b = InfJordan{field<int>(j, "k"), field<int>(j, "sign")};
  else if (type == "conjPair")
    b = ConjPair{field<int>(j, "k"), {field<double>(j, "muRe"), field<double>(j, "muIm")}};
  else if (type == "singular")
    b = Singular{field<int>(j, "d")};
  else
    throw Error(ErrorCode::ParseError, "unknown block type " + type);
  validate_block(b);
  return b;
}

inline json hkcf_to_json(const HKCF& h) {
  json blocks = json::array();
  for (const auto& b : h.blocks) blocks.push_back(block_to_json(b));
  return {{"blocks", blocks}};
}

inline HKCF hkcf_from_json(const json& j) {
  if (!j.is_object() || !j.contains("blocks") || !j.at("blocks").is_array())
    throw Error(ErrorCode::ParseError, "canonical form needs a blocks array");
  HKCF h;
  for (const auto& b : j.at("blocks")) h.blocks.push_back(block_from_json(b));
  return h;
}

inline json inertia_to_json(const Inertia& in) { return {{"pos", in.pos}, {"neg", in.neg}, {"zero", in.zero}}; }

inline json descriptor_to_json(const BundleDescriptor& b) {
  const Codimensions cd = codim_closed_form(b);
  return {{"n", b.n},
          {"r", b.r},
          {"c", b.c},
          {"d", b.d},
          {"alpha", b.alpha()},
          {"s", b.s()},
          {"codim_orbit", cd.orbit},
          {"codim_bundle", cd.bundle},
          {"inertia", inertia_to_json(leading_inertia(b))}};
}

inline BundleDescriptor descriptor_from_json(const json& j) {
  const int n = field<int>(j, "n");
  const int r = j.contains("r") ? field<int>(j, "r") : n;
  return make_descriptor(n, r, field<int>(j, "c"), field<int>(j, "d"));
}

inline json complex_to_json(Complex z) { return {{"re", number(z.real())}, {"im", number(z.imag())}}; }

inline json report_to_json(const StructureReport& rep) {
  json eigs = json::array();
  for (const auto& e : rep.finite_eigs) {
    json item = {{"re", e.value.real()}, {"im", e.value.imag()}, {"real", e.real}, {"imagResidual", e.imag_residual}};
    item["sign"] = e.sign ? json(*e.sign) : json(nullptr);
    eigs.push_back(item);
  }
  return {{"n", rep.n},
          {"normalRank", rep.normal_rank},
          {"finiteEigenvalues", eigs},
          {"hasInfinite", rep.has_infinite},
          {"infiniteMultiplicity", rep.infinite_multiplicity},
          {"rightMinimalIndices", rep.right_minimal_indices},
          {"leftMinimalIndices", rep.left_minimal_indices},
          {"rankGap", number(rep.rank_gap)}};
}

inline json codim_to_json(const CodimResult& r) {
  return {{"orbit", r.orbit_codim},
          {"bundle", r.bundle_codim},
          {"backend", std::string(to_string(r.backend))},
          {"gapRatio", number(r.gap_ratio)}};
}

inline json checks_to_json(const std::vector<CheckResult>& checks) {
  json out = json::array();
  for (const auto& c : checks) out.push_back({{"check", c.name}, {"pass", c.pass}, {"detail", c.detail}});
  return out;
}

inline json prediction_to_json(const PredictedStructure& p) {
  json eigs = json::array();
  for (const Complex& z : p.eigenvalues) eigs.push_back(complex_to_json(z));
  json out = {{"hkcf", hkcf_to_json(p.expected)},
              {"eigenvalues", eigs},
              {"realSigns", p.real_signs},
              {"allInfinite", p.all_infinite},
              {"normalRank", p.normal_rank},
              {"minimalIndices", p.minimal_indices},
              {"distance", p.distance}};
  if (p.leading_inertia) out["leadingInertia"] = inertia_to_json(*p.leading_inertia);
  if (p.constant_inertia) out["constantInertia"] = inertia_to_json(*p.constant_inertia);
  if (p.leading_rank) out["leadingRank"] = *p.leading_rank;
  if (p.determinant) {
    json coeffs = json::array();
    for (const Complex& c : p.determinant->coeffs) coeffs.push_back(complex_to_json(c));
    out["determinant"] = coeffs;
  }
  return out;
}

inline json rows_to_json(const std::vector<ExperimentRow>& rows) {
  json out = json::array();
  for (const auto& r : rows) {
    json item = {{"j", r.j}, {"real_count", r.real_count}, {"max_abs_imag", r.max_abs_imag},
                 {"nonreal_count", r.nonreal_count}};
    if (r.sampled) item["sampled"] = {{"c", r.sampled->c}, {"d", r.sampled->d}};
    if (r.round_trip) item["roundTrip"] = *r.round_trip;
    if (!r.eigenvalues.empty()) {
      json eigs = json::array();
      for (const Complex& z : r.eigenvalues) eigs.push_back(complex_to_json(z));
      item["eigenvalues"] = eigs;
    }
    out.push_back(item);
  }
  return out;
}

}  // namespace hermikron::io
