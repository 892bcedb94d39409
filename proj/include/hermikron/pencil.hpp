#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "hermikron/error.hpp"
#include "hermikron/random.hpp"

namespace hermikron {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;

// Tolerances shared across the library.
inline constexpr double kHermTol = 1e-12;
inline constexpr double kRankTol = 1e-10;
inline constexpr double kCondMax = 1e6;
inline constexpr double kGapMin = 1e6;
inline constexpr int kNormalRankSamples = 7;
inline constexpr int kDeterminantMaxSize = 12;

/// Coefficients in ascending powers of lambda.
struct Polynomial {
  std::vector<Complex> coeffs;

  int degree_bound() const { return static_cast<int>(coeffs.size()) - 1; }

  Complex operator()(Complex x) const {
    Complex acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  double max_abs_coeff() const {
    double m = 0.0;
    for (const auto& c : coeffs) m = std::max(m, std::abs(c));
    return m;
  }
};

/// A + lambda * B, both coefficients of the same shape.
class MatrixPencil {
 public:
  MatrixPencil() = default;
  MatrixPencil(ComplexMatrix a, ComplexMatrix b) : a_(std::move(a)), b_(std::move(b)) {
    if (a_.rows() != b_.rows() || a_.cols() != b_.cols())
      throw Error(ErrorCode::InvalidArgument, "pencil coefficients differ in shape");
  }

  const ComplexMatrix& A() const { return a_; }
  const ComplexMatrix& B() const { return b_; }
  Eigen::Index rows() const { return a_.rows(); }
  Eigen::Index cols() const { return a_.cols(); }
  bool square() const { return rows() == cols(); }

  double scale() const { return std::max({a_.norm(), b_.norm(), 1.0}); }

  friend MatrixPencil operator*(Complex s, const MatrixPencil& p) {
    return {s * p.a_, s * p.b_};
  }
  friend MatrixPencil operator+(const MatrixPencil& p, const MatrixPencil& q) {
    return {p.a_ + q.a_, p.b_ + q.b_};
  }

 private:
  ComplexMatrix a_;
  ComplexMatrix b_;
};

inline double hermitian_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).norm();
}

/// Square pencil with A = A*, B = B*. Size zero is rejected.
class HermitianPencil {
 public:
  /// Validates within hermTol * max(|A|_F, |B|_F, 1) and stores the
  /// Hermitian parts (M + M*)/2.
  static HermitianPencil from_measured(const MatrixPencil& p) {
    check_shape(p);
    const double tol = kHermTol * p.scale();
    if (hermitian_defect(p.A()) > tol || hermitian_defect(p.B()) > tol)
      throw Error(ErrorCode::NotHermitian, "coefficient asymmetry exceeds hermTol");
    return HermitianPencil(symmetrize(p.A()), symmetrize(p.B()));
  }

  /// Requires exact Hermitian coefficients (canonical constructors).
  static HermitianPencil exact(MatrixPencil p) {
    check_shape(p);
    if (p.A() != p.A().adjoint() || p.B() != p.B().adjoint())
      throw Error(ErrorCode::NotHermitian, "canonical pencil is not exactly Hermitian");
    return HermitianPencil(p.A(), p.B());
  }

  /// Forces Hermitian structure by averaging with the adjoint; for results of
  /// congruences whose asymmetry is pure roundoff.
  static HermitianPencil symmetrized(const MatrixPencil& p) {
    check_shape(p);
    return HermitianPencil(symmetrize(p.A()), symmetrize(p.B()));
  }

  const ComplexMatrix& A() const { return pencil_.A(); }
  const ComplexMatrix& B() const { return pencil_.B(); }
  const MatrixPencil& pencil() const { return pencil_; }
  Eigen::Index size() const { return pencil_.rows(); }

  operator const MatrixPencil&() const { return pencil_; }

 private:
  HermitianPencil(ComplexMatrix a, ComplexMatrix b) : pencil_(std::move(a), std::move(b)) {}

  static void check_shape(const MatrixPencil& p) {
    if (!p.square()) throw Error(ErrorCode::InvalidArgument, "Hermitian pencil must be square");
    if (p.rows() == 0) throw Error(ErrorCode::InvalidArgument, "Hermitian pencil of size 0");
  }

  static ComplexMatrix symmetrize(const ComplexMatrix& m) {
    return ComplexMatrix((m + m.adjoint()) * 0.5);
  }

  MatrixPencil pencil_;
};

/// Signature (pos, neg, zero) of a Hermitian matrix.
struct Inertia {
  int pos = 0;
  int neg = 0;
  int zero = 0;

  int size() const { return pos + neg + zero; }
  friend bool operator==(const Inertia&, const Inertia&) = default;
  friend Inertia operator+(const Inertia& a, const Inertia& b) {
    return {a.pos + b.pos, a.neg + b.neg, a.zero + b.zero};
  }
};

inline ComplexMatrix evaluate(const MatrixPencil& p, Complex lambda) {
  return p.A() + lambda * p.B();
}

inline Eigen::VectorXd singular_values(const ComplexMatrix& m) {
  if (m.size() == 0) return Eigen::VectorXd();
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues();
}

inline double condition_number(const ComplexMatrix& q) {
  const Eigen::VectorXd s = singular_values(q);
  if (s.size() == 0) return 1.0;
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

/// Rank decision together with the ratio between the smallest retained and
/// largest discarded singular value (infinite when nothing is discarded or
/// the discarded values are exactly zero).
struct RankDecision {
  int rank = 0;
  double gap_ratio = std::numeric_limits<double>::infinity();
};

inline RankDecision rank_from_singular_values(const Eigen::VectorXd& s, Eigen::Index rows,
                                              Eigen::Index cols, double rel_tol = kRankTol) {
  RankDecision out;
  if (s.size() == 0 || s(0) == 0.0) return out;
  const double threshold = static_cast<double>(std::max(rows, cols)) * s(0) * rel_tol;
  int r = 0;
  while (r < s.size() && s(r) > threshold) ++r;
  out.rank = r;
  if (r < s.size() && s(r) > 0.0) out.gap_ratio = s(r - 1) / s(r);
  return out;
}

inline RankDecision numerical_rank(const ComplexMatrix& m, double rel_tol = kRankTol) {
  return rank_from_singular_values(singular_values(m), m.rows(), m.cols(), rel_tol);
}

inline RankDecision numerical_rank(const RealMatrix& m, double rel_tol = kRankTol) {
  if (m.size() == 0) return {};
  Eigen::BDCSVD<RealMatrix> svd(m);
  return rank_from_singular_values(svd.singularValues(), m.rows(), m.cols(), rel_tol);
}

/// Sylvester inertia. Eigenvalues within tol * (largest |eigenvalue|) of zero
/// count as zero; the scale is 1 when every eigenvalue vanishes.
inline Inertia inertia_of(const ComplexMatrix& m, double tol = 1e-10) {
  if (m.rows() != m.cols()) throw Error(ErrorCode::InvalidArgument, "inertia of non-square matrix");
  if (hermitian_defect(m) > kHermTol * std::max(m.norm(), 1.0))
    throw Error(ErrorCode::NotHermitian, "inertia_of requires a Hermitian matrix");
  Inertia out;
  if (m.size() == 0) return out;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(m, Eigen::EigenvaluesOnly);
  const Eigen::VectorXd& w = eig.eigenvalues();
  double scale = w.cwiseAbs().maxCoeff();
  if (scale == 0.0) scale = 1.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) {
    if (w(i) > tol * scale)
      ++out.pos;
    else if (w(i) < -tol * scale)
      ++out.neg;
    else
      ++out.zero;
  }
  return out;
}

/// Q* H Q, re-symmetrised per coefficient.
inline HermitianPencil congruence(const HermitianPencil& p, const ComplexMatrix& q) {
  if (q.rows() != p.size() || q.cols() != p.size())
    throw Error(ErrorCode::InvalidArgument, "congruence transform has wrong shape");
  if (condition_number(q) > kCondMax)
    throw Error(ErrorCode::SingularTransform, "condition estimate exceeds condMax");
  const ComplexMatrix qa = q.adjoint();
  return HermitianPencil::symmetrized(MatrixPencil(qa * p.A() * q, qa * p.B() * q));
}

/// Evaluation points for normal_rank: moduli uniform in [0.5, 2], angles
/// uniform after a random common rotation.
inline std::vector<Complex> normal_rank_points(std::uint64_t seed, int count = kNormalRankSamples) {
  Rng rng = make_rng(seed);
  std::uniform_real_distribution<double> radius(0.5, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  const double rotation = angle(rng);
  std::vector<Complex> pts;
  pts.reserve(count);
  for (int i = 0; i < count; ++i) {
    const double rho = radius(rng);
    const double theta = angle(rng) + rotation;
    pts.push_back(std::polar(rho, theta));
  }
  return pts;
}

inline int normal_rank(const MatrixPencil& p, std::uint64_t seed = 0) {
  if (p.rows() == 0 || p.cols() == 0) return 0;
  int best = 0;
  for (const Complex& z : normal_rank_points(seed))
    best = std::max(best, numerical_rank(evaluate(p, z)).rank);
  return best;
}

/// det(A + lambda B) via interpolation at the (n+1)-th roots of unity.
inline Polynomial determinant(const MatrixPencil& p) {
  if (!p.square()) throw Error(ErrorCode::InvalidArgument, "determinant of non-square pencil");
  const Eigen::Index n = p.rows();
  if (n > kDeterminantMaxSize)
    throw Error(ErrorCode::TooLarge, "determinant limited to n <= 12");
  const int points = static_cast<int>(n) + 1;
  std::vector<Complex> values(points);
  for (int k = 0; k < points; ++k) {
    const Complex z = std::polar(1.0, 2.0 * std::numbers::pi * k / points);
    values[k] = n == 0 ? Complex(1.0) : evaluate(p, z).partialPivLu().determinant();
  }
  Polynomial out;
  out.coeffs.resize(points);
  for (int m = 0; m < points; ++m) {
    Complex acc = 0.0;
    for (int k = 0; k < points; ++k)
      acc += values[k] * std::polar(1.0, -2.0 * std::numbers::pi * k * m / points);
    out.coeffs[m] = acc / static_cast<double>(points);
  }
  return out;
}

/// Block-diagonal direct sum in the given order.
inline MatrixPencil direct_sum(std::span<const MatrixPencil> parts) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& q : parts) {
    rows += q.rows();
    cols += q.cols();
  }
  ComplexMatrix a = ComplexMatrix::Zero(rows, cols);
  ComplexMatrix b = ComplexMatrix::Zero(rows, cols);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& q : parts) {
    a.block(r, c, q.rows(), q.cols()) = q.A();
    b.block(r, c, q.rows(), q.cols()) = q.B();
    r += q.rows();
    c += q.cols();
  }
  return {std::move(a), std::move(b)};
}

inline MatrixPencil direct_sum(std::initializer_list<MatrixPencil> parts) {
  return direct_sum(std::span<const MatrixPencil>(parts.begin(), parts.size()));
}

inline HermitianPencil direct_sum(const HermitianPencil& p, const HermitianPencil& q) {
  return HermitianPencil::exact(direct_sum({p.pencil(), q.pencil()}));
}

inline HermitianPencil zero_pencil(Eigen::Index n) {
  return HermitianPencil::exact(MatrixPencil(ComplexMatrix::Zero(n, n), ComplexMatrix::Zero(n, n)));
}

}  // namespace hermikron
