#pragma once

// The correspondence between lambda-lengths and freeway weights, the two-forms on both charts,
// and the curvature-scaling family.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "brokenhyp/complex.hpp"
#include "brokenhyp/error.hpp"
#include "brokenhyp/fstruct.hpp"
#include "brokenhyp/hstruct.hpp"

namespace brokenhyp {

enum class Chart { LogLambda, LargeWeight, SmallWeight };

constexpr const char* to_string(Chart c) {
  switch (c) {
    case Chart::LogLambda: return "log-lambda";
    case Chart::LargeWeight: return "large-weight";
    case Chart::SmallWeight: return "small-weight";
  }
  return "unknown";
}

struct Tangent {
  Chart chart = Chart::LogLambda;
  Eigen::VectorXd v;
};

// Constant-coefficient antisymmetric form: form(u, v) = u^T M v.
class TwoForm {
 public:
  TwoForm(Chart chart, Eigen::MatrixXd coefficients) : chart_(chart), m_(std::move(coefficients)) {}

  Chart chart() const { return chart_; }
  const Eigen::MatrixXd& matrix() const { return m_; }
  double antisymmetry_defect() const { return (m_ + m_.transpose()).cwiseAbs().maxCoeff(); }

 private:
  Chart chart_;
  Eigen::MatrixXd m_;
};

inline double evaluate(const TwoForm& form, const Tangent& u, const Tangent& v) {
  if (u.chart != form.chart() || v.chart != form.chart())
    throw Error(ErrorKind::ChartMismatch, std::string("form lives on the ") + to_string(form.chart()) + " chart");
  if (u.v.size() != form.matrix().rows() || v.v.size() != form.matrix().rows())
    throw Error(ErrorKind::ChartMismatch, "tangent dimension does not match the chart");
  return u.v.dot(form.matrix() * v.v);
}

namespace detail {

// -c * (dx0 ^ dx1 + dx1 ^ dx2 + dx2 ^ dx0) on the three coordinates 3f, 3f+1, 3f+2 of every face.
inline Eigen::MatrixXd cyclic_block_form(int faces, double c) {
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(3 * faces, 3 * faces);
  for (int f = 0; f < faces; ++f)
    for (int k = 0; k < 3; ++k) {
      const int a = 3 * f + k;
      const int b = 3 * f + cyc(k, 1);
      m(a, b) -= c;
      m(b, a) += c;
    }
  return m;
}

// Linear map large weights -> small weights.
inline Eigen::MatrixXd small_from_large(int faces) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * faces, 3 * faces);
  for (int f = 0; f < faces; ++f)
    for (int k = 0; k < 3; ++k) {
      a(3 * f + k, 3 * f + cyc(k, 1)) = 0.5;
      a(3 * f + k, 3 * f + cyc(k, 2)) = 0.5;
      a(3 * f + k, 3 * f + k) = -0.5;
    }
  return a;
}

// Forward-mode dual number, enough to differentiate the lambda -> weight map.
struct Dual {
  double v = 0.0;
  double d = 0.0;
};
inline Dual operator+(Dual a, Dual b) { return {a.v + b.v, a.d + b.d}; }
inline Dual operator*(double s, Dual a) { return {s * a.v, s * a.d}; }

// w = 2 log(lambda) + log(1/2), generic in the scalar type.
template <class Scalar>
Scalar weight_from_log_lambda(Scalar log_lambda) {
  return 2.0 * log_lambda + Scalar{std::log(0.5)};
}

}  // namespace detail

// Extended Weil-Petersson form on log-lambda coordinates indexed by triangle-edge pairs.
inline TwoForm omega(const IdealTriangulation& t) {
  return TwoForm(Chart::LogLambda, detail::cyclic_block_form(t.face_count(), 2.0));
}

// Extended Thurston form on small weights (indexed by sectors) or transported to large weights.
inline TwoForm iota(const IdealTriangulation& t, Chart chart) {
  const Eigen::MatrixXd small = detail::cyclic_block_form(t.face_count(), 0.5);
  switch (chart) {
    case Chart::SmallWeight: return TwoForm(Chart::SmallWeight, small);
    case Chart::LargeWeight: {
      const Eigen::MatrixXd a = detail::small_from_large(t.face_count());
      return TwoForm(Chart::LargeWeight, a.transpose() * small * a);
    }
    case Chart::LogLambda: break;
  }
  throw Error(ErrorKind::ChartMismatch, "the Thurston form lives on weight charts");
}

inline BrokenMeasure f_delta(const DecoratedBrokenHyperbolic& h) {
  std::vector<double> w(h.log_lambdas().size());
  for (std::size_t i = 0; i < w.size(); ++i) {
    const double x = 2.0 * h.log_lambdas()[i] + std::log(0.5);
    if (x < -kZeroSlack)
      throw Error(ErrorKind::InvalidDecoration, "lambda-length below sqrt(2) gives a negative weight");
    w[i] = std::max(x, 0.0);
  }
  return BrokenMeasure(h.base(), std::move(w));
}

inline DecoratedBrokenHyperbolic f_delta_inverse(const BrokenMeasure& m) {
  std::vector<double> logs(m.large_weights().size());
  for (std::size_t i = 0; i < logs.size(); ++i) logs[i] = 0.5 * (kLogTwo + m.large_weights()[i]);
  return DecoratedBrokenHyperbolic(m.base(), std::move(logs));
}

// Jacobian of f_delta from log-lambda to large-weight coordinates, by forward-mode
// differentiation at h.
inline Eigen::MatrixXd f_delta_jacobian(const DecoratedBrokenHyperbolic& h) {
  const int n = static_cast<int>(h.log_lambdas().size());
  Eigen::MatrixXd j = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    // the map is diagonal: weight i depends on lambda i alone
    const detail::Dual w = detail::weight_from_log_lambda(detail::Dual{h.log_lambdas()[i], 1.0});
    j(i, i) = w.d;
  }
  return j;
}

// ||J^T iota_large J - Omega||_inf with the constant Jacobian 2 Id.
inline double pullback_residual(const IdealTriangulation& t) {
  const Eigen::MatrixXd j = 2.0 * Eigen::MatrixXd::Identity(t.pair_count(), t.pair_count());
  const Eigen::MatrixXd pulled = j.transpose() * iota(t, Chart::LargeWeight).matrix() * j;
  return (pulled - omega(t).matrix()).cwiseAbs().maxCoeff();
}

// Same, with the Jacobian differentiated at the point h.
inline double pullback_residual(const DecoratedBrokenHyperbolic& h) {
  const auto& t = h.triangulation();
  const Eigen::MatrixXd j = f_delta_jacobian(h);
  const Eigen::MatrixXd pulled = j.transpose() * iota(t, Chart::LargeWeight).matrix() * j;
  return (pulled - omega(t).matrix()).cwiseAbs().maxCoeff();
}

// ---------------------------------------------------------------------------
// Curvature scaling

struct YamabePoint {
  DecoratedBrokenHyperbolic structure;
  double x = 1.0;  // metric of curvature -x^2
};

inline std::pair<BrokenMeasure, double> yamabe_image(const YamabePoint& p) {
  if (!(p.x > 0.0)) throw Error(ErrorKind::InvalidInput, "curvature scale must be positive");
  return {scale(f_delta(p.structure), p.x), p.x};
}

// |iota(D(x f)u, D(x f)v) - x^2 Omega(u, v)| / (x^2 |u| |v|) for log-lambda tangents u, v.
inline double scaling_identity_residual(const DecoratedBrokenHyperbolic& h, double x, const Eigen::VectorXd& u,
                                        const Eigen::VectorXd& v) {
  if (!(x > 0.0)) throw Error(ErrorKind::InvalidInput, "curvature scale must be positive");
  const auto& t = h.triangulation();
  const Eigen::MatrixXd d = x * f_delta_jacobian(h);
  const Tangent du{Chart::LargeWeight, d * u};
  const Tangent dv{Chart::LargeWeight, d * v};
  const double lhs = evaluate(iota(t, Chart::LargeWeight), du, dv);
  const double rhs = x * x * evaluate(omega(t), {Chart::LogLambda, u}, {Chart::LogLambda, v});
  const double size = x * x * u.norm() * v.norm();
  if (size == 0.0) return std::abs(lhs - rhs);
  return std::abs(lhs - rhs) / size;
}

// ---------------------------------------------------------------------------
// Rank diagnostic

struct RankReport {
  int rank = 0;
  int dimension = 0;                // dimension of the subspace the form was restricted to
  std::vector<double> spectrum;     // singular values, descending
};

namespace detail {

inline RankReport rank_of(const Eigen::MatrixXd& m, int dimension) {
  RankReport r;
  r.dimension = dimension;
  if (m.size() == 0) return r;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  const auto s = svd.singularValues();
  const double cutoff = 1e-8 * std::max(1.0, s.size() > 0 ? s(0) : 0.0);
  for (int i = 0; i < s.size(); ++i) {
    r.spectrum.push_back(s(i));
    if (s(i) > cutoff) ++r.rank;
  }
  return r;
}

// Orthonormal basis of the null space of a (rows x n) matrix, singular-value cutoff 1e-8.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& a, int n) {
  if (a.rows() == 0) return Eigen::MatrixXd::Identity(n, n);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeFullV);
  const auto s = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > 1e-8) ++rank;
  return svd.matrixV().rightCols(n - rank);
}

// log of the measure-convention puncture holonomies as a function of log-lambda coordinates.
inline Eigen::VectorXd holonomy_constraints(const DecoratedBrokenHyperbolic& h) {
  const auto& t = h.triangulation();
  Eigen::VectorXd c(t.puncture_count());
  for (int p = 0; p < t.puncture_count(); ++p)
    c(p) = std::log(puncture_holonomy(h, t.corner_cycles()[p], Convention::Measure));
  return c;
}

}  // namespace detail

// Rank of Omega on the full chart, or restricted to the tangent space of the puncture-holonomy
// constraints at h (central differences, step 1e-6).
inline RankReport rank_report(const IdealTriangulation& t, const DecoratedBrokenHyperbolic* h, bool constrained) {
  const Eigen::MatrixXd m = omega(t).matrix();
  const int n = t.pair_count();
  if (!constrained) return detail::rank_of(m, n);
  if (h == nullptr) throw Error(ErrorKind::InvalidInput, "constrained rank needs a structure");
  const double step = 1e-6;
  Eigen::MatrixXd jac(t.puncture_count(), n);
  std::vector<double> base(h->log_lambdas().begin(), h->log_lambdas().end());
  for (int i = 0; i < n; ++i) {
    auto plus = base, minus = base;
    plus[i] += step;
    minus[i] -= step;
    const DecoratedBrokenHyperbolic hp(h->base(), plus), hm(h->base(), minus);
    jac.col(i) = (detail::holonomy_constraints(hp) - detail::holonomy_constraints(hm)) / (2.0 * step);
  }
  const Eigen::MatrixXd basis = detail::null_space(jac, n);
  return detail::rank_of(basis.transpose() * m * basis, static_cast<int>(basis.cols()));
}

// Rank of Omega pulled back to the ordinary decorated structures (equal lambda on both sides).
inline RankReport unbroken_rank_report(const IdealTriangulation& t) {
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(t.pair_count(), t.edge_count());
  for (int i = 0; i < t.pair_count(); ++i) b(i, t.edge_of(TriangleEdgePair::from_index(i))) = 1.0;
  return detail::rank_of(b.transpose() * omega(t).matrix() * b, t.edge_count());
}

}  // namespace brokenhyp
