#pragma once

// Dense Choi-matrix primitives.
//
// Index convention: J(Phi) = sum_ij Phi(|i><j|) (x) |i><j|, output factor first.
// Row/column index of |a b> is a*d + b with a the output and b the input label.
// The partial transpose acts on the second (input) factor.

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <functional>
#include <string>
#include <utility>

#include <json.hpp>

#include "errors.hpp"

namespace chanlab {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;

inline constexpr double kHermitianTol = 1e-9;
inline constexpr double kPsdTol = 1e-9;

inline int perfect_square_root(Eigen::Index side) {
  const int d = static_cast<int>(std::lround(std::sqrt(static_cast<double>(side))));
  require(static_cast<Eigen::Index>(d) * d == side && d >= 1, ErrorCode::dimension_mismatch,
          "side " + std::to_string(side) + " is not a perfect square");
  return d;
}

inline double hermitian_defect(const Matrix& x) {
  require(x.rows() == x.cols(), ErrorCode::dimension_mismatch, "matrix is not square");
  return x.rows() ? (x - x.adjoint()).cwiseAbs().maxCoeff() : 0.0;
}

inline void require_hermitian(const Matrix& x, double tol = kHermitianTol) {
  const double def = hermitian_defect(x);
  require(def <= tol * std::max(1.0, x.cwiseAbs().maxCoeff()), ErrorCode::not_hermitian,
          "asymmetry " + std::to_string(def));
}

// (1/sqrt d) sum_i |ii>
inline Vector max_entangled_vector(int d) {
  require(d >= 1, ErrorCode::invalid_parameter, "d must be positive");
  Vector v = Vector::Zero(static_cast<Eigen::Index>(d) * d);
  for (int i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

// sum_ij |ij><ji|
inline Matrix flip_operator(int d) {
  require(d >= 1, ErrorCode::invalid_parameter, "d must be positive");
  Matrix f = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) f(i * d + j, j * d + i) = 1.0;
  return f;
}

// sum_i |ii><ii|
inline Matrix diag_projector(int d) {
  require(d >= 1, ErrorCode::invalid_parameter, "d must be positive");
  Matrix p = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) p(i * d + i, i * d + i) = 1.0;
  return p;
}

// E_ij = |i><j| in dimension d.
inline Matrix matrix_unit(int d, int i, int j) {
  Matrix e = Matrix::Zero(d, d);
  e(i, j) = 1.0;
  return e;
}

class ChoiMatrix {
 public:
  ChoiMatrix() = default;
  explicit ChoiMatrix(Matrix m) : d_(perfect_square_root(m.rows())), m_(std::move(m)) {
    require(m_.rows() == m_.cols(), ErrorCode::dimension_mismatch, "Choi matrix is not square");
  }

  int d() const { return d_; }
  const Matrix& matrix() const { return m_; }
  Matrix& matrix() { return m_; }

  // <ab|J|ce>
  cplx at(int a, int b, int c, int e) const { return m_(a * d_ + b, c * d_ + e); }

 private:
  int d_ = 0;
  Matrix m_;
};

// Z -> Phi(Z) on d x d matrices.
class ChannelMap {
 public:
  using Action = std::function<Matrix(const Matrix&)>;

  ChannelMap() = default;
  ChannelMap(int d, Action f) : d_(d), f_(std::move(f)) {}

  int d() const { return d_; }

  Matrix operator()(const Matrix& z) const {
    require(z.rows() == d_ && z.cols() == d_, ErrorCode::dimension_mismatch,
            "input is not " + std::to_string(d_) + "x" + std::to_string(d_));
    return f_(z);
  }

 private:
  int d_ = 0;
  Action f_;
};

inline ChannelMap identity_map(int d) {
  return ChannelMap(d, [](const Matrix& z) { return z; });
}

inline ChannelMap transpose_map(int d) {
  return ChannelMap(d, [](const Matrix& z) -> Matrix { return z.transpose(); });
}

// Completely depolarizing: Z -> Tr(Z) I / d.
inline ChannelMap depolarizing_map(int d) {
  return ChannelMap(d, [d](const Matrix& z) -> Matrix {
    return Matrix::Identity(d, d) * (z.trace() / static_cast<double>(d));
  });
}

// Completely dephasing: Z -> diag(Z).
inline ChannelMap dephasing_map(int d) {
  return ChannelMap(d, [](const Matrix& z) -> Matrix { return z.diagonal().asDiagonal(); });
}

inline ChoiMatrix choi_of_map(const ChannelMap& phi) {
  const int d = phi.d();
  Matrix j = Matrix::Zero(d * d, d * d);
  for (int i = 0; i < d; ++i) {
    for (int k = 0; k < d; ++k) {
      const Matrix out = phi(matrix_unit(d, i, k));
      require(out.rows() == d && out.cols() == d, ErrorCode::dimension_mismatch,
              "map output has wrong shape");
      for (int a = 0; a < d; ++a)
        for (int c = 0; c < d; ++c) j(a * d + i, c * d + k) = out(a, c);
    }
  }
  return ChoiMatrix(std::move(j));
}

// Phi(Z)_{ac} = sum_ik Z_ik <ai|J|ck>
inline ChannelMap map_of_choi(const ChoiMatrix& choi) {
  const int d = choi.d();
  return ChannelMap(d, [choi, d](const Matrix& z) -> Matrix {
    Matrix out = Matrix::Zero(d, d);
    const Matrix& j = choi.matrix();
    for (int i = 0; i < d; ++i)
      for (int k = 0; k < d; ++k) {
        const cplx w = z(i, k);
        if (w == cplx(0.0)) continue;
        for (int a = 0; a < d; ++a)
          for (int c = 0; c < d; ++c) out(a, c) += w * j(a * d + i, c * d + k);
      }
    return out;
  });
}

// Transpose of the second tensor factor.
inline Matrix partial_transpose(const Matrix& x) {
  require(x.rows() == x.cols(), ErrorCode::dimension_mismatch, "matrix is not square");
  const int d = perfect_square_root(x.rows());
  Matrix y(x.rows(), x.cols());
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b)
      for (int c = 0; c < d; ++c)
        for (int e = 0; e < d; ++e) y(a * d + b, c * d + e) = x(a * d + e, c * d + b);
  return y;
}

// (Tr (x) id)(X): trace over the first (output) factor.
inline Matrix partial_trace_output(const Matrix& x) {
  const int d = perfect_square_root(x.rows());
  Matrix h = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) h += x.block(a * d, a * d, d, d);
  return h;
}

// (id (x) Tr)(X): trace over the second (input) factor.
inline Matrix partial_trace_input(const Matrix& x) {
  const int d = perfect_square_root(x.rows());
  Matrix h = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a)
    for (int c = 0; c < d; ++c) h(a, c) = x.block(a * d, c * d, d, d).trace();
  return h;
}

inline RealVector hermitian_eigenvalues(const Matrix& x) {
  require_hermitian(x);
  Eigen::SelfAdjointEigenSolver<Matrix> es(x, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

inline double min_eigenvalue(const Matrix& x) { return hermitian_eigenvalues(x).minCoeff(); }

// lambda_min(X) >= -tol * max(1, Tr X / side)
inline bool is_psd(const Matrix& x, double tol = kPsdTol) {
  const double scale = std::max(1.0, x.trace().real() / static_cast<double>(x.rows()));
  return min_eigenvalue(x) >= -tol * scale;
}

inline bool is_ppt(const Matrix& x, double tol = kPsdTol) {
  return is_psd(partial_transpose(x), tol);
}

inline bool is_ppt(const ChoiMatrix& j, double tol = kPsdTol) { return is_ppt(j.matrix(), tol); }

inline double nuclear_norm(const Matrix& m) {
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues().sum();
}

inline double nuclear_norm(const RealMatrix& m) {
  Eigen::JacobiSVD<RealMatrix> svd(m);
  return svd.singularValues().sum();
}

// (Phi1 o Phi2)(Z) = Phi1(Phi2(Z))
inline ChannelMap compose(const ChannelMap& phi1, const ChannelMap& phi2) {
  require(phi1.d() == phi2.d(), ErrorCode::dimension_mismatch, "composed maps differ in d");
  return ChannelMap(phi1.d(), [phi1, phi2](const Matrix& z) { return phi1(phi2(z)); });
}

template <typename Derived>
typename Derived::PlainObject off_diagonal(const Eigen::MatrixBase<Derived>& x) {
  typename Derived::PlainObject y = x;
  y.diagonal().setZero();
  return y;
}

inline double max_abs_diff(const Matrix& x, const Matrix& y) {
  require(x.rows() == y.rows() && x.cols() == y.cols(), ErrorCode::dimension_mismatch,
          "shape mismatch");
  return x.size() ? (x - y).cwiseAbs().maxCoeff() : 0.0;
}

// JSON as an array of rows, each entry a [re, im] pair.
inline nlohmann::json matrix_to_json(const Matrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_from_json(const nlohmann::json& j) {
  require(j.is_array(), ErrorCode::invalid_parameter, "matrix JSON must be an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    require(static_cast<Eigen::Index>(j[i].size()) == cols, ErrorCode::dimension_mismatch,
            "ragged matrix JSON");
    for (Eigen::Index k = 0; k < cols; ++k) {
      const auto& e = j[i][k];
      m(i, k) = e.is_array() ? cplx(e.at(0).get<double>(), e.at(1).get<double>())
                             : cplx(e.get<double>(), 0.0);
    }
  }
  return m;
}

}  // namespace chanlab
