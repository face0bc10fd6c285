#pragma once

// Seeded randomness: Ginibre matrices, Haar isometries, Stinespring channels and the
// normalized Wishart Choi matrix.

#include <Eigen/Cholesky>
#include <Eigen/Dense>
#include <Eigen/QR>

#include <boost/random/normal_distribution.hpp>

#include <array>
#include <cmath>
#include <cstdint>
#include <random>

#include "blas.hpp"
#include "errors.hpp"
#include "quantum.hpp"

namespace chanlab {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Independent generator for substream `stream_index` of `master_seed`.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
      : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t st = master_seed;
    const std::uint64_t a = splitmix64(st);
    st = a ^ stream_index;
    std::array<std::uint32_t, 8> words{};
    for (std::size_t k = 0; k < words.size(); k += 2) {
      const std::uint64_t w = splitmix64(st);
      words[k] = static_cast<std::uint32_t>(w);
      words[k + 1] = static_cast<std::uint32_t>(w >> 32);
    }
    std::seed_seq seq(words.begin(), words.end());
    engine_.seed(seq);
  }

  std::uint64_t master_seed() const { return master_seed_; }
  std::uint64_t stream_index() const { return stream_index_; }
  std::mt19937_64& engine() { return engine_; }

  double normal() { return normal_(engine_); }
  double uniform() { return std::generate_canonical<double, 64>(engine_); }

 private:
  std::uint64_t master_seed_;
  std::uint64_t stream_index_;
  std::mt19937_64 engine_;
  boost::random::normal_distribution<double> normal_;
};

// Entries (x + i y)/sqrt 2 with x, y standard normal, so E|G_ij|^2 = 1.
inline Matrix sample_ginibre(Eigen::Index rows, Eigen::Index cols, RngStream& rng) {
  require(rows >= 1 && cols >= 1, ErrorCode::invalid_parameter, "Ginibre shape must be positive");
  Matrix g(rows, cols);
  const double r = std::sqrt(0.5);
  cplx* p = g.data();
  for (Eigen::Index k = 0; k < g.size(); ++k) {
    const double x = rng.normal();
    const double y = rng.normal();
    p[k] = cplx(r * x, r * y);
  }
  return g;
}

// V : C^d -> C^d (x) C^s as the stacked blocks (V^1; ...; V^s), each d x d.
class HaarIsometry {
 public:
  HaarIsometry() = default;
  HaarIsometry(int d, int s, Matrix v) : d_(d), s_(s), v_(std::move(v)) {
    require(v_.rows() == static_cast<Eigen::Index>(d) * s && v_.cols() == d,
            ErrorCode::dimension_mismatch, "isometry must be (ds) x d");
  }

  // Marks V as produced by a sampler whose output is orthonormal by construction.
  static HaarIsometry sampled(int d, int s, Matrix v) {
    HaarIsometry out(d, s, std::move(v));
    out.sampled_ = true;
    return out;
  }

  int d() const { return d_; }
  int s() const { return s_; }
  bool is_sampled() const { return sampled_; }
  const Matrix& matrix() const { return v_; }
  auto block(int k) const { return v_.block(static_cast<Eigen::Index>(k) * d_, 0, d_, d_); }

  double defect() const {
    return (v_.adjoint() * v_ - Matrix::Identity(d_, d_)).cwiseAbs().maxCoeff();
  }

 private:
  int d_ = 0;
  int s_ = 0;
  bool sampled_ = false;
  Matrix v_;
};

enum class IsometryMethod {
  automatic,    // cholesky when ds >= 4d, householder otherwise
  householder,  // Householder QR with the phase fix diag(R) > 0
  cholesky,     // Q = G R^{-1} with R* R = G* G (the same phase-fixed QR factor)
};

// Orthonormalizes the columns of a Ginibre matrix into the Q factor of G = QR with
// diag(R) > 0, which is Haar distributed.
inline Matrix haar_q_factor(Matrix g, IsometryMethod method = IsometryMethod::automatic) {
  const Eigen::Index m = g.rows();
  const Eigen::Index n = g.cols();
  if (method == IsometryMethod::automatic)
    method = (m >= 4 * n) ? IsometryMethod::cholesky : IsometryMethod::householder;
  if (method == IsometryMethod::cholesky) {
    Matrix h = gram_lower(g);
    Eigen::LLT<Matrix, Eigen::Lower> llt(h);
    if (llt.info() == Eigen::Success) {
      llt.matrixU().solveInPlace<Eigen::OnTheRight>(g);
      return g;
    }
  }
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(m, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx r = qr.matrixQR()(j, j);
    const double a = std::abs(r);
    if (a > 0) q.col(j) *= r / a;
  }
  return q;
}

inline HaarIsometry sample_haar_isometry(int d, int s, RngStream& rng,
                                         IsometryMethod method = IsometryMethod::automatic) {
  require(d >= 1 && s >= 1, ErrorCode::invalid_parameter, "d and s must be positive");
  return HaarIsometry::sampled(
      d, s, haar_q_factor(sample_ginibre(static_cast<Eigen::Index>(d) * s, d, rng), method));
}

// Sampled isometries skip the O(d^2 ds) recheck.
inline void require_isometry(const HaarIsometry& v, double tol = 1e-8) {
  if (v.is_sampled()) return;
  const double def = v.defect();
  require(def <= tol, ErrorCode::not_isometry, "isometry defect " + std::to_string(def));
}

// rho -> sum_k V^k rho V^k*
inline ChannelMap stinespring_channel(const HaarIsometry& v) {
  require_isometry(v);
  return ChannelMap(v.d(), [v](const Matrix& z) -> Matrix {
    Matrix out = Matrix::Zero(v.d(), v.d());
    for (int k = 0; k < v.s(); ++k) out.noalias() += v.block(k) * z * v.block(k).adjoint();
    return out;
  });
}

// J = sum_k |w_k><w_k| with <ai|w_k> = V^k_{ai}.
inline ChoiMatrix stinespring_choi(const HaarIsometry& v) {
  require_isometry(v);
  const int d = v.d();
  Matrix w(d * d, v.s());
  for (int k = 0; k < v.s(); ++k)
    for (int a = 0; a < d; ++a)
      for (int i = 0; i < d; ++i) w(a * d + i, k) = v.block(k)(a, i);
  return ChoiMatrix(w * w.adjoint());
}

// (I (x) H^{-1/2}) G G* (I (x) H^{-1/2}) with H = (Tr (x) id)(G G*), for G of size d^2 x s.
inline ChoiMatrix normalized_wishart_choi(Matrix g) {
  const int d = perfect_square_root(g.rows());
  Matrix h = Matrix::Zero(d, d);
  for (int a = 0; a < d; ++a) {
    const auto ga = g.middleRows(static_cast<Eigen::Index>(a) * d, d);
    h.noalias() += ga * ga.adjoint();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  RealVector ev = es.eigenvalues();
  const double trace = ev.sum();
  require(ev.minCoeff() >= 1e-12 * trace / d, ErrorCode::singular_marginal,
          "input marginal is numerically singular");
  const double floor = 1e-14 * ev.maxCoeff();
  for (Eigen::Index k = 0; k < ev.size(); ++k) ev(k) = 1.0 / std::sqrt(std::max(ev(k), floor));
  const Matrix h_isqrt = es.eigenvectors() * ev.asDiagonal() * es.eigenvectors().adjoint();
  for (int a = 0; a < d; ++a) {
    auto ga = g.middleRows(static_cast<Eigen::Index>(a) * d, d);
    ga = (h_isqrt * ga).eval();
  }
  return ChoiMatrix(g * g.adjoint());
}

inline ChoiMatrix sample_wishart_choi(int d, int s, RngStream& rng) {
  require(d >= 1 && s >= 1, ErrorCode::invalid_parameter, "d and s must be positive");
  return normalized_wishart_choi(sample_ginibre(static_cast<Eigen::Index>(d) * d, s, rng));
}

}  // namespace chanlab
