#include <gtest/gtest.h>

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "chanlab/quantum.hpp"
#include "chanlab/sampling.hpp"

using namespace chanlab;

namespace {

Matrix random_hermitian(int n, std::uint64_t seed) {
  RngStream rng(seed, 0);
  Matrix g = sample_ginibre(n, n, rng);
  return (g + g.adjoint()) / 2.0;
}

ChannelMap random_map(int d, std::uint64_t seed) {
  RngStream rng(seed, 1);
  return stinespring_channel(sample_haar_isometry(d, 3, rng));
}

}  // namespace

TEST(Quantum, MaxEntangledVector) {
  const Vector v = max_entangled_vector(2);
  EXPECT_NEAR(v(0).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_EQ(v(1), cplx(0));
  EXPECT_EQ(v(2), cplx(0));
  EXPECT_NEAR(v(3).real(), 1 / std::sqrt(2.0), 1e-15);
  EXPECT_NEAR(max_entangled_vector(5).norm(), 1.0, 1e-14);
  EXPECT_EQ(max_entangled_vector(1).size(), 1);
  EXPECT_EQ(max_entangled_vector(1)(0), cplx(1));
}

TEST(Quantum, FlipAndDiagProjector) {
  const Matrix f2 = flip_operator(2);
  EXPECT_LE(max_abs_diff(f2 * f2, Matrix::Identity(4, 4)), 1e-15);
  EXPECT_EQ(flip_operator(3).trace(), cplx(3));
  const Matrix p = diag_projector(2);
  EXPECT_EQ(p.diagonal(), Vector((Vector(4) << 1, 0, 0, 1).finished()));
  EXPECT_LE(max_abs_diff(p * p, p), 0.0);
  EXPECT_EQ(diag_projector(4).trace(), cplx(4));
}

TEST(Quantum, ChoiOfStandardMaps) {
  const int d = 3;
  const Vector om = max_entangled_vector(d);
  EXPECT_LE(max_abs_diff(choi_of_map(identity_map(d)).matrix(), d * om * om.adjoint()), 1e-14);
  EXPECT_LE(max_abs_diff(choi_of_map(depolarizing_map(d)).matrix(),
                         Matrix::Identity(d * d, d * d) / double(d)),
            1e-15);
  EXPECT_LE(max_abs_diff(choi_of_map(transpose_map(d)).matrix(), flip_operator(d)), 0.0);
  EXPECT_LE(max_abs_diff(choi_of_map(dephasing_map(d)).matrix(), diag_projector(d)), 0.0);
}

TEST(Quantum, ChoiRoundTrip) {
  for (int d = 1; d <= 8; ++d) {
    const ChoiMatrix j = choi_of_map(random_map(d, 100 + d));
    const ChoiMatrix back = choi_of_map(map_of_choi(j));
    EXPECT_LE(max_abs_diff(j.matrix(), back.matrix()), 1e-12) << "d=" << d;
  }
}

TEST(Quantum, ChoiDimensionErrors) {
  try {
    ChoiMatrix bad(Matrix::Zero(5, 5));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::dimension_mismatch);
  }
  const ChannelMap phi = identity_map(3);
  EXPECT_THROW(phi(Matrix::Zero(2, 2)), Error);
  EXPECT_THROW(compose(identity_map(2), identity_map(3)), Error);
}

TEST(Quantum, ChannelLinearity) {
  const int d = 4;
  const ChannelMap phi = random_map(d, 7);
  RngStream rng(8, 0);
  const Matrix x = sample_ginibre(d, d, rng);
  const Matrix y = sample_ginibre(d, d, rng);
  const cplx a(0.3, -1.2), b(2.0, 0.5);
  EXPECT_LE(max_abs_diff(phi(a * x + b * y), a * phi(x) + b * phi(y)), 1e-10);
}

TEST(Quantum, PartialTranspose) {
  for (int d : {2, 3, 4}) {
    const Vector om = max_entangled_vector(d);
    EXPECT_LE(max_abs_diff(partial_transpose(om * om.adjoint()), flip_operator(d) / double(d)),
              1e-15);
  }
  RngStream rng(3, 0);
  const Matrix a = sample_ginibre(3, 3, rng);
  const Matrix b = sample_ginibre(3, 3, rng);
  const Matrix ab = Eigen::kroneckerProduct(a, b);
  EXPECT_LE(max_abs_diff(partial_transpose(ab), Eigen::kroneckerProduct(a, b.transpose())), 1e-14);
  const Matrix h = random_hermitian(9, 4);
  const Matrix ht = partial_transpose(h);
  EXPECT_LE(max_abs_diff(partial_transpose(ht), h), 0.0);
  EXPECT_NEAR(std::abs(ht.trace() - h.trace()), 0.0, 1e-12 * h.cwiseAbs().maxCoeff());
  EXPECT_LE(hermitian_defect(ht), 1e-12);
  EXPECT_THROW(partial_transpose(Matrix::Zero(8, 8)), Error);
  EXPECT_THROW(partial_transpose(Matrix::Zero(4, 3)), Error);
}

TEST(Quantum, PositivityTests) {
  for (int d : {2, 3}) {
    EXPECT_TRUE(is_ppt(Matrix(Matrix::Identity(d * d, d * d) / double(d * d))));
    EXPECT_TRUE(is_ppt(diag_projector(d)));
    EXPECT_TRUE(is_psd(diag_projector(d)));
  }
  const Vector om = max_entangled_vector(2);
  const Matrix jid = 2.0 * om * om.adjoint();
  EXPECT_TRUE(is_psd(jid));
  EXPECT_FALSE(is_ppt(jid));
  EXPECT_NEAR(min_eigenvalue(partial_transpose(jid)), -1.0, 1e-14);
  Matrix nonherm = Matrix::Identity(4, 4);
  nonherm(0, 1) = 1e-3;
  try {
    is_psd(nonherm);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::not_hermitian);
  }
  Matrix tiny = Matrix::Identity(4, 4);
  tiny(3, 3) = -5e-10;
  EXPECT_TRUE(is_psd(tiny));
  tiny(3, 3) = -5e-9;
  EXPECT_FALSE(is_psd(tiny));
  EXPECT_TRUE(is_psd(tiny, 1e-8));
}

TEST(Quantum, EigensolverContract) {
  for (int n : {4, 9, 25, 100, 400}) {
    const Matrix x = random_hermitian(n, 50 + n);
    Eigen::SelfAdjointEigenSolver<Matrix> es(x);
    const double norm = x.norm();
    double worst = 0;
    for (int k = 0; k < n; ++k) {
      const Vector v = es.eigenvectors().col(k);
      worst = std::max(worst, (x * v - es.eigenvalues()(k) * v).norm());
    }
    EXPECT_LE(worst, 1e-9 * norm) << "n=" << n;
    EXPECT_NEAR(hermitian_eigenvalues(x).minCoeff(), es.eigenvalues().minCoeff(), 1e-12 * norm);
  }
}

TEST(Quantum, NuclearNorm) {
  EXPECT_NEAR(nuclear_norm(RealMatrix(RealMatrix::Ones(5, 5) / 5.0)), 1.0, 1e-13);
  EXPECT_NEAR(nuclear_norm(Matrix(Matrix::Identity(4, 4))), 4.0, 1e-14);
  RealMatrix m = RealMatrix::Zero(2, 2);
  m(0, 0) = 1;
  m(1, 1) = -2;
  EXPECT_NEAR(nuclear_norm(m), 3.0, 1e-14);
}

TEST(Quantum, ComposeAndOffDiagonal) {
  const int d = 3;
  const ChannelMap phi = random_map(d, 11);
  const ChannelMap c = compose(identity_map(d), phi);
  RngStream rng(12, 0);
  for (int t = 0; t < 3; ++t) {
    const Matrix z = sample_ginibre(d, d, rng);
    EXPECT_LE(max_abs_diff(c(z), phi(z)), 0.0);
  }
  EXPECT_TRUE(off_diagonal(RealMatrix(RealMatrix::Identity(4, 4))).isZero());
  const RealMatrix ones = RealMatrix::Ones(4, 4);
  EXPECT_EQ(off_diagonal(ones), RealMatrix(ones - RealMatrix::Identity(4, 4)));
}

TEST(Quantum, ChannelChoiInvariants) {
  for (int d : {2, 3, 5}) {
    const ChoiMatrix j = choi_of_map(random_map(d, 200 + d));
    EXPECT_LE(hermitian_defect(j.matrix()), 1e-12);
    EXPECT_NEAR(j.matrix().trace().real(), d, 1e-9);
    EXPECT_LE(max_abs_diff(partial_trace_output(j.matrix()), Matrix::Identity(d, d)), 1e-9);
    EXPECT_TRUE(is_psd(j.matrix()));
  }
}

TEST(Quantum, MatrixJsonRoundTrip) {
  RngStream rng(5, 0);
  const Matrix m = sample_ginibre(3, 4, rng);
  const Matrix back = matrix_from_json(nlohmann::json::parse(matrix_to_json(m).dump()));
  EXPECT_LE(max_abs_diff(m, back), 0.0);
}
