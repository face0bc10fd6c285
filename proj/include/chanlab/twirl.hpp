#pragma once

// Covariant parameters of a channel and its twirls onto the (U,U), (U,Ubar), (O,O),
// (H,H) and diagonal (DUC, CDUC, DOC) covariant classes.

#include <array>
#include <cmath>
#include <string>

#include "errors.hpp"
#include "quantum.hpp"
#include "sampling.hpp"

namespace chanlab {

// Shared-diagonal matrix triple (A, B, C) of a diagonal-orthogonal covariant map.
struct DOCTriple {
  int d = 0;
  RealMatrix a;
  Matrix b;
  Matrix c;
};

enum class DiagonalClass { duc, cduc, doc };

inline const char* to_string(DiagonalClass c) {
  switch (c) {
    case DiagonalClass::duc: return "DUC";
    case DiagonalClass::cduc: return "CDUC";
    case DiagonalClass::doc: return "DOC";
  }
  return "DOC";
}

inline DiagonalClass diagonal_class_from_string(const std::string& s) {
  if (s == "DUC") return DiagonalClass::duc;
  if (s == "CDUC") return DiagonalClass::cduc;
  if (s == "DOC") return DiagonalClass::doc;
  throw Error(ErrorCode::invalid_parameter, "unknown diagonal class '" + s + "'");
}

struct DOCChannel {
  DOCTriple triple;
  DiagonalClass cls = DiagonalClass::doc;
};

struct CovariantParams {
  int d = 0;
  double lambda1 = 0;
  double lambda2 = 0;
  double lambda3 = 0;

  // (U,U): p id + (1-p) Delta
  double p_uu() const { return (lambda1 - 1) / (d * d - 1.0); }
  // (U,Ubar): q T + (1-q) Delta
  double q_uubar() const { return (lambda2 - 1) / (d * d - 1.0); }
  // (O,O): p' id + q' T + (1-p'-q') Delta
  double p_oo() const { return ((d + 1) * lambda1 - lambda2 - d) / (d * (d + 2.0) * (d - 1)); }
  double q_oo() const { return ((d + 1) * lambda2 - lambda1 - d) / (d * (d + 2.0) * (d - 1)); }
  // (H,H): p Delta + q id + r T + (1-p-q-r) diag
  double p_hh() const { return (d - lambda3) / (d - 1.0); }
  double q_hh() const { return (lambda1 - lambda3) / (d * d - static_cast<double>(d)); }
  double r_hh() const { return (lambda2 - lambda3) / (d * d - static_cast<double>(d)); }
  double w_hh() const { return 1 - p_hh() - q_hh() - r_hh(); }
};

namespace detail {
inline double real_part_checked(cplx v, const char* what) {
  require(std::abs(v.imag()) <= 1e-8 * std::max(1.0, std::abs(v.real())), ErrorCode::non_real,
          std::string(what) + " has imaginary part " + std::to_string(v.imag()));
  return v.real();
}
}  // namespace detail

// d <Omega|J|Omega>
inline double lambda1(const ChoiMatrix& j) {
  cplx v = 0;
  for (int i = 0; i < j.d(); ++i)
    for (int k = 0; k < j.d(); ++k) v += j.at(i, i, k, k);
  return detail::real_part_checked(v, "lambda1");
}

// Tr(J F)
inline double lambda2(const ChoiMatrix& j) {
  cplx v = 0;
  for (int a = 0; a < j.d(); ++a)
    for (int b = 0; b < j.d(); ++b) v += j.at(a, b, b, a);
  return detail::real_part_checked(v, "lambda2");
}

// Tr(J Pi_diag)
inline double lambda3(const ChoiMatrix& j) {
  cplx v = 0;
  for (int i = 0; i < j.d(); ++i) v += j.at(i, i, i, i);
  return detail::real_part_checked(v, "lambda3");
}

inline CovariantParams covariant_params(const ChoiMatrix& j) {
  return {j.d(), lambda1(j), lambda2(j), lambda3(j)};
}

// lambda1 = sum B, lambda2 = sum C, lambda3 = Tr A.
inline CovariantParams covariant_params(const DOCTriple& t) {
  return {t.d, detail::real_part_checked(t.b.sum(), "lambda1"),
          detail::real_part_checked(t.c.sum(), "lambda2"), t.a.trace()};
}

enum class TwirlKind { uu, uubar, oo, hh };

inline const char* to_string(TwirlKind k) {
  switch (k) {
    case TwirlKind::uu: return "UU";
    case TwirlKind::uubar: return "UUbar";
    case TwirlKind::oo: return "OO";
    case TwirlKind::hh: return "HH";
  }
  return "UU";
}

// Choi matrix of the twirled channel, assembled from the parameters.
inline Matrix twirled_choi(TwirlKind kind, const CovariantParams& prm) {
  const int d = prm.d;
  require(d >= 2, ErrorCode::invalid_parameter, "twirls need d >= 2");
  const Matrix id_choi = d * max_entangled_vector(d) * max_entangled_vector(d).adjoint();
  const Matrix flip = flip_operator(d);
  const Matrix delta = Matrix::Identity(d * d, d * d) / static_cast<double>(d);
  switch (kind) {
    case TwirlKind::uu: return prm.p_uu() * id_choi + (1 - prm.p_uu()) * delta;
    case TwirlKind::uubar: return prm.q_uubar() * flip + (1 - prm.q_uubar()) * delta;
    case TwirlKind::oo:
      return prm.p_oo() * id_choi + prm.q_oo() * flip + (1 - prm.p_oo() - prm.q_oo()) * delta;
    case TwirlKind::hh:
      return prm.p_hh() * delta + prm.q_hh() * id_choi + prm.r_hh() * flip +
             prm.w_hh() * diag_projector(d);
  }
  return delta;
}

// The twirled channel as a map, evaluated by its structure formula.
inline ChannelMap twirled_map(TwirlKind kind, const CovariantParams& prm) {
  const int d = prm.d;
  require(d >= 2, ErrorCode::invalid_parameter, "twirls need d >= 2");
  double w_delta = 0, w_id = 0, w_t = 0, w_diag = 0;
  switch (kind) {
    case TwirlKind::uu:
      w_id = prm.p_uu();
      w_delta = 1 - w_id;
      break;
    case TwirlKind::uubar:
      w_t = prm.q_uubar();
      w_delta = 1 - w_t;
      break;
    case TwirlKind::oo:
      w_id = prm.p_oo();
      w_t = prm.q_oo();
      w_delta = 1 - w_id - w_t;
      break;
    case TwirlKind::hh:
      w_delta = prm.p_hh();
      w_id = prm.q_hh();
      w_t = prm.r_hh();
      w_diag = prm.w_hh();
      break;
  }
  return ChannelMap(d, [=](const Matrix& z) -> Matrix {
    Matrix out = w_id * z + w_t * z.transpose();
    out.diagonal().array() += w_delta * z.trace() / static_cast<double>(d);
    out.diagonal() += w_diag * z.diagonal();
    return out;
  });
}

struct TwirlResult {
  CovariantParams params;
  ChannelMap map;
};

inline TwirlResult twirl(TwirlKind kind, const ChoiMatrix& j) {
  const CovariantParams prm = covariant_params(j);
  return {prm, twirled_map(kind, prm)};
}

inline TwirlResult twirl_uu(const ChoiMatrix& j) { return twirl(TwirlKind::uu, j); }
inline TwirlResult twirl_uubar(const ChoiMatrix& j) { return twirl(TwirlKind::uubar, j); }
inline TwirlResult twirl_oo(const ChoiMatrix& j) { return twirl(TwirlKind::oo, j); }
inline TwirlResult twirl_hh(const ChoiMatrix& j) { return twirl(TwirlKind::hh, j); }

// Orthogonal projections spanning the commutant of the hyperoctahedral action on the
// Choi space: |Omega><Omega|, Pi_sym - Pi_diag, Pi_anti, Pi_diag - |Omega><Omega|.
struct HHProjectors {
  int d = 0;
  std::array<Matrix, 4> pi;
  std::array<double, 4> dim{};

  explicit HHProjectors(int dim_d) : d(dim_d) {
    require(d >= 2, ErrorCode::invalid_parameter, "HH projectors need d >= 2");
    const Eigen::Index n = static_cast<Eigen::Index>(d) * d;
    const Vector omega = max_entangled_vector(d);
    const Matrix p0 = omega * omega.adjoint();
    const Matrix flip = flip_operator(d);
    const Matrix id = Matrix::Identity(n, n);
    const Matrix pdiag = diag_projector(d);
    pi[0] = p0;
    pi[1] = (id + flip) / 2.0 - pdiag;
    pi[2] = (id - flip) / 2.0;
    pi[3] = pdiag - p0;
    dim = {1.0, (d * d - d) / 2.0, (d * d - d) / 2.0, d - 1.0};
  }

  // sum_i Tr(Pi_i J) Pi_i / d_i
  Matrix twirl(const Matrix& j) const {
    Matrix out = Matrix::Zero(j.rows(), j.cols());
    for (int i = 0; i < 4; ++i) out += ((pi[i] * j).trace() / dim[i]) * pi[i];
    return out;
  }
};

// A_ij = <ij|J|ij>, B_ij = <ii|J|jj>, C_ij = <ij|J|ji>
inline DOCTriple abc_of_choi(const ChoiMatrix& j) {
  const int d = j.d();
  DOCTriple t{d, RealMatrix(d, d), Matrix(d, d), Matrix(d, d)};
  for (int a = 0; a < d; ++a) {
    for (int b = 0; b < d; ++b) {
      t.a(a, b) = detail::real_part_checked(j.at(a, b, a, b), "A entry");
      t.b(a, b) = j.at(a, a, b, b);
      t.c(a, b) = j.at(a, b, b, a);
    }
  }
  for (int i = 0; i < d; ++i) t.b(i, i) = t.c(i, i) = t.a(i, i);
  return t;
}

// A = sum_k V^k .* conj(V^k), B_ij = sum_k V^k_ii conj(V^k_jj), C = sum_k V^k .* (V^k)*.
inline DOCTriple abc_of_isometry(const HaarIsometry& v) {
  require_isometry(v);
  const int d = v.d();
  DOCTriple t{d, RealMatrix::Zero(d, d), Matrix::Zero(d, d), Matrix::Zero(d, d)};
  Matrix diag(d, v.s());
  Matrix vk(d, d);
  for (int k = 0; k < v.s(); ++k) {
    vk = v.block(k);
    t.a += vk.cwiseAbs2();
    t.c += vk.cwiseProduct(vk.adjoint());
    diag.col(k) = vk.diagonal();
  }
  t.b = diag * diag.adjoint();
  for (int i = 0; i < d; ++i) t.b(i, i) = t.c(i, i) = t.a(i, i);
  return t;
}

// lambda1 = sum_k |Tr V^k|^2, lambda2 = sum_k Tr(V^k conj(V^k)), lambda3 = sum_k sum_i |V^k_ii|^2.
inline CovariantParams covariant_params(const HaarIsometry& v) {
  require_isometry(v);
  double l1 = 0, l3 = 0;
  cplx l2 = 0;
  for (int k = 0; k < v.s(); ++k) {
    const auto vk = v.block(k);
    l1 += std::norm(vk.trace());
    l3 += vk.diagonal().squaredNorm();
    l2 += vk.cwiseProduct(vk.adjoint()).sum();
  }
  return {v.d(), l1, detail::real_part_checked(l2, "lambda2"), l3};
}

// Projection onto the diagonal class: DUC keeps (A, B), CDUC keeps (A, C), DOC keeps all.
inline DOCChannel twirl_diagonal(const DOCTriple& t, DiagonalClass cls) {
  DOCChannel out{t, cls};
  const Matrix diag_a = t.a.diagonal().cast<cplx>().asDiagonal();
  if (cls == DiagonalClass::duc) out.triple.c = diag_a;
  if (cls == DiagonalClass::cduc) out.triple.b = diag_a;
  return out;
}

inline DOCChannel twirl_diagonal(const ChoiMatrix& j, DiagonalClass cls) {
  return twirl_diagonal(abc_of_choi(j), cls);
}

// J = sum_ij A_ij |ij><ij| + sum_{i!=j} B_ij |ii><jj| + sum_{i!=j} C_ij |ij><ji|
inline ChoiMatrix choi_of_triple(const DOCTriple& t) {
  const int d = t.d;
  Matrix j = Matrix::Zero(d * d, d * d);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) {
      j(a * d + b, a * d + b) = t.a(a, b);
      if (a == b) continue;
      j(a * d + a, b * d + b) = t.b(a, b);
      j(a * d + b, b * d + a) = t.c(a, b);
    }
  return ChoiMatrix(std::move(j));
}

}  // namespace chanlab
