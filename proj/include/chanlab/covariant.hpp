#pragma once

// Structured covariant channels: validity, application, PPT / EB / realignment tests,
// DOC composition and the two-dimensional block certificate for entanglement breaking.
//
// Inequalities are tested as LHS >= RHS - tol * (1 + |LHS| + |RHS|).

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "errors.hpp"
#include "quantum.hpp"
#include "twirl.hpp"

namespace chanlab {

inline constexpr double kInequalityTol = 1e-9;

inline bool holds(double lhs, double rhs, double tol = kInequalityTol) {
  return lhs >= rhs - tol * (1 + std::abs(lhs) + std::abs(rhs));
}

// Weights of p Delta + q id + r T + (1-p-q-r) diag.
struct HHChannel {
  int d = 0;
  double p = 0;
  double q = 0;
  double r = 0;

  double w_diag() const { return 1 - p - q - r; }

  static HHChannel from_params(const CovariantParams& prm) {
    return {prm.d, prm.p_hh(), prm.q_hh(), prm.r_hh()};
  }

  Matrix choi() const {
    const Vector om = max_entangled_vector(d);
    return p * Matrix::Identity(d * d, d * d) / static_cast<double>(d) +
           q * d * om * om.adjoint() + r * flip_operator(d) + w_diag() * diag_projector(d);
  }

  // Eigenvalues of the Choi matrix on Pi_0..Pi_3.
  std::array<double, 4> projector_weights() const {
    const double base = p / d;
    return {base + q * d + r + w_diag(), base + r, base - r, base + r + w_diag()};
  }

  bool is_cp(double tol = kInequalityTol) const {
    for (double w : projector_weights())
      if (!holds(w, 0.0, tol)) return false;
    return true;
  }
};

struct ValidityReport {
  double min_a = 0;                 // min A_ij
  double min_eig_b = 0;             // lambda_min(B)
  double min_c_margin = 0;          // min_{i!=j} A_ij A_ji - |C_ij|^2
  double max_col_dev = 0;           // max_j |sum_i A_ij - 1|
  double max_diag_dev = 0;          // max_i |B_ii - A_ii|, |C_ii - A_ii|
  double c_hermitian_defect = 0;
  bool cp = false;
  bool tp = false;
  bool shared_diagonal = false;
  bool class_structure = false;

  bool ok() const { return cp && tp && shared_diagonal && class_structure; }
};

inline void require_triple_shape(const DOCTriple& t) {
  require(t.d >= 1 && t.a.rows() == t.d && t.a.cols() == t.d && t.b.rows() == t.d &&
              t.b.cols() == t.d && t.c.rows() == t.d && t.c.cols() == t.d,
          ErrorCode::dimension_mismatch, "triple matrices must be d x d");
}

inline ValidityReport validate(const DOCChannel& ch, double tol = kInequalityTol) {
  const DOCTriple& t = ch.triple;
  require_triple_shape(t);
  const int d = t.d;
  ValidityReport rep;
  rep.min_a = t.a.minCoeff();
  rep.c_hermitian_defect = hermitian_defect(t.c);
  const Matrix bh = (t.b + t.b.adjoint()) / 2.0;
  rep.min_eig_b = Eigen::SelfAdjointEigenSolver<Matrix>(bh, Eigen::EigenvaluesOnly)
                      .eigenvalues()
                      .minCoeff();
  rep.min_c_margin = std::numeric_limits<double>::infinity();
  bool c_ok = true;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const double lhs = t.a(i, j) * t.a(j, i);
      const double rhs = std::norm(t.c(i, j));
      rep.min_c_margin = std::min(rep.min_c_margin, lhs - rhs);
      c_ok = c_ok && holds(lhs, rhs, tol);
    }
  if (d == 1) rep.min_c_margin = 0;
  for (int j = 0; j < d; ++j) rep.max_col_dev = std::max(rep.max_col_dev, std::abs(t.a.col(j).sum() - 1));
  for (int i = 0; i < d; ++i)
    rep.max_diag_dev = std::max({rep.max_diag_dev, std::abs(t.b(i, i) - t.a(i, i)),
                                 std::abs(t.c(i, i) - t.a(i, i))});
  const double scale = std::max(1.0, t.a.cwiseAbs().maxCoeff());
  rep.shared_diagonal = rep.max_diag_dev <= 1e-10 * scale;
  rep.cp = holds(rep.min_a, 0.0, tol) && holds(rep.min_eig_b, 0.0, tol) && c_ok &&
           hermitian_defect(t.b) <= 1e-10 * scale && rep.c_hermitian_defect <= 1e-10 * scale;
  rep.tp = rep.max_col_dev <= 1e-10 * std::max(1.0, static_cast<double>(d));
  switch (ch.cls) {
    case DiagonalClass::duc: rep.class_structure = off_diagonal(t.c).cwiseAbs().maxCoeff() <= 1e-12; break;
    case DiagonalClass::cduc: rep.class_structure = off_diagonal(t.b).cwiseAbs().maxCoeff() <= 1e-12; break;
    case DiagonalClass::doc: rep.class_structure = true; break;
  }
  return rep;
}

inline void require_valid(const DOCChannel& ch, const char* what) {
  const ValidityReport rep = validate(ch);
  require(rep.shared_diagonal && rep.class_structure, ErrorCode::invalid_triple,
          std::string(what) + ": malformed triple");
}

// diag(A |diag Z>) + B.o Z + C.o Z^T, with B.o, C.o the off-diagonal parts.
inline Matrix apply_doc(const DOCTriple& t, const Matrix& z) {
  require_triple_shape(t);
  require(z.rows() == t.d && z.cols() == t.d, ErrorCode::dimension_mismatch,
          "input is not " + std::to_string(t.d) + "x" + std::to_string(t.d));
  Matrix out = off_diagonal(t.b).cwiseProduct(z) + off_diagonal(t.c).cwiseProduct(z.transpose());
  out.diagonal() = t.a.cast<cplx>() * z.diagonal();
  return out;
}

inline Matrix apply_doc(const DOCChannel& ch, const Matrix& z) { return apply_doc(ch.triple, z); }

inline ChannelMap doc_map(const DOCTriple& t) {
  return ChannelMap(t.d, [t](const Matrix& z) { return apply_doc(t, z); });
}

// The triple of the composition with the transpose: (A, B, C) -> (A, C, B).
inline DOCTriple compose_transpose(const DOCTriple& t) { return {t.d, t.a, t.c, t.b}; }

struct PptResult {
  bool ppt = false;
  double min_eig_c = 0;      // lambda_min(C); +inf when not tested (DUC)
  double min_pair_margin = 0;  // min_{i!=j} A_ij A_ji - |B_ij|^2; +inf when not tested (CDUC)
};

inline PptResult ppt_test(const DOCChannel& ch, double tol = kInequalityTol) {
  const DOCTriple& t = ch.triple;
  require_triple_shape(t);
  const double inf = std::numeric_limits<double>::infinity();
  PptResult res{true, inf, inf};
  if (ch.cls != DiagonalClass::duc) {
    const Matrix ch_h = (t.c + t.c.adjoint()) / 2.0;
    res.min_eig_c = Eigen::SelfAdjointEigenSolver<Matrix>(ch_h, Eigen::EigenvaluesOnly)
                        .eigenvalues()
                        .minCoeff();
    res.ppt = res.ppt && holds(res.min_eig_c, 0.0, tol);
  }
  if (ch.cls != DiagonalClass::cduc) {
    for (int i = 0; i < t.d; ++i)
      for (int j = 0; j < t.d; ++j) {
        if (i == j) continue;
        const double lhs = t.a(i, j) * t.a(j, i);
        const double rhs = std::norm(t.b(i, j));
        res.min_pair_margin = std::min(res.min_pair_margin, lhs - rhs);
        res.ppt = res.ppt && holds(lhs, rhs, tol);
      }
  }
  return res;
}

struct InequalityResult {
  bool pass = false;
  double margin = 0;  // min over the inequalities of LHS - RHS
};

namespace detail {
struct InequalityAccumulator {
  double tol;
  InequalityResult res{true, std::numeric_limits<double>::infinity()};
  void operator()(double lhs, double rhs) {
    res.margin = std::min(res.margin, lhs - rhs);
    res.pass = res.pass && holds(lhs, rhs, tol);
  }
};
}  // namespace detail

// (U,U) twirl is PPT iff EB iff 0 <= lambda1 <= d.
inline InequalityResult ppt_eb_test_uu(const CovariantParams& prm, double tol = kInequalityTol) {
  detail::InequalityAccumulator acc{tol};
  acc(prm.lambda1, 0);
  acc(prm.d, prm.lambda1);
  return acc.res;
}

// (U,Ubar) twirl is PPT iff EB iff 0 <= lambda2 <= d.
inline InequalityResult ppt_eb_test_uubar(const CovariantParams& prm, double tol = kInequalityTol) {
  detail::InequalityAccumulator acc{tol};
  acc(prm.lambda2, 0);
  acc(prm.d, prm.lambda2);
  return acc.res;
}

// (O,O) twirl is PPT iff EB iff 0 <= lambda1, lambda2 <= d.
inline InequalityResult ppt_eb_test_oo(const CovariantParams& prm, double tol = kInequalityTol) {
  detail::InequalityAccumulator acc{tol};
  for (double l : {prm.lambda1, prm.lambda2}) {
    acc(l, 0);
    acc(prm.d, l);
  }
  return acc.res;
}

// (H,H) twirl is PPT iff EB iff 0 <= lambda3 <= d, 0 <= lambda1,2 <= d lambda3 and
// 2 lambda3 - d <= lambda1,2 <= d.
inline InequalityResult ppt_eb_test_hh(const CovariantParams& prm, double tol = kInequalityTol) {
  detail::InequalityAccumulator acc{tol};
  const double d = prm.d;
  acc(prm.lambda3, 0);
  acc(d, prm.lambda3);
  for (double l : {prm.lambda1, prm.lambda2}) {
    acc(l, 0);
    acc(d * prm.lambda3, l);
    acc(l, 2 * prm.lambda3 - d);
    acc(d, l);
  }
  return acc.res;
}

inline InequalityResult ppt_eb_test(TwirlKind kind, const CovariantParams& prm,
                                    double tol = kInequalityTol) {
  switch (kind) {
    case TwirlKind::uu: return ppt_eb_test_uu(prm, tol);
    case TwirlKind::uubar: return ppt_eb_test_uubar(prm, tol);
    case TwirlKind::oo: return ppt_eb_test_oo(prm, tol);
    case TwirlKind::hh: return ppt_eb_test_hh(prm, tol);
  }
  return {};
}

struct RealignmentResult {
  bool pass = false;
  double slack = 0;  // sum A - ||A||_1 - sum_{i!=j} max(|B_ij|, |C_ij|)
};

// Necessary for EB; a negative slack refutes it.
inline RealignmentResult realignment_test(const DOCChannel& ch, double tol = kInequalityTol) {
  const DOCTriple& t = ch.triple;
  require_triple_shape(t);
  const double lhs = t.a.sum() - nuclear_norm(t.a);
  double rhs = 0;
  for (int i = 0; i < t.d; ++i)
    for (int j = 0; j < t.d; ++j)
      if (i != j) rhs += std::max(std::abs(t.b(i, j)), std::abs(t.c(i, j)));
  return {holds(lhs, rhs, tol), lhs - rhs};
}

enum class EBVerdict { certified, refuted, unknown };

inline const char* to_string(EBVerdict v) {
  switch (v) {
    case EBVerdict::certified: return "Certified";
    case EBVerdict::refuted: return "Refuted";
    case EBVerdict::unknown: return "Unknown";
  }
  return "Unknown";
}

// Data of the 2 x 2 block triple on coordinates (i, j).
struct PairBlock {
  int i = 0;
  int j = 0;
  double diag_i = 0;  // share of A_ii given to this block
  double diag_j = 0;
  double margin = 0;  // min over the four block conditions of LHS - RHS
  std::string failing;
};

struct EBCertificate {
  EBVerdict verdict = EBVerdict::unknown;
  double worst_margin = 0;
  std::optional<PairBlock> worst_pair;
  std::vector<PairBlock> blocks;  // filled when keep_blocks is requested
  PptResult ppt;
  RealignmentResult realignment;
  std::string reason;
};

// Default split: every pair block receives A_ii/(d-1) of each diagonal entry.
inline RealMatrix equal_diagonal_split(const DOCTriple& t) {
  RealMatrix s(t.d, t.d);
  for (int i = 0; i < t.d; ++i) s.row(i).setConstant(t.a(i, i) / (t.d - 1));
  s.diagonal().setZero();
  return s;
}

// Decomposes the triple into 2 x 2 blocks with diagonal shares split(i, j) of A_ii and
// certifies EB when every block is CP and PPT:
//   s_ij s_ji >= |B_ij|^2, s_ij s_ji >= |C_ij|^2, A_ij A_ji >= |B_ij|^2, A_ij A_ji >= |C_ij|^2.
// Rows of the split must sum to A_ii over j != i.
inline EBCertificate eb_certificate(const DOCChannel& ch,
                                    const std::optional<RealMatrix>& split = std::nullopt,
                                    double tol = kInequalityTol, bool keep_blocks = false) {
  const DOCTriple& t = ch.triple;
  require_triple_shape(t);
  require(t.d >= 2, ErrorCode::invalid_parameter, "EB certificate needs d >= 2");
  const int d = t.d;
  const RealMatrix s = split ? *split : equal_diagonal_split(t);
  require(s.rows() == d && s.cols() == d, ErrorCode::dimension_mismatch, "split must be d x d");
  for (int i = 0; i < d; ++i) {
    const double row = s.row(i).sum() - s(i, i);
    require(std::abs(row - t.a(i, i)) <= 1e-10 * std::max(1.0, std::abs(t.a(i, i))),
            ErrorCode::invalid_parameter, "split rows must sum to the diagonal of A");
  }

  EBCertificate cert;
  cert.ppt = ppt_test(ch, tol);
  cert.realignment = realignment_test(ch, tol);
  cert.worst_margin = std::numeric_limits<double>::infinity();
  bool all = true;
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      PairBlock blk{i, j, s(i, j), s(j, i), std::numeric_limits<double>::infinity(), ""};
      const double diag_prod = s(i, j) * s(j, i);
      const double off_prod = t.a(i, j) * t.a(j, i);
      const double b2 = std::norm(t.b(i, j));
      const double c2 = std::norm(t.c(i, j));
      bool ok = holds(s(i, j), 0.0, tol) && holds(s(j, i), 0.0, tol);
      if (!ok) blk.failing = "negative diagonal share";
      const struct {
        double lhs, rhs;
        const char* name;
      } conds[] = {{diag_prod, b2, "diagonal shares vs |B_ij|^2"},
                   {diag_prod, c2, "diagonal shares vs |C_ij|^2"},
                   {off_prod, b2, "A_ij A_ji vs |B_ij|^2"},
                   {off_prod, c2, "A_ij A_ji vs |C_ij|^2"}};
      for (const auto& c : conds) {
        if (c.lhs - c.rhs < blk.margin) {
          blk.margin = c.lhs - c.rhs;
          if (ok) blk.failing = c.name;
        }
        if (!holds(c.lhs, c.rhs, tol)) ok = false;
      }
      if (ok) blk.failing.clear();
      all = all && ok;
      if (blk.margin < cert.worst_margin) {
        cert.worst_margin = blk.margin;
        cert.worst_pair = blk;
      }
      if (keep_blocks) cert.blocks.push_back(std::move(blk));
    }

  if (all) {
    cert.verdict = EBVerdict::certified;
  } else if (!cert.ppt.ppt) {
    cert.verdict = EBVerdict::refuted;
    cert.reason = "not PPT";
  } else if (!cert.realignment.pass) {
    cert.verdict = EBVerdict::refuted;
    cert.reason = "realignment criterion violated";
  } else {
    cert.verdict = EBVerdict::unknown;
    cert.reason = "block condition failed: " + cert.worst_pair->failing;
  }
  return cert;
}

// (A, B, C) o (D, E, F) = (AD, diag(AD) + B.o E.o + C.o F.o^T, diag(AD) + B.o F.o + C.o E.o^T)
inline DOCTriple compose_doc(const DOCTriple& t1, const DOCTriple& t2) {
  require_triple_shape(t1);
  require_triple_shape(t2);
  require(t1.d == t2.d, ErrorCode::dimension_mismatch, "composed triples differ in d");
  DOCTriple out;
  out.d = t1.d;
  out.a = t1.a * t2.a;
  const Matrix b1 = off_diagonal(t1.b), c1 = off_diagonal(t1.c);
  const Matrix e = off_diagonal(t2.b), f = off_diagonal(t2.c);
  out.b = b1.cwiseProduct(e) + c1.cwiseProduct(f.transpose());
  out.c = b1.cwiseProduct(f) + c1.cwiseProduct(e.transpose());
  out.b.diagonal() = out.a.diagonal().cast<cplx>();
  out.c.diagonal() = out.a.diagonal().cast<cplx>();
  return out;
}

// Class of a composition: DOC unless both factors share a diagonal class.
inline DiagonalClass composed_class(DiagonalClass a, DiagonalClass b) {
  if (a == DiagonalClass::doc || b == DiagonalClass::doc) return DiagonalClass::doc;
  return a == b ? DiagonalClass::duc : DiagonalClass::cduc;
}

inline DOCChannel compose_doc(const DOCChannel& c1, const DOCChannel& c2) {
  return {compose_doc(c1.triple, c2.triple), composed_class(c1.cls, c2.cls)};
}

// S_ij = A_ii D_ii/(d-1) + A_ij D_ji: the diagonal shares of the composition's blocks.
inline RealMatrix composition_split(const DOCTriple& t1, const DOCTriple& t2) {
  require(t1.d == t2.d, ErrorCode::dimension_mismatch, "composed triples differ in d");
  const int d = t1.d;
  RealMatrix s = RealMatrix::Zero(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      if (i != j) s(i, j) = t1.a(i, i) * t2.a(i, i) / (d - 1) + t1.a(i, j) * t2.a(j, i);
  return s;
}

struct Ppt2Result {
  bool pass = false;
  double margin1 = 0;  // worst LHS - RHS of the diagonal-share condition
  double margin2 = 0;  // worst LHS - RHS of the (AD)_ij (AD)_ji condition
};

// Sufficient conditions for the composition to be EB with factor width 2.
inline Ppt2Result ppt2_conditions(const DOCTriple& t1, const DOCTriple& t2,
                                  double tol = kInequalityTol) {
  require_triple_shape(t1);
  require_triple_shape(t2);
  require(t1.d == t2.d, ErrorCode::dimension_mismatch, "composed triples differ in d");
  const int d = t1.d;
  const RealMatrix ad = t1.a * t2.a;
  const RealMatrix s = composition_split(t1, t2);
  const double inf = std::numeric_limits<double>::infinity();
  Ppt2Result res{true, inf, inf};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      if (i == j) continue;
      const cplx be = t1.b(i, j) * t2.b(i, j) + t1.c(i, j) * std::conj(t2.c(i, j));
      const cplx bf = t1.b(i, j) * t2.c(i, j) + t1.c(i, j) * std::conj(t2.b(i, j));
      const double rhs = std::max(std::norm(be), std::norm(bf));
      const double l1 = s(i, j) * s(j, i);
      const double l2 = ad(i, j) * ad(j, i);
      res.margin1 = std::min(res.margin1, l1 - rhs);
      res.margin2 = std::min(res.margin2, l2 - rhs);
      res.pass = res.pass && holds(l1, rhs, tol) && holds(l2, rhs, tol);
    }
  return res;
}

// Certificate of Phi1 o Phi2 using the composition's own diagonal split.
inline EBCertificate certify_composition(const DOCChannel& c1, const DOCChannel& c2,
                                         double tol = kInequalityTol) {
  return eb_certificate(compose_doc(c1, c2), composition_split(c1.triple, c2.triple), tol);
}

// Random diagonal-covariant channel: the class twirl of a Haar Stinespring channel.
inline DOCChannel sample_diagonal_channel(int d, int s, DiagonalClass cls, RngStream& rng) {
  return twirl_diagonal(abc_of_isometry(sample_haar_isometry(d, s, rng)), cls);
}

// {d, A, B_re, B_im, C_re, C_im, class}
inline nlohmann::json triple_to_json(const DOCChannel& ch) {
  const DOCTriple& t = ch.triple;
  auto real_rows = [](const RealMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
      rows.push_back(std::move(row));
    }
    return rows;
  };
  return {{"d", t.d},
          {"A", real_rows(t.a)},
          {"B_re", real_rows(t.b.real())},
          {"B_im", real_rows(t.b.imag())},
          {"C_re", real_rows(t.c.real())},
          {"C_im", real_rows(t.c.imag())},
          {"class", to_string(ch.cls)}};
}

inline DOCChannel triple_from_json(const nlohmann::json& j) {
  try {
    const int d = j.at("d").get<int>();
    require(d >= 1, ErrorCode::invalid_parameter, "triple dimension must be positive");
    auto read = [d](const nlohmann::json& rows) {
      require(rows.is_array() && static_cast<int>(rows.size()) == d, ErrorCode::dimension_mismatch,
              "triple matrix must have d rows");
      RealMatrix m(d, d);
      for (int r = 0; r < d; ++r) {
        require(static_cast<int>(rows[r].size()) == d, ErrorCode::dimension_mismatch,
                "triple matrix must have d columns");
        for (int c = 0; c < d; ++c) m(r, c) = rows[r][c].get<double>();
      }
      return m;
    };
    auto read_or_zero = [&](const char* key) {
      return j.contains(key) ? read(j.at(key)) : RealMatrix(RealMatrix::Zero(d, d));
    };
    DOCChannel ch;
    ch.triple.d = d;
    ch.triple.a = read(j.at("A"));
    ch.triple.b = read(j.at("B_re")).cast<cplx>() + cplx(0, 1) * read_or_zero("B_im").cast<cplx>();
    ch.triple.c = read(j.at("C_re")).cast<cplx>() + cplx(0, 1) * read_or_zero("C_im").cast<cplx>();
    ch.cls = diagonal_class_from_string(j.value("class", std::string("DOC")));
    return ch;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::invalid_parameter, std::string("triple JSON: ") + e.what());
  }
}

}  // namespace chanlab
