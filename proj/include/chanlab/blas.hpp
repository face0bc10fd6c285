#pragma once

// Optional OpenBLAS backing for the dense kernels that dominate large-s sampling.

#include <Eigen/Dense>

#ifdef CHANLAB_HAVE_OPENBLAS
#include <cblas.h>
extern "C" void openblas_set_num_threads(int);
#endif

namespace chanlab {

inline constexpr bool kHaveBlas =
#ifdef CHANLAB_HAVE_OPENBLAS
    true;
#else
    false;
#endif

// Sampling parallelizes over samples, so the BLAS itself stays single threaded.
inline void pin_blas_threads() {
#ifdef CHANLAB_HAVE_OPENBLAS
  openblas_set_num_threads(1);
#endif
}

// Lower triangle of G* G.
inline Eigen::MatrixXcd gram_lower(const Eigen::MatrixXcd& g) {
  const Eigen::Index n = g.cols();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
#ifdef CHANLAB_HAVE_OPENBLAS
  cblas_zherk(CblasColMajor, CblasLower, CblasConjTrans, static_cast<int>(n),
              static_cast<int>(g.rows()), 1.0, g.data(), static_cast<int>(g.outerStride()), 0.0,
              h.data(), static_cast<int>(n));
#else
  h.selfadjointView<Eigen::Lower>().rankUpdate(g.adjoint());
#endif
  return h;
}

}  // namespace chanlab
