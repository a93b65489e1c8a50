#include "flexcap/kernels.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace flexcap::kernels {

bool openmp_enabled() {
#ifdef _OPENMP
  return true;
#else
  return false;
#endif
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::size_t size_cutoff() { return 384; }

namespace {

bool go_parallel(Exec exec, std::size_t m) {
  switch (exec) {
    case Exec::serial:
      return false;
    case Exec::parallel:
      return openmp_enabled();
    case Exec::automatic:
      return openmp_enabled() && m >= size_cutoff();
  }
  return false;
}

}  // namespace

void ftran_sparse(const double* binv, std::size_t m,
                  std::span<const std::pair<int, double>> col, double* out,
                  Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
  if (go_parallel(exec, m)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* row = binv + i * n;
      double acc = 0.0;
      for (const auto& [j, a] : col) acc += row[j] * a;
      out[i] = acc;
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* row = binv + i * n;
      double acc = 0.0;
      for (const auto& [j, a] : col) acc += row[j] * a;
      out[i] = acc;
    }
  }
}

void ftran_dense(const double* binv, std::size_t m, const double* v,
                 double* out, Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
  if (go_parallel(exec, m)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* row = binv + i * n;
      double acc = 0.0;
      for (std::ptrdiff_t j = 0; j < n; ++j) acc += row[j] * v[j];
      out[i] = acc;
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      const double* row = binv + i * n;
      double acc = 0.0;
      for (std::ptrdiff_t j = 0; j < n; ++j) acc += row[j] * v[j];
      out[i] = acc;
    }
  }
}

void btran(const double* binv, std::size_t m, const double* cb, double* out,
           Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
  // Column-wise dot products keep the per-element summation order identical
  // between modes (a row-axpy formulation would reorder the additions).
  if (go_parallel(exec, m)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::ptrdiff_t i = 0; i < n; ++i) acc += cb[i] * binv[i * n + j];
      out[j] = acc;
    }
  } else {
    for (std::ptrdiff_t j = 0; j < n; ++j) {
      double acc = 0.0;
      for (std::ptrdiff_t i = 0; i < n; ++i) acc += cb[i] * binv[i * n + j];
      out[j] = acc;
    }
  }
}

void pivot_update(double* binv, std::size_t m, const double* y, std::size_t r,
                  Exec exec) {
  const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(m);
  double* pivot_row = binv + static_cast<std::ptrdiff_t>(r) * n;
  const double inv_piv = 1.0 / y[r];
  for (std::ptrdiff_t j = 0; j < n; ++j) pivot_row[j] *= inv_piv;
  if (go_parallel(exec, m)) {
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (i == static_cast<std::ptrdiff_t>(r)) continue;
      const double f = y[i];
      if (f == 0.0) continue;
      double* row = binv + i * n;
      for (std::ptrdiff_t j = 0; j < n; ++j) row[j] -= f * pivot_row[j];
    }
  } else {
    for (std::ptrdiff_t i = 0; i < n; ++i) {
      if (i == static_cast<std::ptrdiff_t>(r)) continue;
      const double f = y[i];
      if (f == 0.0) continue;
      double* row = binv + i * n;
      for (std::ptrdiff_t j = 0; j < n; ++j) row[j] -= f * pivot_row[j];
    }
  }
}

}  // namespace flexcap::kernels
