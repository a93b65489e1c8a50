#pragma once

#include <cstddef>
#include <span>
#include <utility>

// Dense tableau kernels used by the simplex solver. Every kernel has a
// serial and an OpenMP variant computing the same expression per element,
// so results are bit-identical regardless of Exec mode or thread count.

namespace flexcap::kernels {

enum class Exec {
  serial,     // plain loops, reference implementation
  parallel,   // OpenMP when built with it, else falls back to serial
  automatic,  // parallel above size_cutoff(), serial below
};

bool openmp_enabled();
int max_threads();

// Problem dimension below which `automatic` stays serial. Parallel regions
// cost a few microseconds each; tiny tableaus pivot faster on one core
// (see flexcap_bench for the crossover).
std::size_t size_cutoff();

// out[i] = sum_k binv[i*m + col[k].first] * col[k].second
void ftran_sparse(const double* binv, std::size_t m,
                  std::span<const std::pair<int, double>> col, double* out,
                  Exec exec);

// out[i] = sum_j binv[i*m + j] * v[j]
void ftran_dense(const double* binv, std::size_t m, const double* v,
                 double* out, Exec exec);

// out[j] = sum_i cb[i] * binv[i*m + j]  (row-vector times matrix)
void btran(const double* binv, std::size_t m, const double* cb, double* out,
           Exec exec);

// Pivot on position r with column y = Binv * A_q:
//   binv[r,:] /= y[r];  binv[i,:] -= y[i] * binv[r,:]  (i != r)
void pivot_update(double* binv, std::size_t m, const double* y, std::size_t r,
                  Exec exec);

}  // namespace flexcap::kernels
