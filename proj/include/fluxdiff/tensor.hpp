#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "fluxdiff/matrix.hpp"

namespace fluxdiff {

template <int Dim>
constexpr int ipow(int base) {
  int r = 1;
  for (int i = 0; i < Dim; ++i) r *= base;
  return r;
}

// Node multi-index (first direction fastest) for n1d nodes per direction.
template <int Dim>
std::array<int, Dim> node_multi_index(int node, int n1d) {
  std::array<int, Dim> idx{};
  for (int d = 0; d < Dim; ++d) {
    idx[d] = node % n1d;
    node /= n1d;
  }
  return idx;
}

template <int Dim>
int node_linear_index(const std::array<int, Dim>& idx, int n1d) {
  int node = 0;
  for (int d = Dim - 1; d >= 0; --d) node = node * n1d + idx[d];
  return node;
}

template <int Dim>
int direction_stride(int dir, int n1d) {
  int s = 1;
  for (int d = 0; d < dir; ++d) s *= n1d;
  return s;
}

// Applies the 1D operator A (rows x n_in) along direction `dir` of a nodal
// array whose extent is n_in in `dir`; other directions keep extents.
template <int Dim, typename T>
std::vector<T> apply_along(const Matrix& A, const std::vector<T>& v, int dir, const std::array<int, Dim>& extents) {
  const int n_in = extents[dir];
  const int n_out = static_cast<int>(A.rows());
  std::array<int, Dim> out_ext = extents;
  out_ext[dir] = n_out;
  int inner = 1;
  for (int d = 0; d < dir; ++d) inner *= extents[d];
  int outer = 1;
  for (int d = dir + 1; d < Dim; ++d) outer *= extents[d];
  std::vector<T> out(static_cast<std::size_t>(inner) * n_out * outer, T(0));
  for (int o = 0; o < outer; ++o)
    for (int r = 0; r < n_out; ++r)
      for (int k = 0; k < n_in; ++k) {
        const T a = A(r, k);
        const T* src = v.data() + (static_cast<std::size_t>(o) * n_in + k) * inner;
        T* dst = out.data() + (static_cast<std::size_t>(o) * n_out + r) * inner;
        for (int i = 0; i < inner; ++i) dst[i] += a * src[i];
      }
  return out;
}

template <int Dim, typename T>
std::vector<T> apply_along(const Matrix& A, const std::vector<T>& v, int dir, int n1d) {
  std::array<int, Dim> ext;
  ext.fill(n1d);
  return apply_along<Dim, T>(A, v, dir, ext);
}

// Applies A along every direction (tensor-product interpolation).
template <int Dim>
std::vector<double> apply_tensor(const Matrix& A, std::vector<double> v) {
  std::array<int, Dim> ext;
  ext.fill(static_cast<int>(A.cols()));
  for (int d = 0; d < Dim; ++d) {
    v = apply_along<Dim>(A, v, d, ext);
    ext[d] = static_cast<int>(A.rows());
  }
  return v;
}

}  // namespace fluxdiff
