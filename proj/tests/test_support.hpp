#pragma once

#include <cstdint>
#include <vector>

#include "coiso/matrix.hpp"
#include "coiso/symplectic.hpp"
#include "coiso/tensors.hpp"

namespace coiso_test {

// Deterministic value streams so every test is reproducible byte for byte.
inline std::uint64_t lcg_step(std::uint64_t& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return s >> 33;
}

inline coiso::Rat small_rat(std::uint64_t& s) {
  const long num = long(lcg_step(s) % 9) - 4;
  const long den = long(lcg_step(s) % 3) + 1;
  return coiso::Rat(num, den);
}

inline std::vector<coiso::Rat> fixed_vector(int d, std::uint64_t seed) {
  std::vector<coiso::Rat> v(d);
  for (auto& x : v) x = small_rat(seed);
  return v;
}

inline coiso::Matrix<coiso::Rat> fixed_matrix(int rows, int cols, std::uint64_t seed) {
  coiso::Matrix<coiso::Rat> m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = small_rat(seed);
  return m;
}

inline coiso::SymTensor<coiso::Rat> fixed_sym_tensor(int k, int d, int w,
                                                     std::uint64_t seed) {
  coiso::SymTensor<coiso::Rat> t(k, d, w);
  for (int s = 0; s < t.slots(); ++s)
    for (int c = 0; c < w; ++c) t.entry(s, c) = small_rat(seed);
  return t;
}

// Family A_1, ..., A_s for tau: order-k symmetric tensors R^d -> R^{2n}
// with A_1 injective (retries seeds until the rank condition holds).
inline std::vector<coiso::SymTensor<coiso::Rat>> fixed_tau_family(
    const coiso::SymplecticSpace& sp, int s, int d, std::uint64_t seed) {
  std::vector<coiso::SymTensor<coiso::Rat>> fam;
  for (int k = 1; k <= s; ++k) fam.push_back(fixed_sym_tensor(k, d, sp.dim(), seed + k));
  while (coiso::rank(fam[0].as_matrix()) != d)
    fam[0] = fixed_sym_tensor(1, d, sp.dim(), ++seed);
  return fam;
}

inline coiso::Matrix<double> to_double(const coiso::Matrix<coiso::Rat>& m) {
  coiso::Matrix<double> out(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).to_double();
  return out;
}

}  // namespace coiso_test
