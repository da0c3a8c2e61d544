#pragma once

// 50-digit evaluation of the certificate formulas, written from the formulas
// alone and sharing no code with the library.

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <cstddef>
#include <cstdint>
#include <vector>

namespace oracle {

using Real = boost::multiprecision::cpp_bin_float_50;

inline Real sum_sq(const std::vector<std::uint64_t>& counts) {
  Real n = 0;
  for (auto c : counts) n += c;
  Real s = 0;
  for (auto c : counts) s += (Real(c) / n) * (Real(c) / n);
  return s;
}

inline Real uhat(const std::vector<std::uint64_t>& counts, Real delta, Real gamma) {
  Real n = 0;
  for (auto c : counts) n += c;
  const Real K = counts.size();
  return gamma / (2 * n) + gamma * gamma / 2 * sum_sq(counts) +
         gamma * gamma * sqrt(Real(2) / n * log(2 * K / delta));
}

inline Real g(std::size_t t_size, std::size_t K, std::uint64_t n, Real delta, Real c_sup) {
  const Real L = log(2 * Real(K) / delta);
  const Real x = Real(t_size) * L / Real(n);
  return c_sup * (sqrt(Real(2)) + 1) * sqrt(x) + 2 * c_sup * x;
}

inline Real alpha_max(std::uint64_t n, std::size_t K, Real gamma) {
  const Real N = n;
  return gamma * N * (Real(K) + gamma * N) / (Real(K) * (4 * N - 3));
}

inline Real mean(const std::vector<double>& losses) {
  Real s = 0;
  for (double l : losses) s += l;
  return s / Real(losses.size());
}

inline std::size_t occupied(const std::vector<std::uint64_t>& counts) {
  std::size_t t = 0;
  for (auto c : counts) t += c > 0 ? 1 : 0;
  return t;
}

/// F(S) + C sqrt(u_hat alpha ln gamma) + g(delta / 2).
inline Real bound(const std::vector<double>& losses, const std::vector<std::uint64_t>& counts,
                  Real delta, Real alpha, Real gamma, Real c_sup) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  return mean(losses) + c_sup * sqrt(uhat(counts, delta, gamma) * alpha * log(gamma)) +
         g(occupied(counts), counts.size(), n, delta / 2, c_sup);
}

inline Real known_mass_u(const std::vector<double>& p, std::uint64_t n, Real gamma) {
  Real u = 0;
  for (double pi : p) {
    const Real a = gamma * Real(n) * Real(pi);
    u += a + a * a;
  }
  return u;
}

/// F(S) + C sqrt(u / (2 n^2) ln(1/delta1)) + g(delta2).
inline Real known_mass_bound(const std::vector<double>& losses, const std::vector<std::uint64_t>& counts,
                             const std::vector<double>& p, Real delta1, Real delta2, Real gamma,
                             Real c_sup) {
  std::uint64_t n = 0;
  for (auto c : counts) n += c;
  const Real N = n;
  return mean(losses) + c_sup * sqrt(known_mass_u(p, n, gamma) / (2 * N * N) * log(1 / delta1)) +
         g(occupied(counts), counts.size(), n, delta2, c_sup);
}

inline double rel_err(double got, const Real& want) {
  if (want == 0) return got == 0 ? 0.0 : 1.0;
  return static_cast<double>(abs((Real(got) - want) / want));
}

}  // namespace oracle
