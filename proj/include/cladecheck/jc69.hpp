#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Core>

namespace cladecheck {

enum class Nucleotide : std::uint8_t { A = 0, C = 1, G = 2, T = 3 };

inline constexpr int kStates = 4;

template <typename Scalar>
using StateMatrix = Eigen::Matrix<Scalar, kStates, kStates>;

template <typename Scalar>
using StateVector = Eigen::Matrix<Scalar, kStates, 1>;

namespace jc69 {

namespace detail {
template <typename Scalar>
void require_length(Scalar v, const char* what) {
  using std::isfinite;
  if (!isfinite(v) || v < Scalar(0)) {
    throw std::domain_error(std::string(what) + " must be finite and non-negative");
  }
}
}  // namespace detail

/// Equilibrium frequency of every base.
template <typename Scalar = double>
constexpr Scalar equilibrium() {
  return Scalar(0.25);
}

/// Probability of no net change along a branch of length v.
template <typename Scalar>
Scalar same_prob(Scalar v) {
  using std::exp;
  return Scalar(0.25) + Scalar(0.75) * exp(Scalar(-4) * v / Scalar(3));
}

/// Probability of ending in one specific other base.
template <typename Scalar>
Scalar change_prob(Scalar v) {
  using std::exp;
  return Scalar(0.25) - Scalar(0.25) * exp(Scalar(-4) * v / Scalar(3));
}

template <typename Scalar>
Scalar transition_prob(Nucleotide from, Nucleotide to, Scalar v) {
  detail::require_length(v, "branch length");
  return from == to ? same_prob(v) : change_prob(v);
}

/// Symmetric, row-stochastic 4x4 matrix P(v).
template <typename Scalar>
StateMatrix<Scalar> transition_matrix(Scalar v) {
  detail::require_length(v, "branch length");
  const Scalar diag = same_prob(v);
  const Scalar off = change_prob(v);
  StateMatrix<Scalar> p = StateMatrix<Scalar>::Constant(off);
  p.diagonal().setConstant(diag);
  return p;
}

/// 3/4 (1 - exp(-4d/3)): chance that the two ends of a path of length d
/// carry different bases at one site.
template <typename Scalar>
Scalar expected_mismatch(Scalar d) {
  detail::require_length(d, "distance");
  using std::expm1;
  return Scalar(-0.75) * expm1(Scalar(-4) * d / Scalar(3));
}

/// Inverse of expected_mismatch. Throws std::domain_error for p >= 3/4,
/// where the distance is undefined.
template <typename Scalar>
Scalar jc_distance(Scalar p) {
  using std::isfinite;
  using std::log1p;
  if (!isfinite(p) || p < Scalar(0)) throw std::domain_error("mismatch fraction must be >= 0");
  if (p >= Scalar(0.75)) throw std::domain_error("mismatch fraction >= 0.75: distance undefined");
  return Scalar(-0.75) * log1p(Scalar(-4) * p / Scalar(3));
}

}  // namespace jc69
}  // namespace cladecheck
