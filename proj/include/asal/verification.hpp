#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "asal/problems/qp.hpp"

namespace asal {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Seeded random strongly convex QP instance (n in [2, max_dim], m in
/// [1, max_constraints]) with a full-row-rank constraint matrix.
QpProblem random_qp_instance(std::uint64_t seed, int max_dim = 10, int max_constraints = 5,
                             double noise_std = 0.0);

/// Structural identity and inequality suites, checked numerically on random
/// strongly convex QP instances where every quantity has a closed form:
///   moreau_identity        grad q_alpha(lambda) = c(x*) against a dual-side
///                          prox solve
///   envelope_lipschitz     ||grad q_alpha(u) - grad q_alpha(v)|| <=
///                          (1/alpha) ||u - v||
///   dual_strong_convexity  gradient monotonicity with mu_q = sigma/(mu + L)
///   function_gap           ||c(x*) - c(x)||^2 <= (2/alpha)(L(x) - L(x*))
///   reduced_gradient_gap   ||R(x)||^2 <= (2/eta)(L(x) - L(x*))
///   condition_II_implies_I, condition_III_implies_I with the parameter
///                          scalings theta~ <= mu theta_e / (2||A||),
///                          tau~ <= mu^2 tau / (4||A||^2)
std::vector<CheckResult> run_qp_verification(std::uint64_t seed);

/// Spectral norm of a (generally rectangular) matrix.
double spectral_norm(const Matrix& m);

}  // namespace asal
