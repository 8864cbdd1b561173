#pragma once

#include <optional>
#include <variant>

#include "polychain/polyakov_model.hpp"

namespace polychain {

struct NoCooling {};
struct GradientDescent {
  double alpha = 1.0;  // step factor; the applied step length is alpha * dt
  int iters = 5;
};
struct Optimal {};

/// Tagged choice of cooling applied after every Langevin step.
using CoolingStrategy = std::variant<NoCooling, GradientDescent, Optimal>;

struct CoolingOutcome {
  LinkConfig cooled;
  std::optional<Spectrum> spectrum;  // loop-product spectrum (Optimal only)
  double delta_f_before = 0;
  double delta_f_after = 0;
};

/**
 * @brief Closed-form norm-minimizing gauge transform.
 *
 * Diagonalizes the loop product U_N U_1 ... U_{N-1} = Q diag(mu) Q^-1 and
 * replaces the configuration by its cooled representative: links 1..N-1
 * become diag(|mu_j|^{1/N}) and the last link diag(mu_j |mu_j|^{-(N-1)/N}),
 * so the whole modulus budget is spread evenly and the phases ride on link N.
 * The cooled squared norm is N * sum_j |mu_j|^{2/N}, the minimum over the
 * gauge orbit. Loop eigenvalues are preserved; only moduli are rooted, so no
 * branch ambiguity arises.
 */
CoolingOutcome cool_optimal(const LinkConfig& config);

/**
 * @brief Gradient of the squared configuration norm along the imaginary
 * gauge directions V_{ak} = i Y_{ak}.
 *
 * Entries G_{ak} = 2 tr[lambda_a (U_k U_k^dag - U_{k-1}^dag U_{k-1})] with
 * U_0 = U_N; the trace is real up to roundoff and the imaginary residue is
 * discarded. Rows are generators, columns links.
 */
Eigen::MatrixXd gradient(const LinkConfig& config);

/**
 * @brief Iterative cooling by plain gradient descent with step alpha * dt.
 *
 * Per iteration: Y_{ak} = -2 (alpha dt) tr[lambda_a (U_k U_k^dag -
 * U_{k-1}^dag U_{k-1})], then U_k <- exp(sum_a Y_{ak} lambda_a) U_k
 * exp(-sum_a Y_{a,k+1} lambda_a). No line search, no stopping criterion.
 */
CoolingOutcome cool_gradient(const LinkConfig& config, double alpha, double dt, int iters);

/**
 * @brief Quadratic form of the norm Hessian along direction v (real, indexed
 * (a,k)): R = 4 sum_k tr[(U_k M_{k+1} - M_k U_k)(U_k M_{k+1} - M_k U_k)^dag]
 * with M_k = sum_a v_{ak} lambda_a and M_{N+1} = M_1. Nonnegative.
 */
double hessian_form(const LinkConfig& config, const Eigen::MatrixXd& v);

/// Dispatch helper: apply the chosen strategy (NoCooling returns the input).
CoolingOutcome apply_cooling(const LinkConfig& config, const CoolingStrategy& strategy,
                             double dt);

}  // namespace polychain
