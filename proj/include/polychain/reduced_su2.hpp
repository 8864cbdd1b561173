#pragma once

#include "polychain/langevin.hpp"

namespace polychain {

/// Couplings of the reduced one-degree-of-freedom dynamics: beta = A + iB.
struct ReducedParams {
  double A = 0;
  double B = 0;
};

/// Knobs of the reduced integrator that are not part of the physical setup.
struct ReducedOptions {
  double x0 = 0.5;          // initial real part
  double y0 = 0.0;          // initial imaginary part
  double y_bound = 30.0;    // abort (flag `escaped`) when |y| exceeds this
  double cap_factor = 10.0; // per-step drift displacement cap, in units of sqrt(2 dt)
};

/**
 * @brief Drift of the reduced SDE ds = 2(-beta sin s + cot s) dt + dw at
 * s = x + iy, split into real and imaginary parts:
 *
 *   K_R = 2(-A cosh y sin x + B sinh y cos x + sin 2x / (cosh 2y - cos 2x))
 *   K_I = -2(A sinh y cos x + B cosh y sin x + sinh 2y / (cosh 2y - cos 2x))
 *
 * Noise acts on x only. Throws std::domain_error at the singular points
 * s = k pi (cosh 2y = cos 2x).
 */
std::pair<double, double> drift_reduced(double x, double y, double A, double B);

/**
 * @brief Euler-Maruyama integration of the (x, y) system.
 *
 * x is wrapped to (-pi, pi] after every step. The deterministic displacement
 * (K_R dt, K_I dt) is rescaled to cap_factor * sqrt(2 dt) when it exceeds
 * that length (the cot singularity makes raw overshoots possible); each event
 * counts into drift_cap_hits. Observables O_k = e^{iks} + e^{-iks} are
 * accumulated at sampling times; y_max reports the largest |y| seen among
 * samples; record_samples stores (x, y) pairs.
 */
ChainReport run_reduced(const ReducedParams& params, const Schedule& schedule,
                        const ReducedOptions& options = {});

/**
 * @brief Localization indicator f(A,B): negative values certify that the
 * imaginary part of the reduced process stays in a bounded strip.
 *
 * f = inf over eta in (0,1) of max over xi in [-1,1] of
 *   xi^3(1-eta^2) - xi - (B/(A eta)) xi^2 (1-eta^2) + B/(A eta) - sqrt(1-eta^2)/A.
 *
 * The inner maximum is taken over the cubic's interior critical points plus
 * endpoints (closed form); the outer infimum by an eta grid of eta_samples
 * midpoints with golden-section refinement around the best cell. The
 * localization status is even in A and in B, so the evaluation uses |A|, |B|;
 * at A = 0 the closed-form criterion (localized iff |B| < 1/2) is returned
 * as |B| - 1/2.
 */
double localization_f(double A, double B, int eta_samples = 4000);

/// Largest |B| with f(A, B) < 0, by bisection to tol_b. Zero when |A| >= 3 sqrt(3)/2.
double region_boundary_b(double A, double tol_b = 1e-4);

/// One grid cell of the drift field: normalized direction + raw magnitude.
struct FlowCell {
  double x = 0, y = 0;
  double kr = 0, ki = 0;  // unit direction of (K_R, K_I); zeros when singular
  double norm = 0;        // |(K_R, K_I)|
  bool singular = false;
};

/// Sample the drift field on a uniform nx * ny grid over the given bounds.
std::vector<FlowCell> flow_field(double A, double B, int nx, int ny, double x_min,
                                 double x_max, double y_min, double y_max);

}  // namespace polychain
