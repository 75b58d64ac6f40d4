// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#pragma once

#include "cirauth/matrix.hpp"

namespace cirauth {

/// Diagonal Gaussian emitted by a VAE encoder head, one column per sample.
struct LatentGaussian {
    Matrix mu;     // z x batch
    Matrix sigma;  // z x batch, strictly positive

    void validate() const;
};

/// tanh surrogate for the complementary error function, used inside the
/// closed-form mixture divergence.
double erfc_tanh_approx(double x);

// --- per-dimension kernels -------------------------------------------------

/// KL(N(mu, sigma^2) || N(0, 1)) = (-log sigma^2 + sigma^2 + mu^2 - 1) / 2.
double kl_standard_normal_term(double mu, double sigma);

/// Convexity upper bound on KL(N(mu, sigma^2) || (N(-m, s^2) + N(m, s^2)) / 2):
/// the average of the divergences against the two mixture components.
double kl_double_peak_bound_term(double mu, double sigma, double m, double s);

/// Closed-form approximation of the same divergence (tail integral handled
/// with the tanh Erfc surrogate). Accurate for well-separated peaks with the
/// posterior near the positive peak; see the regression grid in the tests.
double kl_double_peak_exact_term(double mu, double sigma, double m, double s);

// --- batch sums (summed over dimensions and columns) ------------------------

double kl_standard_normal(const LatentGaussian& g);
double kl_double_peak_bound(const LatentGaussian& g, double m, double s);
double kl_double_peak_exact(const LatentGaussian& g, double m, double s);

// --- analytic partials in (mu, log sigma^2) coordinates ----------------------

struct KlGrad {
    double dmu = 0.0;
    double dlogvar = 0.0;
};

KlGrad kl_standard_normal_grad(double mu, double sigma);
KlGrad kl_double_peak_bound_grad(double mu, double sigma, double m, double s);
KlGrad kl_double_peak_exact_grad(double mu, double sigma, double m, double s);

}  // namespace cirauth
