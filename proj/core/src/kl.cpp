// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/kl.hpp"

#include <cmath>

namespace cirauth {

namespace {

constexpr double kErfcSlope = 1.19;
constexpr double kSqrtHalfPi = 1.2533141373155002512;  // sqrt(pi/2)
constexpr double kInvSqrt2 = 0.70710678118654752440;

void require_positive(double value, const char* what) {
    if (!(value > 0.0)) throw DomainError(std::string(what) + " must be > 0");
}

}  // namespace

void LatentGaussian::validate() const {
    require_same_shape(mu, sigma, "LatentGaussian");
    for (double v : sigma.data) require_positive(v, "sigma");
}

double erfc_tanh_approx(double x) {
    return 1.0 - std::tanh(kErfcSlope * x);
}

double kl_standard_normal_term(double mu, double sigma) {
    require_positive(sigma, "sigma");
    const double var = sigma * sigma;
    return 0.5 * (-std::log(var) + var + mu * mu - 1.0);
}

double kl_double_peak_bound_term(double mu, double sigma, double m, double s) {
    require_positive(sigma, "sigma");
    require_positive(s, "s");
    const double s2 = s * s;
    const double dm = mu - m;
    const double dp = mu + m;
    return std::log(s / sigma) +
           (sigma * sigma + 0.5 * dm * dm + 0.5 * dp * dp) / (2.0 * s2) - 0.5;
}

double kl_double_peak_exact_term(double mu, double sigma, double m, double s) {
    require_positive(sigma, "sigma");
    require_positive(s, "s");
    const double s2 = s * s;
    const double iota = std::log(2.0 * s / sigma);
    const double kappa = -((m - mu) * (m - mu) + sigma * sigma - s2) / (2.0 * s2);
    const double bracket = -sigma * std::exp(-mu * mu / (2.0 * sigma * sigma)) +
                           kSqrtHalfPi * mu * erfc_tanh_approx(mu * kInvSqrt2 / sigma);
    const double gamma = -2.0 * m * bracket / s2;
    return iota - kappa - gamma;
}

double kl_standard_normal(const LatentGaussian& g) {
    require_same_shape(g.mu, g.sigma, "kl_standard_normal");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.mu.data.size(); ++i) {
        acc += kl_standard_normal_term(g.mu.data[i], g.sigma.data[i]);
    }
    return acc;
}

double kl_double_peak_bound(const LatentGaussian& g, double m, double s) {
    require_same_shape(g.mu, g.sigma, "kl_double_peak_bound");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.mu.data.size(); ++i) {
        acc += kl_double_peak_bound_term(g.mu.data[i], g.sigma.data[i], m, s);
    }
    return acc;
}

double kl_double_peak_exact(const LatentGaussian& g, double m, double s) {
    require_same_shape(g.mu, g.sigma, "kl_double_peak_exact");
    double acc = 0.0;
    for (std::size_t i = 0; i < g.mu.data.size(); ++i) {
        acc += kl_double_peak_exact_term(g.mu.data[i], g.sigma.data[i], m, s);
    }
    return acc;
}

KlGrad kl_standard_normal_grad(double mu, double sigma) {
    KlGrad g;
    g.dmu = mu;
    g.dlogvar = 0.5 * (sigma * sigma - 1.0);
    return g;
}

KlGrad kl_double_peak_bound_grad(double mu, double sigma, double m, double s) {
    (void)m;
    const double s2 = s * s;
    KlGrad g;
    g.dmu = mu / s2;
    g.dlogvar = -0.5 + sigma * sigma / (2.0 * s2);
    return g;
}

KlGrad kl_double_peak_exact_grad(double mu, double sigma, double m, double s) {
    const double s2 = s * s;
    const double e = std::exp(-mu * mu / (2.0 * sigma * sigma));
    const double u = mu * kInvSqrt2 / sigma;  // argument of the Erfc surrogate
    const double t = std::tanh(kErfcSlope * u);
    const double sech2 = 1.0 - t * t;
    const double c = kErfcSlope * kInvSqrt2;  // d(u * kErfcSlope)/dmu at sigma = 1

    // bracket = A + B with A = -sigma * e and B = sqrt(pi/2) * mu * (1 - t)
    const double da_dmu = (mu / sigma) * e;
    const double da_dsigma = -e * (1.0 + mu * mu / (sigma * sigma));
    const double db_dmu = kSqrtHalfPi * ((1.0 - t) - mu * sech2 * c / sigma);
    const double db_dsigma = kSqrtHalfPi * c * mu * mu * sech2 / (sigma * sigma);

    const double dkappa_dmu = (m - mu) / s2;
    const double dkappa_dsigma = -sigma / s2;
    const double dgamma_dmu = -2.0 * m * (da_dmu + db_dmu) / s2;
    const double dgamma_dsigma = -2.0 * m * (da_dsigma + db_dsigma) / s2;

    // value = iota - kappa - gamma; d iota/dmu = 0, d iota/dsigma = -1/sigma
    const double df_dmu = -dkappa_dmu - dgamma_dmu;
    const double df_dsigma = -1.0 / sigma - dkappa_dsigma - dgamma_dsigma;

    KlGrad g;
    g.dmu = df_dmu;
    g.dlogvar = df_dsigma * sigma * 0.5;  // d sigma / d logvar = sigma / 2
    return g;
}

}  // namespace cirauth
