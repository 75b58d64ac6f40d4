// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/hvae.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cirauth {

namespace {

constexpr double kLogVarClamp = 10.0;

void unit_forward(const VaeUnit& unit, const Matrix& hidden, const Matrix* eps,
                  UnitTrace& trace) {
    trace.mu_cache = dense_forward(unit.mu_head, hidden);
    trace.logvar_cache = dense_forward(unit.logvar_head, hidden);
    trace.logvar = trace.logvar_cache.out;
    trace.clamp_mask = Matrix(trace.logvar.rows, trace.logvar.cols);
    for (std::size_t i = 0; i < trace.logvar.data.size(); ++i) {
        double v = trace.logvar.data[i];
        const bool inside = v > -kLogVarClamp && v < kLogVarClamp;
        trace.clamp_mask.data[i] = inside ? 1.0 : 0.0;
        trace.logvar.data[i] = std::clamp(v, -kLogVarClamp, kLogVarClamp);
    }
    trace.sigma = trace.logvar;
    for (double& v : trace.sigma.data) v = std::exp(0.5 * v);
    if (eps != nullptr) {
        trace.eps = *eps;
    } else {
        trace.eps = Matrix(trace.sigma.rows, trace.sigma.cols);
    }
    trace.z = reparameterize({trace.mu_cache.out, trace.sigma}, trace.eps);
    trace.dec_cache = dense_forward(unit.dec, trace.z);
}

}  // namespace

const char* kl_mode_name(KlMode mode) {
    return mode == KlMode::Bound ? "bound" : "exact";
}

void HvaeConfig::validate() const {
    if (z > h || h > input_dim) throw ConfigError("HvaeConfig requires z <= h <= input_dim");
    if (!(double_peak_s > 0.0)) throw ConfigError("double_peak_s must be > 0");
    if (!(double_peak_m > 0.0)) throw ConfigError("double_peak_m must be > 0");
    if (prior_weight <= 0.0 || prior_weight >= 1.0) {
        throw ConfigError("prior_weight must be in (0, 1)");
    }
    if (kl2_weight < 0.0 || kl3_weight < 0.0) throw ConfigError("kl weights must be >= 0");
    train.validate();
}

HvaeModel make_hvae(const HvaeConfig& config) {
    config.validate();
    HvaeModel model;
    model.config = config;
    Rng rng(config.train.seed);
    model.enc.layers = {
        make_dense(config.h, config.input_dim, Activation::Relu, rng, "enc1"),
        make_dense(config.h, config.h, Activation::Relu, rng, "enc2"),
        make_dense(config.h, config.h, Activation::Relu, rng, "enc3"),
    };
    model.unit1.mu_head = make_dense(config.z, config.h, Activation::Identity, rng, "mu1");
    model.unit1.logvar_head = make_dense(config.z, config.h, Activation::Identity, rng, "logvar1");
    model.unit1.dec = make_dense(config.h, config.z, Activation::Tanh, rng, "dec1");
    model.unit2.mu_head = make_dense(config.z, config.h, Activation::Identity, rng, "mu2");
    model.unit2.logvar_head = make_dense(config.z, config.h, Activation::Identity, rng, "logvar2");
    model.unit2.dec = make_dense(config.h, config.z, Activation::Tanh, rng, "dec2");
    // Posteriors start narrow; sigma = 1 at init floods the reconstruction
    // path with sampling noise and stalls the first epochs.
    for (double& b : model.unit1.logvar_head.bias.data) b = -4.0;
    for (double& b : model.unit2.logvar_head.bias.data) b = -4.0;
    model.dec.layers = {
        make_dense(config.h, config.h, Activation::Relu, rng, "dec_h1"),
        make_dense(config.h, config.h, Activation::Relu, rng, "dec_h2"),
        make_dense(config.input_dim, config.h, Activation::Identity, rng, "dec_out"),
    };
    return model;
}

HvaeNoise draw_hvae_noise(const HvaeConfig& config, std::size_t batch, Rng& rng) {
    HvaeNoise noise;
    noise.eps1 = Matrix(config.z, batch);
    noise.eps2 = Matrix(config.z, batch);
    for (double& v : noise.eps1.data) v = rng.normal();
    for (double& v : noise.eps2.data) v = rng.normal();
    return noise;
}

Matrix reparameterize(const LatentGaussian& g, const Matrix& eps) {
    require_same_shape(g.mu, eps, "reparameterize");
    Matrix z = g.mu;
    for (std::size_t i = 0; i < z.data.size(); ++i) {
        z.data[i] += eps.data[i] * g.sigma.data[i];
    }
    return z;
}

HvaeTrace forward_hvae(const HvaeModel& model, const Matrix& x, const HvaeNoise* noise) {
    if (x.rows != model.config.input_dim) {
        throw ShapeError("forward_hvae: input has " + std::to_string(x.rows) +
                         " rows, model expects " + std::to_string(model.config.input_dim));
    }
    HvaeTrace trace;
    trace.enc = mlp_forward(model.enc, x);
    const Matrix& hidden = trace.enc.caches.back().out;
    unit_forward(model.unit1, hidden, noise != nullptr ? &noise->eps1 : nullptr, trace.unit1);
    unit_forward(model.unit2, hidden, noise != nullptr ? &noise->eps2 : nullptr, trace.unit2);
    trace.hidden_hat = add(trace.unit1.dec_cache.out, trace.unit2.dec_cache.out);
    trace.dec = mlp_forward(model.dec, trace.hidden_hat);
    return trace;
}

double loss_ae(const Matrix& x, const Matrix& x_hat) {
    require_same_shape(x, x_hat, "loss_ae");
    return squared_distance(x, x_hat) / static_cast<double>(x.cols);
}

double loss_z1(const HvaeTrace& trace, double kl2_weight) {
    const Matrix& hidden = trace.hidden();
    const double recon = squared_distance(hidden, trace.hidden_hat);
    const double kl = kl_standard_normal(trace.unit1.gaussian());
    return (recon + kl2_weight * kl) / static_cast<double>(hidden.cols);
}

double loss_z2(const HvaeTrace& trace, const HvaeConfig& config) {
    const LatentGaussian g = trace.unit2.gaussian();
    const double kl = config.kl_mode == KlMode::Bound
                          ? kl_double_peak_bound(g, config.double_peak_m, config.double_peak_s)
                          : kl_double_peak_exact(g, config.double_peak_m, config.double_peak_s);
    return config.kl3_weight * kl / static_cast<double>(g.mu.cols);
}

LossBreakdown total_loss(const HvaeTrace& trace, const Matrix& x, const HvaeConfig& config) {
    LossBreakdown loss;
    loss.l1 = loss_ae(x, trace.reconstruction());
    loss.l2 = loss_z1(trace, config.kl2_weight);
    loss.l3 = loss_z2(trace, config);
    loss.total = loss.l1 + loss.l2 + loss.l3;
    return loss;
}

namespace {

// Gradients into one latent unit. `upstream_hhat` is d(sum loss)/d hidden_hat;
// KL gradients are added per element. Returns d(sum loss)/d hidden.
Matrix unit_backward(const VaeUnit& unit, const UnitTrace& trace, const Matrix& hidden,
                     const Matrix& upstream_hhat, const HvaeConfig& config, bool double_peak,
                     std::size_t zeta, LayerGrads& mu_grads, LayerGrads& logvar_grads,
                     LayerGrads& dec_grads) {
    Matrix dz;
    dec_grads = dense_backward(unit.dec, trace.z, trace.dec_cache.pre, upstream_hhat, zeta, &dz);

    // Reparameterization: z = mu + eps * sigma with sigma = exp(logvar / 2).
    Matrix dmu = dz;
    Matrix dlogvar(dz.rows, dz.cols);
    for (std::size_t i = 0; i < dz.data.size(); ++i) {
        dlogvar.data[i] = dz.data[i] * trace.eps.data[i] * trace.sigma.data[i] * 0.5;
    }

    const double weight = double_peak ? config.kl3_weight : config.kl2_weight;
    for (std::size_t i = 0; i < dmu.data.size(); ++i) {
        const double mu = trace.mu_cache.out.data[i];
        const double sigma = trace.sigma.data[i];
        KlGrad g;
        if (!double_peak) {
            g = kl_standard_normal_grad(mu, sigma);
        } else if (config.kl_mode == KlMode::Bound) {
            g = kl_double_peak_bound_grad(mu, sigma, config.double_peak_m, config.double_peak_s);
        } else {
            g = kl_double_peak_exact_grad(mu, sigma, config.double_peak_m, config.double_peak_s);
        }
        dmu.data[i] += weight * g.dmu;
        dlogvar.data[i] += weight * g.dlogvar;
        dlogvar.data[i] *= trace.clamp_mask.data[i];
    }

    Matrix dh_mu;
    mu_grads = dense_backward(unit.mu_head, hidden, trace.mu_cache.pre, dmu, zeta, &dh_mu);
    Matrix dh_logvar;
    logvar_grads =
        dense_backward(unit.logvar_head, hidden, trace.logvar_cache.pre, dlogvar, zeta, &dh_logvar);
    add_in_place(dh_mu, dh_logvar);
    return dh_mu;
}

}  // namespace

void hvae_backward(const HvaeModel& model, const HvaeTrace& trace, const Matrix& x,
                   HvaeGrads& grads) {
    const std::size_t zeta = x.cols;
    const Matrix& hidden = trace.hidden();

    // L1 path through the output decoder.
    Matrix d_xhat = subtract(trace.reconstruction(), x);
    scale_in_place(d_xhat, 2.0);
    Matrix d_hhat = mlp_backward(model.dec, trace.dec, d_xhat, zeta, grads.dec);

    // L2 reconstruction touches hidden_hat directly.
    Matrix recon_diff = subtract(trace.hidden_hat, hidden);
    scale_in_place(recon_diff, 2.0);
    add_in_place(d_hhat, recon_diff);

    Matrix d_hidden = unit_backward(model.unit1, trace.unit1, hidden, d_hhat, model.config,
                                    false, zeta, grads.mu1, grads.logvar1, grads.dec1);
    Matrix d_hidden2 = unit_backward(model.unit2, trace.unit2, hidden, d_hhat, model.config,
                                     true, zeta, grads.mu2, grads.logvar2, grads.dec2);
    add_in_place(d_hidden, d_hidden2);

    // ... and hidden itself is the L2 reconstruction target.
    Matrix target_diff = subtract(hidden, trace.hidden_hat);
    scale_in_place(target_diff, 2.0);
    add_in_place(d_hidden, target_diff);

    mlp_backward(model.enc, trace.enc, d_hidden, zeta, grads.enc);
}

void hvae_momentum_step(HvaeModel& model, const HvaeGrads& grads) {
    const TrainConfig& cfg = model.config.train;
    mlp_momentum_step(model.enc, grads.enc, cfg);
    mlp_momentum_step(model.dec, grads.dec, cfg);
    momentum_step(model.unit1.mu_head, grads.mu1, cfg);
    momentum_step(model.unit1.logvar_head, grads.logvar1, cfg);
    momentum_step(model.unit1.dec, grads.dec1, cfg);
    momentum_step(model.unit2.mu_head, grads.mu2, cfg);
    momentum_step(model.unit2.logvar_head, grads.logvar2, cfg);
    momentum_step(model.unit2.dec, grads.dec2, cfg);
}

namespace {

Matrix gather_columns(const Matrix& samples, const std::vector<std::size_t>& order,
                      std::size_t begin, std::size_t end) {
    Matrix out(samples.rows, end - begin);
    for (std::size_t c = begin; c < end; ++c) {
        const std::size_t src = order[c];
        for (std::size_t r = 0; r < samples.rows; ++r) {
            out(r, c - begin) = samples(r, src);
        }
    }
    return out;
}

const char* worst_term(const LossBreakdown& loss) {
    if (!std::isfinite(loss.l1)) return "l1";
    if (!std::isfinite(loss.l2)) return "l2";
    if (!std::isfinite(loss.l3)) return "l3";
    return "total";
}

}  // namespace

std::vector<EpochLoss> train_hvae(HvaeModel& model, const Matrix& samples,
                                  std::size_t reference_column) {
    const TrainConfig& cfg = model.config.train;
    cfg.validate();
    if (samples.cols == 0) throw DomainError("train_hvae: empty training set");
    if (reference_column >= samples.cols) {
        throw DomainError("train_hvae: reference column out of range");
    }

    std::vector<EpochLoss> history;
    history.reserve(cfg.epochs);
    Rng rng = Rng::stream(cfg.seed, 0x7EA1);
    std::vector<std::size_t> order(samples.cols);
    std::iota(order.begin(), order.end(), 0);

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
            std::swap(order[i - 1], order[std::min(j, i - 1)]);
        }
        EpochLoss epoch_loss;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < samples.cols; begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, samples.cols);
            const Matrix batch = gather_columns(samples, order, begin, end);
            const HvaeNoise noise = draw_hvae_noise(model.config, batch.cols, rng);
            const HvaeTrace trace = forward_hvae(model, batch, &noise);
            if (!trace.reconstruction().all_finite() || !trace.unit1.sigma.all_finite() ||
                !trace.unit2.sigma.all_finite()) {
                throw NumericError("train_hvae: non-finite forward pass in epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index),
                                   epoch, batch_index, "forward");
            }
            const LossBreakdown loss = total_loss(trace, batch, model.config);
            if (!std::isfinite(loss.total)) {
                throw NumericError("train_hvae: non-finite loss in epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index) + ", term " +
                                       worst_term(loss),
                                   epoch, batch_index, worst_term(loss));
            }
            const double w = static_cast<double>(batch.cols);
            epoch_loss.total += loss.total * w;
            epoch_loss.l1 += loss.l1 * w;
            epoch_loss.l2 += loss.l2 * w;
            epoch_loss.l3 += loss.l3 * w;

            HvaeGrads grads;
            hvae_backward(model, trace, batch, grads);
            hvae_momentum_step(model, grads);
            ++batch_index;
        }
        const double inv_n = 1.0 / static_cast<double>(samples.cols);
        epoch_loss.total *= inv_n;
        epoch_loss.l1 *= inv_n;
        epoch_loss.l2 *= inv_n;
        epoch_loss.l3 *= inv_n;
        history.push_back(epoch_loss);
    }
    return history;
}

Matrix encode_z2(const HvaeModel& model, const Matrix& x) {
    const Matrix hidden = mlp_apply(model.enc, x);
    return dense_forward(model.unit2.mu_head, hidden).out;
}

}  // namespace cirauth
