// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/baseline.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace cirauth {

namespace {

constexpr double kLogVarClamp = 10.0;

Matrix gather_columns(const Matrix& samples, const std::vector<std::size_t>& order,
                      std::size_t begin, std::size_t end) {
    Matrix out(samples.rows, end - begin);
    for (std::size_t c = begin; c < end; ++c) {
        const std::size_t src = order[c];
        for (std::size_t r = 0; r < samples.rows; ++r) out(r, c - begin) = samples(r, src);
    }
    return out;
}

void shuffle_order(std::vector<std::size_t>& order, Rng& rng) {
    for (std::size_t i = order.size(); i > 1; --i) {
        const auto j = static_cast<std::size_t>(rng.uniform() * static_cast<double>(i));
        std::swap(order[i - 1], order[std::min(j, i - 1)]);
    }
}

}  // namespace

PlainAe make_plain_ae(std::size_t input_dim, std::size_t h, std::size_t code,
                      const TrainConfig& train) {
    PlainAe model;
    model.input_dim = input_dim;
    model.h = h;
    model.code = code;
    model.train = train;
    Rng rng(train.seed);
    model.enc.layers = {
        make_dense(h, input_dim, Activation::Relu, rng, "ae_enc1"),
        make_dense(h, h, Activation::Relu, rng, "ae_enc2"),
        make_dense(code, h, Activation::Relu, rng, "ae_enc3"),
    };
    model.dec.layers = {
        make_dense(h, code, Activation::Relu, rng, "ae_dec1"),
        make_dense(h, h, Activation::Relu, rng, "ae_dec2"),
        make_dense(input_dim, h, Activation::Identity, rng, "ae_dec3"),
    };
    return model;
}

std::vector<EpochLoss> train_plain_ae(PlainAe& model, const Matrix& samples) {
    const TrainConfig& cfg = model.train;
    cfg.validate();
    if (samples.cols == 0) throw DomainError("train_plain_ae: empty training set");
    std::vector<EpochLoss> history;
    Rng rng = Rng::stream(cfg.seed, 0x7EA2);
    std::vector<std::size_t> order(samples.cols);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_order(order, rng);
        EpochLoss epoch_loss;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < samples.cols; begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, samples.cols);
            const Matrix batch = gather_columns(samples, order, begin, end);
            MlpTrace enc = mlp_forward(model.enc, batch);
            MlpTrace dec = mlp_forward(model.dec, enc.output());
            const double loss = squared_distance(batch, dec.output()) /
                                static_cast<double>(batch.cols);
            if (!std::isfinite(loss)) {
                throw NumericError("train_plain_ae: non-finite loss in epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index),
                                   epoch, batch_index, "l1");
            }
            epoch_loss.total += loss * static_cast<double>(batch.cols);
            epoch_loss.l1 = epoch_loss.total;

            Matrix upstream = subtract(dec.output(), batch);
            scale_in_place(upstream, 2.0);
            MlpGrads dec_grads;
            Matrix d_code = mlp_backward(model.dec, dec, upstream, batch.cols, dec_grads);
            MlpGrads enc_grads;
            mlp_backward(model.enc, enc, d_code, batch.cols, enc_grads);
            mlp_momentum_step(model.dec, dec_grads, cfg);
            mlp_momentum_step(model.enc, enc_grads, cfg);
            ++batch_index;
        }
        epoch_loss.total /= static_cast<double>(samples.cols);
        epoch_loss.l1 = epoch_loss.total;
        history.push_back(epoch_loss);
    }
    return history;
}

Matrix encode_ae(const PlainAe& model, const Matrix& x) { return mlp_apply(model.enc, x); }

PlainVae make_plain_vae(std::size_t input_dim, std::size_t h, std::size_t z,
                        const TrainConfig& train, double kl_weight) {
    PlainVae model;
    model.input_dim = input_dim;
    model.h = h;
    model.z = z;
    model.kl_weight = kl_weight;
    model.train = train;
    Rng rng(train.seed);
    model.enc.layers = {
        make_dense(h, input_dim, Activation::Relu, rng, "vae_enc1"),
        make_dense(h, h, Activation::Relu, rng, "vae_enc2"),
        make_dense(h, h, Activation::Relu, rng, "vae_enc3"),
    };
    model.mu_head = make_dense(z, h, Activation::Identity, rng, "vae_mu");
    model.logvar_head = make_dense(z, h, Activation::Identity, rng, "vae_logvar");
    for (double& b : model.logvar_head.bias.data) b = -4.0;
    model.dec.layers = {
        make_dense(h, z, Activation::Relu, rng, "vae_dec1"),
        make_dense(h, h, Activation::Relu, rng, "vae_dec2"),
        make_dense(input_dim, h, Activation::Identity, rng, "vae_dec3"),
    };
    return model;
}

std::vector<EpochLoss> train_plain_vae(PlainVae& model, const Matrix& samples) {
    const TrainConfig& cfg = model.train;
    cfg.validate();
    if (samples.cols == 0) throw DomainError("train_plain_vae: empty training set");
    std::vector<EpochLoss> history;
    Rng rng = Rng::stream(cfg.seed, 0x7EA3);
    std::vector<std::size_t> order(samples.cols);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_order(order, rng);
        EpochLoss epoch_loss;
        std::size_t batch_index = 0;
        for (std::size_t begin = 0; begin < samples.cols; begin += cfg.batch_size) {
            const std::size_t end = std::min(begin + cfg.batch_size, samples.cols);
            const Matrix batch = gather_columns(samples, order, begin, end);
            const std::size_t zeta = batch.cols;

            MlpTrace enc = mlp_forward(model.enc, batch);
            const Matrix& hidden = enc.output();
            LayerCache mu_c = dense_forward(model.mu_head, hidden);
            LayerCache lv_c = dense_forward(model.logvar_head, hidden);
            Matrix logvar = lv_c.out;
            Matrix mask(logvar.rows, logvar.cols);
            for (std::size_t i = 0; i < logvar.data.size(); ++i) {
                const double raw = logvar.data[i];
                mask.data[i] = (raw > -kLogVarClamp && raw < kLogVarClamp) ? 1.0 : 0.0;
                logvar.data[i] = std::clamp(raw, -kLogVarClamp, kLogVarClamp);
            }
            Matrix sigma = logvar;
            for (double& v : sigma.data) v = std::exp(0.5 * v);
            if (!sigma.all_finite()) {
                throw NumericError("train_plain_vae: non-finite forward pass in epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index),
                                   epoch, batch_index, "forward");
            }
            Matrix eps(sigma.rows, sigma.cols);
            for (double& v : eps.data) v = rng.normal();
            const Matrix z = reparameterize({mu_c.out, sigma}, eps);
            MlpTrace dec = mlp_forward(model.dec, z);

            const double recon = squared_distance(batch, dec.output());
            const double kl = kl_standard_normal({mu_c.out, sigma});
            const double loss = (recon + model.kl_weight * kl) / static_cast<double>(zeta);
            if (!std::isfinite(loss)) {
                throw NumericError("train_plain_vae: non-finite loss in epoch " +
                                       std::to_string(epoch) + ", batch " +
                                       std::to_string(batch_index),
                                   epoch, batch_index, std::isfinite(recon) ? "kl" : "recon");
            }
            epoch_loss.total += loss * static_cast<double>(zeta);
            epoch_loss.l1 += recon;
            epoch_loss.l2 += model.kl_weight * kl;

            Matrix upstream = subtract(dec.output(), batch);
            scale_in_place(upstream, 2.0);
            MlpGrads dec_grads;
            Matrix dz = mlp_backward(model.dec, dec, upstream, zeta, dec_grads);

            Matrix dmu = dz;
            Matrix dlogvar(dz.rows, dz.cols);
            for (std::size_t i = 0; i < dz.data.size(); ++i) {
                dlogvar.data[i] = dz.data[i] * eps.data[i] * sigma.data[i] * 0.5;
                const KlGrad g = kl_standard_normal_grad(mu_c.out.data[i], sigma.data[i]);
                dmu.data[i] += model.kl_weight * g.dmu;
                dlogvar.data[i] += model.kl_weight * g.dlogvar;
                dlogvar.data[i] *= mask.data[i];
            }
            Matrix dh;
            LayerGrads mu_grads = dense_backward(model.mu_head, hidden, mu_c.pre, dmu, zeta, &dh);
            Matrix dh_lv;
            LayerGrads lv_grads =
                dense_backward(model.logvar_head, hidden, lv_c.pre, dlogvar, zeta, &dh_lv);
            add_in_place(dh, dh_lv);
            MlpGrads enc_grads;
            mlp_backward(model.enc, enc, dh, zeta, enc_grads);

            mlp_momentum_step(model.dec, dec_grads, cfg);
            momentum_step(model.mu_head, mu_grads, cfg);
            momentum_step(model.logvar_head, lv_grads, cfg);
            mlp_momentum_step(model.enc, enc_grads, cfg);
            ++batch_index;
        }
        const double inv_n = 1.0 / static_cast<double>(samples.cols);
        epoch_loss.total *= inv_n;
        epoch_loss.l1 *= inv_n;
        epoch_loss.l2 *= inv_n;
        history.push_back(epoch_loss);
    }
    return history;
}

Matrix encode_vae_mu(const PlainVae& model, const Matrix& x) {
    const Matrix hidden = mlp_apply(model.enc, x);
    return dense_forward(model.mu_head, hidden).out;
}

}  // namespace cirauth
