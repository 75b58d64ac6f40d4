// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses

#include "cirauth/model_io.hpp"

#include <algorithm>

#include "byteio.hpp"

namespace cirauth {

namespace {

constexpr char kMagic[4] = {'H', 'V', 'A', 'E'};
constexpr std::uint16_t kVersion = 1;

enum class NetKind : std::uint8_t { Hvae = 0, Ae = 1, Vae = 2 };

void put_train(std::vector<std::uint8_t>& buf, const TrainConfig& t) {
    detail::put_f64(buf, t.learning_rate);
    detail::put_f64(buf, t.momentum);
    detail::put_u32(buf, static_cast<std::uint32_t>(t.epochs));
    detail::put_u32(buf, static_cast<std::uint32_t>(t.batch_size));
    detail::put_u64(buf, t.seed);
}

TrainConfig take_train(detail::ByteReader& r) {
    TrainConfig t;
    t.learning_rate = r.f64();
    t.momentum = r.f64();
    t.epochs = r.u32();
    t.batch_size = r.u32();
    t.seed = r.u64();
    return t;
}

void put_layer(std::vector<std::uint8_t>& buf, const DenseLayer& layer) {
    detail::put_u32(buf, static_cast<std::uint32_t>(layer.weights.rows));
    detail::put_u32(buf, static_cast<std::uint32_t>(layer.weights.cols));
    detail::put_u8(buf, static_cast<std::uint8_t>(layer.activation));
    for (double v : layer.weights.data) detail::put_f64(buf, v);
    for (double v : layer.bias.data) detail::put_f64(buf, v);
}

DenseLayer take_layer(detail::ByteReader& r, std::string name) {
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    const auto act = static_cast<Activation>(r.u8());
    DenseLayer layer;
    layer.name = std::move(name);
    layer.activation = act;
    layer.weights = Matrix(rows, cols);
    for (double& v : layer.weights.data) v = r.f64();
    layer.bias = Matrix(rows, 1);
    for (double& v : layer.bias.data) v = r.f64();
    layer.weight_momentum = Matrix(rows, cols);
    layer.bias_momentum = Matrix(rows, 1);
    return layer;
}

std::vector<const DenseLayer*> layer_list(const HvaeModel& m) {
    std::vector<const DenseLayer*> out;
    for (const auto& l : m.enc.layers) out.push_back(&l);
    out.push_back(&m.unit1.mu_head);
    out.push_back(&m.unit1.logvar_head);
    out.push_back(&m.unit1.dec);
    out.push_back(&m.unit2.mu_head);
    out.push_back(&m.unit2.logvar_head);
    out.push_back(&m.unit2.dec);
    for (const auto& l : m.dec.layers) out.push_back(&l);
    return out;
}

}  // namespace

std::size_t model_input_dim(const AnyModel& model) {
    return std::visit(
        [](const auto& m) -> std::size_t {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, HvaeModel>) {
                return m.config.input_dim;
            } else {
                return m.input_dim;
            }
        },
        model);
}

void save_model(const AnyModel& model, const std::string& path) {
    std::vector<std::uint8_t> body;
    detail::put_u16(body, kVersion);
    std::vector<const DenseLayer*> layers;
    if (const auto* hvae = std::get_if<HvaeModel>(&model)) {
        detail::put_u8(body, static_cast<std::uint8_t>(NetKind::Hvae));
        const HvaeConfig& c = hvae->config;
        detail::put_u32(body, static_cast<std::uint32_t>(c.input_dim));
        detail::put_u32(body, static_cast<std::uint32_t>(c.h));
        detail::put_u32(body, static_cast<std::uint32_t>(c.z));
        detail::put_f64(body, c.double_peak_m);
        detail::put_f64(body, c.double_peak_s);
        detail::put_f64(body, c.prior_weight);
        detail::put_f64(body, c.kl2_weight);
        detail::put_f64(body, c.kl3_weight);
        detail::put_u8(body, static_cast<std::uint8_t>(c.kl_mode));
        put_train(body, c.train);
        layers = layer_list(*hvae);
    } else if (const auto* ae = std::get_if<PlainAe>(&model)) {
        detail::put_u8(body, static_cast<std::uint8_t>(NetKind::Ae));
        detail::put_u32(body, static_cast<std::uint32_t>(ae->input_dim));
        detail::put_u32(body, static_cast<std::uint32_t>(ae->h));
        detail::put_u32(body, static_cast<std::uint32_t>(ae->code));
        put_train(body, ae->train);
        for (const auto& l : ae->enc.layers) layers.push_back(&l);
        for (const auto& l : ae->dec.layers) layers.push_back(&l);
    } else {
        const auto& vae = std::get<PlainVae>(model);
        detail::put_u8(body, static_cast<std::uint8_t>(NetKind::Vae));
        detail::put_u32(body, static_cast<std::uint32_t>(vae.input_dim));
        detail::put_u32(body, static_cast<std::uint32_t>(vae.h));
        detail::put_u32(body, static_cast<std::uint32_t>(vae.z));
        detail::put_f64(body, vae.kl_weight);
        put_train(body, vae.train);
        for (const auto& l : vae.enc.layers) layers.push_back(&l);
        layers.push_back(&vae.mu_head);
        layers.push_back(&vae.logvar_head);
        for (const auto& l : vae.dec.layers) layers.push_back(&l);
    }
    detail::put_u32(body, static_cast<std::uint32_t>(layers.size()));
    for (const DenseLayer* l : layers) put_layer(body, *l);

    std::vector<std::uint8_t> bytes;
    bytes.reserve(body.size() + 4);
    bytes.insert(bytes.end(), kMagic, kMagic + 4);
    bytes.insert(bytes.end(), body.begin(), body.end());
    detail::write_file(path, bytes);
}

AnyModel load_model(const std::string& path) {
    const auto bytes = detail::read_file(path);
    if (bytes.size() < 7) throw IoError(path + ": truncated payload");
    if (!std::equal(kMagic, kMagic + 4, bytes.begin())) {
        throw IoError(path + ": not a HVAE checkpoint (bad magic)");
    }
    detail::ByteReader r(bytes.data() + 4, bytes.size() - 4, path);
    const std::uint16_t version = r.u16();
    if (version != kVersion) {
        throw IoError(path + ": unsupported checkpoint version " + std::to_string(version));
    }
    const auto kind = static_cast<NetKind>(r.u8());
    auto expect_layers = [&](std::size_t want, std::size_t got) {
        if (want != got) {
            throw IoError(path + ": checkpoint carries " + std::to_string(got) +
                          " layers, expected " + std::to_string(want));
        }
    };
    switch (kind) {
        case NetKind::Hvae: {
            HvaeConfig c;
            c.input_dim = r.u32();
            c.h = r.u32();
            c.z = r.u32();
            c.double_peak_m = r.f64();
            c.double_peak_s = r.f64();
            c.prior_weight = r.f64();
            c.kl2_weight = r.f64();
            c.kl3_weight = r.f64();
            c.kl_mode = static_cast<KlMode>(r.u8());
            c.train = take_train(r);
            const std::uint32_t count = r.u32();
            expect_layers(12, count);
            HvaeModel m;
            m.config = c;
            m.enc.layers = {take_layer(r, "enc1"), take_layer(r, "enc2"), take_layer(r, "enc3")};
            m.unit1.mu_head = take_layer(r, "mu1");
            m.unit1.logvar_head = take_layer(r, "logvar1");
            m.unit1.dec = take_layer(r, "dec1");
            m.unit2.mu_head = take_layer(r, "mu2");
            m.unit2.logvar_head = take_layer(r, "logvar2");
            m.unit2.dec = take_layer(r, "dec2");
            m.dec.layers = {take_layer(r, "dec_h1"), take_layer(r, "dec_h2"),
                            take_layer(r, "dec_out")};
            if (r.remaining() != 0) throw IoError(path + ": trailing bytes");
            return m;
        }
        case NetKind::Ae: {
            PlainAe m;
            m.input_dim = r.u32();
            m.h = r.u32();
            m.code = r.u32();
            m.train = take_train(r);
            const std::uint32_t count = r.u32();
            expect_layers(6, count);
            m.enc.layers = {take_layer(r, "ae_enc1"), take_layer(r, "ae_enc2"),
                            take_layer(r, "ae_enc3")};
            m.dec.layers = {take_layer(r, "ae_dec1"), take_layer(r, "ae_dec2"),
                            take_layer(r, "ae_dec3")};
            if (r.remaining() != 0) throw IoError(path + ": trailing bytes");
            return m;
        }
        case NetKind::Vae: {
            PlainVae m;
            m.input_dim = r.u32();
            m.h = r.u32();
            m.z = r.u32();
            m.kl_weight = r.f64();
            m.train = take_train(r);
            const std::uint32_t count = r.u32();
            expect_layers(8, count);
            m.enc.layers = {take_layer(r, "vae_enc1"), take_layer(r, "vae_enc2"),
                            take_layer(r, "vae_enc3")};
            m.mu_head = take_layer(r, "vae_mu");
            m.logvar_head = take_layer(r, "vae_logvar");
            m.dec.layers = {take_layer(r, "vae_dec1"), take_layer(r, "vae_dec2"),
                            take_layer(r, "vae_dec3")};
            if (r.remaining() != 0) throw IoError(path + ": trailing bytes");
            return m;
        }
    }
    throw IoError(path + ": unknown network kind");
}

}  // namespace cirauth
