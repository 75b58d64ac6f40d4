// SPDX-License-Identifier: Apache-2.0
//
// cirauth - physical-layer authentication from channel impulse responses
//
// Acceptance suite: one line per criterion, nonzero exit on any failure.
// Desk-scale evaluation settings are pinned here; CIR_AUTH_THREADS caps the
// worker pool that runs independent experiments in parallel.

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "cirauth/auth.hpp"
#include "cirauth/dataset_io.hpp"
#include "cirauth/experiment.hpp"
#include "oracles.hpp"

using namespace cirauth;
namespace oracle = cirauth::testing;

namespace {

// ---------------------------------------------------------------------------
// Pinned evaluation settings.
// ---------------------------------------------------------------------------

constexpr std::uint64_t kSeeds[] = {1, 2, 3, 4, 5};
constexpr std::uint64_t kRestartOffsets[] = {0, 1000, 2000};
constexpr std::uint32_t kMobileInterval = 2;
constexpr double kIntervalTolerance = 0.005;  // a handful of verdict flips across the pool
constexpr double kDistanceBand = 0.05;        // one-node tolerance band for C6

ProtocolConfig static_protocol(ModelKind kind, std::uint64_t train_seed) {
    ProtocolConfig cfg;
    cfg.kind = kind;
    cfg.train_per_node = 30;
    cfg.test_per_node = 10;
    cfg.hvae.h = 64;
    cfg.hvae.z = 32;
    cfg.hvae.kl2_weight = kind == ModelKind::TfHvae ? 0.001 : 1.0;
    cfg.hvae.kl3_weight = kind == ModelKind::TfHvae ? 0.001 : 1.0;
    cfg.hvae.train.learning_rate = 0.005;
    cfg.hvae.train.epochs = 100;
    cfg.hvae.train.batch_size = 32;
    cfg.hvae.train.seed = train_seed;
    return cfg;
}

ProtocolConfig mobile_protocol(ModelKind kind, std::uint64_t train_seed) {
    ProtocolConfig cfg;
    cfg.kind = kind;
    cfg.train_per_node = 30;
    cfg.test_per_node = 10;
    cfg.hvae.h = 64;
    cfg.hvae.z = 32;
    switch (kind) {
        case ModelKind::TfHvae:
            cfg.hvae.kl2_weight = 0.1;
            cfg.hvae.kl3_weight = 0.1;
            cfg.hvae.train.learning_rate = 0.01;
            break;
        case ModelKind::TfVae:
            cfg.hvae.kl2_weight = 0.3;
            cfg.hvae.train.learning_rate = 0.01;
            break;
        default:
            cfg.hvae.kl2_weight = 1.0;
            cfg.hvae.train.learning_rate = 0.005;
            break;
    }
    cfg.hvae.train.epochs = 100;
    cfg.hvae.train.batch_size = 32;
    cfg.hvae.train.seed = train_seed;
    return cfg;
}

// ---------------------------------------------------------------------------
// Tiny parallel runner; results land in preallocated slots so the outputs do
// not depend on scheduling.
// ---------------------------------------------------------------------------

void run_jobs(const std::vector<std::function<void()>>& jobs) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= jobs.size()) return;
            jobs[i]();
        }
    };
    const std::size_t threads = std::min(sweep_thread_cap(), jobs.size());
    if (threads <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (std::size_t i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

struct Criterion {
    int id;
    bool pass;
    std::string detail;
};

std::vector<AuthReport> g_static_hvae;  // shared between C5, C6 and C9

// ---------------------------------------------------------------------------

// A rectifier pre-activation inside the finite-difference step would make
// the probe straddle the kink; such draws are rejected, the derivative
// convention at exactly zero is pinned by a unit test instead.
bool relu_margin_ok(const Mlp& net, const MlpTrace& trace, double margin) {
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        if (net.layers[l].activation != Activation::Relu) continue;
        for (double v : trace.caches[l].pre.data) {
            if (std::abs(v) < margin) return false;
        }
    }
    return true;
}

Criterion criterion_gradients() {
    // Plain layers: every activation on random stacks of up to 4 layers and
    // 8 units, relative error <= 1e-4 with a 1e-7 absolute floor.
    double worst_layer = 0.0;
    Rng rng(1001);
    const Activation kinds[] = {Activation::Sigmoid, Activation::Tanh, Activation::Relu,
                                Activation::Identity};
    for (const Activation kind : kinds) {
        for (int trial = 0; trial < 3; ++trial) {
            const std::size_t depth = 2 + trial;
            Mlp net;
            Matrix x;
            for (;;) {
                net.layers.clear();
                std::size_t in_dim = 3 + static_cast<std::size_t>(rng.uniform() * 5.0);
                std::size_t prev = in_dim;
                for (std::size_t l = 0; l < depth; ++l) {
                    const std::size_t width = 2 + static_cast<std::size_t>(rng.uniform() * 6.0);
                    net.layers.push_back(make_dense(width, prev, kind, rng));
                    prev = width;
                }
                x = Matrix(in_dim, 3);
                for (auto& v : x.data) v = rng.normal();
                if (relu_margin_ok(net, mlp_forward(net, x), 1e-3)) break;
            }
            Matrix target(net.out_dim(), 3);
            for (auto& v : target.data) v = rng.normal();
            auto loss = [&] {
                return squared_distance(mlp_apply(net, x), target) / 3.0;
            };
            const MlpTrace trace = mlp_forward(net, x);
            Matrix upstream = subtract(trace.output(), target);
            scale_in_place(upstream, 2.0);
            MlpGrads grads;
            mlp_backward(net, trace, upstream, 3, grads);
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                auto check = [&](Matrix& params, const Matrix& grad) {
                    for (std::size_t i = 0; i < params.data.size(); ++i) {
                        const double numeric = oracle::central_difference(
                            [&](double v) {
                                const double saved = params.data[i];
                                params.data[i] = v;
                                const double out = loss();
                                params.data[i] = saved;
                                return out;
                            },
                            params.data[i]);
                        worst_layer =
                            std::max(worst_layer, oracle::gradient_error(grad.data[i], numeric));
                    }
                };
                check(net.layers[l].weights, grads.layers[l].dw);
                check(net.layers[l].bias, grads.layers[l].db);
            }
        }
    }

    // Full model, tiny configuration, both divergence modes, 1e-3.
    double worst_model = 0.0;
    for (const KlMode mode : {KlMode::Bound, KlMode::Exact}) {
        HvaeConfig cfg;
        cfg.input_dim = 6;
        cfg.h = 4;
        cfg.z = 2;
        cfg.kl2_weight = 0.7;
        cfg.kl3_weight = 0.4;
        cfg.kl_mode = mode;
        cfg.train.seed = 77;
        HvaeModel model = make_hvae(cfg);
        Rng data_rng(78);
        Rng noise_rng(79);
        Matrix x(6, 2);
        HvaeNoise noise;
        for (;;) {
            for (auto& v : x.data) v = data_rng.normal();
            noise = draw_hvae_noise(cfg, 2, noise_rng);
            const HvaeTrace probe = forward_hvae(model, x, &noise);
            if (relu_margin_ok(model.enc, probe.enc, 1e-3) &&
                relu_margin_ok(model.dec, probe.dec, 1e-3)) {
                break;
            }
        }

        const HvaeTrace trace = forward_hvae(model, x, &noise);
        HvaeGrads grads;
        hvae_backward(model, trace, x, grads);

        std::vector<std::pair<Matrix*, const Matrix*>> pairs;
        auto add = [&](DenseLayer& layer, const LayerGrads& g) {
            pairs.emplace_back(&layer.weights, &g.dw);
            pairs.emplace_back(&layer.bias, &g.db);
        };
        for (std::size_t l = 0; l < 3; ++l) add(model.enc.layers[l], grads.enc.layers[l]);
        add(model.unit1.mu_head, grads.mu1);
        add(model.unit1.logvar_head, grads.logvar1);
        add(model.unit1.dec, grads.dec1);
        add(model.unit2.mu_head, grads.mu2);
        add(model.unit2.logvar_head, grads.logvar2);
        add(model.unit2.dec, grads.dec2);
        for (std::size_t l = 0; l < 3; ++l) add(model.dec.layers[l], grads.dec.layers[l]);

        for (auto& [params, grad] : pairs) {
            for (std::size_t i = 0; i < params->data.size(); ++i) {
                const double numeric = oracle::central_difference(
                    [&](double v) {
                        const double saved = params->data[i];
                        params->data[i] = v;
                        const double out =
                            total_loss(forward_hvae(model, x, &noise), x, cfg).total;
                        params->data[i] = saved;
                        return out;
                    },
                    params->data[i]);
                worst_model =
                    std::max(worst_model, oracle::gradient_error(grad->data[i], numeric));
            }
        }
    }

    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "layer rel err %.2e (<= 1e-4), full-model rel err %.2e (<= 1e-3)", worst_layer,
                  worst_model);
    return {1, worst_layer <= 1e-4 && worst_model <= 1e-3, buf};
}

Criterion criterion_kl_oracles() {
    Rng rng(2001);
    double worst_closed = 0.0;
    for (int i = 0; i < 100; ++i) {
        const double mu = rng.uniform(-3.0, 3.0);
        const double sigma = rng.uniform(0.1, 3.0);
        worst_closed = std::max(worst_closed, std::abs(kl_standard_normal_term(mu, sigma) -
                                                       oracle::kl_quad_standard_normal(mu, sigma)));
    }

    int violations = 0;
    for (int i = 0; i < 100; ++i) {
        const double mu = rng.uniform(-3.0, 3.0);
        const double sigma = rng.uniform(0.1, 3.0);
        const double m = rng.uniform(0.1, 3.0);
        const double s = rng.uniform(0.1, 3.0);
        const double bound = kl_double_peak_bound_term(mu, sigma, m, s);
        const double quad = oracle::kl_quad_double_peak(mu, sigma, m, s);
        if (bound < quad - 1e-9) ++violations;
    }

    // Documented accuracy grid of the closed-form approximation.
    double worst_rel = 0.0;
    for (double ms : {2.0, 2.5, 3.0, 4.0, 5.0}) {
        for (double mf : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            for (double sf : {0.1, 0.2}) {
                const double m = ms;
                const double mu = mf * m;
                const double sigma = sf;
                const double approx = kl_double_peak_exact_term(mu, sigma, m, 1.0);
                const double quad = oracle::kl_quad_double_peak(mu, sigma, m, 1.0);
                worst_rel = std::max(worst_rel, std::abs(approx - quad) / std::abs(quad));
            }
        }
    }
    const double frozen = 0.082568570036384806;
    const bool fixture_ok = std::abs(worst_rel - frozen) < 1e-9;

    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "closed-form vs quadrature %.2e (<= 1e-9), bound violations %d/100, grid max "
                  "rel %.4f (<= 0.10, fixture %.4f)",
                  worst_closed, violations, worst_rel, frozen);
    return {2, worst_closed <= 1e-9 && violations == 0 && worst_rel <= 0.10 && fixture_ok, buf};
}

Criterion criterion_erfc_fixture() {
    double max_err = 0.0;
    for (int i = 0; i <= 3000; ++i) {
        const double x = static_cast<double>(i) * 0.001;
        max_err = std::max(max_err, std::abs(erfc_tanh_approx(x) - oracle::erfc_series(x)));
    }
    const double frozen = 0.021265255496906721;
    char buf[120];
    std::snprintf(buf, sizeof(buf), "max |surrogate - erfc| on [0,3] = %.17g (fixture %.17g)",
                  max_err, frozen);
    return {3, max_err == frozen, buf};
}

Criterion criterion_metrics_grid() {
    std::uint64_t checked = 0;
    for (std::uint64_t tl = 0; tl <= 20; ++tl) {
        for (std::uint64_t fa = 0; fa <= 20; ++fa) {
            for (std::uint64_t fl = 0; fl <= 20; ++fl) {
                for (std::uint64_t ta = 0; ta <= 20; ta += 5) {
                    const ConfusionMatrix cm{tl, fa, fl, ta};
                    const Rate ca = p_ca(cm);
                    const Rate noa = p_noa(cm);
                    if ((tl + fl == 0) != !ca.has_value()) return {4, false, "p_ca sentinel"};
                    if ((tl + fa == 0) != !noa.has_value()) return {4, false, "p_noa sentinel"};
                    if (!ca || !noa) continue;
                    if (std::abs(*ca - static_cast<double>(tl) / static_cast<double>(tl + fl)) >
                        1e-12) {
                        return {4, false, "p_ca definition"};
                    }
                    if (std::abs(*noa - static_cast<double>(tl) / static_cast<double>(tl + fa)) >
                        1e-12) {
                        return {4, false, "p_noa definition"};
                    }
                    const Rate f = f1(cm);
                    const Rate fb = f_beta(cm, 1.0);
                    if (f.has_value() != fb.has_value()) return {4, false, "f1 vs f_beta(1)"};
                    if (f && std::abs(*f - *fb) > 1e-12) return {4, false, "f1 != f_beta(1)"};
                    if (f) {
                        const double expect = 2.0 * *ca * *noa / (*ca + *noa);
                        if (std::abs(*f - expect) > 1e-12) return {4, false, "harmonic mean"};
                        if (*f < -1e-12 || *f > 1.0 + 1e-12) return {4, false, "f1 range"};
                        if (std::abs(*f - 1.0) < 1e-12 && (fa != 0 || fl != 0 || tl == 0)) {
                            return {4, false, "f1 == 1 characterization"};
                        }
                    }
                    // Larger beta weights P_noa more: the measure moves toward it.
                    const Rate low = f_beta(cm, 0.5);
                    const Rate high = f_beta(cm, 2.0);
                    if (low && high) {
                        if (*noa > *ca && *high < *low - 1e-12) {
                            return {4, false, "beta monotonicity (toward p_noa)"};
                        }
                        if (*noa < *ca && *high > *low + 1e-12) {
                            return {4, false, "beta monotonicity (toward p_ca)"};
                        }
                    }
                    ++checked;
                }
            }
        }
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "identities over %llu defined grid cells",
                  static_cast<unsigned long long>(checked));
    return {4, true, buf};
}

Criterion criterion_static_ordering() {
    const std::size_t n = std::size(kSeeds);
    g_static_hvae.assign(n, {});
    std::vector<AuthReport> tb(n);
    std::vector<AuthReport> ae(n);
    std::vector<Dataset> datasets(n);
    for (std::size_t i = 0; i < n; ++i) datasets[i] = gen_static_dataset(kSeeds[i], 40);

    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < n; ++i) {
        jobs.push_back([&, i] {
            g_static_hvae[i] =
                run_protocol(datasets[i], static_protocol(ModelKind::TfHvae, kSeeds[i]));
        });
        jobs.push_back([&, i] {
            tb[i] = run_protocol(datasets[i], static_protocol(ModelKind::TbAe, kSeeds[i]));
        });
        jobs.push_back([&, i] {
            ae[i] = run_protocol(datasets[i], static_protocol(ModelKind::TfAe, kSeeds[i]));
        });
    }
    run_jobs(jobs);

    int ordered = 0;
    double hvae_sum = 0.0;
    std::string per_seed;
    for (std::size_t i = 0; i < n; ++i) {
        const double h = g_static_hvae[i].average_f1;
        const double t = tb[i].average_f1;
        const double a = ae[i].average_f1;
        hvae_sum += h;
        if (h >= t && t >= a) ++ordered;
        char buf[80];
        std::snprintf(buf, sizeof(buf), " s%llu:%.3f/%.3f/%.3f",
                      static_cast<unsigned long long>(kSeeds[i]), h, t, a);
        per_seed += buf;
    }
    const double hvae_mean = hvae_sum / static_cast<double>(n);
    char buf[240];
    std::snprintf(buf, sizeof(buf),
                  "TF-HVAE >= TB-AE >= TF-AE on %d/5 seeds (need 4), TF-HVAE mean F1 %.4f (>= "
                  "0.95);%s",
                  ordered, hvae_mean, per_seed.c_str());
    return {5, ordered >= 4 && hvae_mean >= 0.95, buf};
}

Criterion criterion_distance_effect() {
    if (g_static_hvae.empty()) return {6, false, "static runs unavailable"};
    int clean_seeds = 0;
    std::string detail;
    for (std::size_t i = 0; i < g_static_hvae.size(); ++i) {
        std::vector<NodeResult> nodes = g_static_hvae[i].per_node;
        std::sort(nodes.begin(), nodes.end(), [](const NodeResult& a, const NodeResult& b) {
            return a.distance_to_alice < b.distance_to_alice;
        });
        // Within a one-node band: an entry may dip below the running best by
        // at most kDistanceBand, and at most once.
        int violations = 0;
        double running = 0.0;
        for (const auto& node : nodes) {
            const double f = node.f1_score.value_or(0.0);
            if (f < running - kDistanceBand) ++violations;
            running = std::max(running, f);
        }
        if (violations <= 1) ++clean_seeds;
        detail += " s" + std::to_string(kSeeds[i]) + ":" + std::to_string(violations);
    }
    char buf[160];
    std::snprintf(buf, sizeof(buf),
                  "distance-monotone within band on %d/5 seeds (need 4); violations per seed:%s",
                  clean_seeds, detail.c_str());
    return {6, clean_seeds >= 4, buf};
}

Criterion criterion_mobile_ordering() {
    const std::size_t n = std::size(kSeeds);
    const std::size_t r = std::size(kRestartOffsets);
    const ModelKind kinds[] = {ModelKind::TfHvae, ModelKind::TbAe, ModelKind::TfVae,
                               ModelKind::TfAe};
    std::vector<Dataset> datasets(n);
    for (std::size_t i = 0; i < n; ++i) {
        datasets[i] = gen_mobile_dataset(kSeeds[i], 40, kMobileInterval);
    }
    // mean over restarts, indexed [seed][model]
    std::vector<std::array<double, 4>> means(n, {0.0, 0.0, 0.0, 0.0});
    std::vector<std::function<void()>> jobs;
    std::vector<double> slots(n * 4 * r, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            for (std::size_t j = 0; j < r; ++j) {
                jobs.push_back([&, i, k, j] {
                    const auto report = run_protocol(
                        datasets[i],
                        mobile_protocol(kinds[k], kSeeds[i] + kRestartOffsets[j]));
                    slots[(i * 4 + k) * r + j] = report.average_f1;
                });
            }
        }
    }
    run_jobs(jobs);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < 4; ++k) {
            double acc = 0.0;
            for (std::size_t j = 0; j < r; ++j) acc += slots[(i * 4 + k) * r + j];
            means[i][k] = acc / static_cast<double>(r);
        }
    }

    int ordered = 0;
    std::string per_seed;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& m = means[i];
        if (m[0] > m[1] && m[1] > m[2] && m[2] > m[3]) ++ordered;
        char buf[96];
        std::snprintf(buf, sizeof(buf), " s%llu:%.3f/%.3f/%.3f/%.3f",
                      static_cast<unsigned long long>(kSeeds[i]), m[0], m[1], m[2], m[3]);
        per_seed += buf;
    }
    char buf[300];
    std::snprintf(buf, sizeof(buf),
                  "TF-HVAE > TB-AE > TF-VAE > TF-AE (means over %zu restarts) on %d/5 seeds "
                  "(need 4);%s",
                  r, ordered, per_seed.c_str());
    return {7, ordered >= 4, buf};
}

Criterion criterion_interval_sweep() {
    const std::size_t n = std::size(kSeeds);
    const std::uint32_t intervals = 10;
    std::vector<double> mean_f1(intervals, 0.0);
    std::vector<double> slots(n * intervals, 0.0);
    std::vector<std::function<void()>> jobs;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::uint32_t interval = 1; interval <= intervals; ++interval) {
            jobs.push_back([&, i, interval] {
                const Dataset d = gen_mobile_dataset(kSeeds[i], 40, interval);
                const auto report =
                    run_protocol(d, mobile_protocol(ModelKind::TfHvae, kSeeds[i]));
                // Common position window: the walk positions k >= 10 carry
                // spoofing traffic at every interval in the sweep, so the
                // per-interval means compare identical position sets.
                double acc = 0.0;
                std::size_t count = 0;
                for (const auto& node : report.per_node) {
                    if (node.node_id + interval < 10) continue;
                    if (!node.f1_score) continue;
                    acc += *node.f1_score;
                    ++count;
                }
                slots[i * intervals + (interval - 1)] =
                    count > 0 ? acc / static_cast<double>(count) : 0.0;
            });
        }
    }
    run_jobs(jobs);
    for (std::uint32_t interval = 0; interval < intervals; ++interval) {
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += slots[i * intervals + interval];
        mean_f1[interval] = acc / static_cast<double>(n);
    }

    bool nondecreasing = true;
    double max_dip = 0.0;
    std::string curve;
    for (std::uint32_t i = 0; i < intervals; ++i) {
        if (i > 0) {
            max_dip = std::max(max_dip, mean_f1[i - 1] - mean_f1[i]);
            if (mean_f1[i] < mean_f1[i - 1] - kIntervalTolerance) nondecreasing = false;
        }
        char buf[32];
        std::snprintf(buf, sizeof(buf), " %.3f", mean_f1[i]);
        curve += buf;
    }
    char buf[300];
    std::snprintf(buf, sizeof(buf),
                  "mean F1 nondecreasing over intervals 1..10 (max dip %.4f, tolerance %.3f):%s",
                  max_dip, kIntervalTolerance, curve.c_str());
    return {8, nondecreasing, buf};
}

Criterion criterion_convergence() {
    if (g_static_hvae.empty()) return {9, false, "static runs unavailable"};
    int converged = 0;
    std::string detail;
    for (std::size_t i = 0; i < g_static_hvae.size(); ++i) {
        const auto& history = g_static_hvae[i].loss_history;
        if (history.empty()) continue;
        double best = history.front().total;
        for (const auto& epoch : history) best = std::min(best, epoch.total);
        const double ratio = best / history.front().total;
        if (history.size() <= 100 && ratio <= 0.01) ++converged;
        char buf[48];
        std::snprintf(buf, sizeof(buf), " s%llu:%.2f%%",
                      static_cast<unsigned long long>(kSeeds[i]), 100.0 * ratio);
        detail += buf;
    }
    char buf[200];
    std::snprintf(buf, sizeof(buf),
                  "loss reaches <= 1%% of its first-epoch value within 100 epochs on %d/5 "
                  "seeds (need 5);%s",
                  converged, detail.c_str());
    return {9, converged == 5, buf};
}

Criterion criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path tmp(CIRAUTH_TEST_TMP);
    fs::create_directories(tmp);
    auto slurp = [](const fs::path& path) {
        std::ifstream in(path, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    };

    // Datasets: identical seeds, byte-identical files; round-trip equality.
    const Dataset d1 = gen_static_dataset(99, 5);
    const Dataset d2 = gen_static_dataset(99, 5);
    save_dataset(d1, (tmp / "det_a.cir").string());
    save_dataset(d2, (tmp / "det_b.cir").string());
    const bool dataset_bytes = slurp(tmp / "det_a.cir") == slurp(tmp / "det_b.cir");
    const bool dataset_roundtrip = load_dataset((tmp / "det_a.cir").string()) == d1;

    const Dataset mobile = gen_mobile_dataset(99, 5, 2);
    save_dataset(mobile, (tmp / "det_m.cir").string());
    const bool mobile_roundtrip = load_dataset((tmp / "det_m.cir").string()) == mobile;

    // Experiments: identical configs give byte-identical checkpoints/reports.
    ExperimentConfig cfg;
    cfg.scenario = "static";
    cfg.seed = 99;
    cfg.samples_per_node = 6;
    cfg.train_per_node = 4;
    cfg.test_per_node = 2;
    cfg.h = 16;
    cfg.z = 8;
    cfg.kl2_weight = 0.001;
    cfg.kl3_weight = 0.001;
    cfg.epochs = 5;
    cfg.learning_rate = 0.005;
    cfg.out_dir = (tmp / "det_run_a").string();
    run_experiment(cfg);
    ExperimentConfig cfg2 = cfg;
    cfg2.out_dir = (tmp / "det_run_b").string();
    run_experiment(cfg2);
    bool artifacts = true;
    for (const char* name : {"model.hvae", "report.csv", "loss_history.csv", "dataset.cir"}) {
        artifacts = artifacts && slurp(fs::path(cfg.out_dir) / name) ==
                                     slurp(fs::path(cfg2.out_dir) / name);
    }

    // Checkpoint round-trip is weight-exact.
    const AnyModel model = load_model((fs::path(cfg.out_dir) / "model.hvae").string());
    save_model(model, (tmp / "det_model2.hvae").string());
    const bool model_roundtrip =
        slurp(fs::path(cfg.out_dir) / "model.hvae") == slurp(tmp / "det_model2.hvae");

    std::string detail = std::string("dataset bytes ") + (dataset_bytes ? "ok" : "DIFFER") +
                         ", dataset round-trip " + (dataset_roundtrip ? "ok" : "BROKEN") +
                         ", mobile round-trip " + (mobile_roundtrip ? "ok" : "BROKEN") +
                         ", run artifacts " + (artifacts ? "ok" : "DIFFER") +
                         ", checkpoint round-trip " + (model_roundtrip ? "ok" : "BROKEN");
    return {10,
            dataset_bytes && dataset_roundtrip && mobile_roundtrip && artifacts && model_roundtrip,
            detail};
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> wanted;
    for (int i = 1; i < argc; ++i) wanted.push_back(std::atoi(argv[i]));
    auto selected = [&](int id) {
        return wanted.empty() || std::find(wanted.begin(), wanted.end(), id) != wanted.end();
    };

    using CriterionFn = Criterion (*)();
    const std::pair<int, CriterionFn> table[] = {
        {1, criterion_gradients},       {2, criterion_kl_oracles},
        {3, criterion_erfc_fixture},    {4, criterion_metrics_grid},
        {5, criterion_static_ordering}, {6, criterion_distance_effect},
        {7, criterion_mobile_ordering}, {8, criterion_interval_sweep},
        {9, criterion_convergence},     {10, criterion_determinism},
    };

    int failures = 0;
    for (const auto& [id, fn] : table) {
        if (!selected(id)) continue;
        if ((id == 6 || id == 9) && g_static_hvae.empty() && !selected(5)) {
            // C6 and C9 reuse the C5 runs.
            criterion_static_ordering();
        }
        const auto start = std::chrono::steady_clock::now();
        const Criterion result = fn();
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] C%d (%5.1fs): %s\n", result.pass ? "PASS" : "FAIL", result.id, seconds,
                    result.detail.c_str());
        std::fflush(stdout);
        if (!result.pass) ++failures;
    }
    return failures;
}
