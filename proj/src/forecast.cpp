#include "vnfopt/forecast.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "vnfopt/rng.hpp"

namespace vnfopt {

namespace {

double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct StepCache {
    double x;
    std::vector<double> i, f, g, o, c, tanh_c, h;
    double y_pre, y;
};

struct Grads {
    std::vector<double> w_in, w_rec, bias, w_out;
    double b_out = 0.0;

    explicit Grads(int hidden)
        : w_in(4 * hidden, 0.0),
          w_rec(static_cast<size_t>(4 * hidden) * hidden, 0.0),
          bias(4 * hidden, 0.0),
          w_out(hidden, 0.0) {}
};

struct Cell {
    const LstmModel& m;
    int H;

    explicit Cell(const LstmModel& model) : m(model), H(model.hidden) {}

    void step(double x, const std::vector<double>& h_prev, const std::vector<double>& c_prev,
              StepCache& cache) const {
        cache.x = x;
        cache.i.resize(H);
        cache.f.resize(H);
        cache.g.resize(H);
        cache.o.resize(H);
        cache.c.resize(H);
        cache.tanh_c.resize(H);
        cache.h.resize(H);
        for (int j = 0; j < H; ++j) {
            double zi = m.w_in[j] * x + m.bias[j];
            double zf = m.w_in[H + j] * x + m.bias[H + j];
            double zg = m.w_in[2 * H + j] * x + m.bias[2 * H + j];
            double zo = m.w_in[3 * H + j] * x + m.bias[3 * H + j];
            for (int k = 0; k < H; ++k) {
                zi += m.w_rec[static_cast<size_t>(j) * H + k] * h_prev[k];
                zf += m.w_rec[static_cast<size_t>(H + j) * H + k] * h_prev[k];
                zg += m.w_rec[static_cast<size_t>(2 * H + j) * H + k] * h_prev[k];
                zo += m.w_rec[static_cast<size_t>(3 * H + j) * H + k] * h_prev[k];
            }
            cache.i[j] = sigmoid(zi);
            cache.f[j] = sigmoid(zf);
            cache.g[j] = std::tanh(zg);
            cache.o[j] = sigmoid(zo);
            cache.c[j] = cache.f[j] * c_prev[j] + cache.i[j] * cache.g[j];
            cache.tanh_c[j] = std::tanh(cache.c[j]);
            cache.h[j] = cache.o[j] * cache.tanh_c[j];
        }
        cache.y_pre = m.b_out;
        for (int j = 0; j < H; ++j) cache.y_pre += m.w_out[j] * cache.h[j];
        cache.y = m.relu_readout ? std::max(0.0, cache.y_pre) : cache.y_pre;
    }

    // squared-error sum over the window; caches kept for backward
    double forward(const std::vector<double>& xs, const std::vector<double>& ys,
                   std::vector<StepCache>& caches) const {
        std::vector<double> h(H, 0.0), c(H, 0.0);
        caches.resize(xs.size());
        double sq = 0.0;
        for (size_t t = 0; t < xs.size(); ++t) {
            step(xs[t], h, c, caches[t]);
            h = caches[t].h;
            c = caches[t].c;
            const double e = caches[t].y - ys[t];
            sq += e * e;
        }
        return sq;
    }

    // dLoss/dy[t] = scale * 2 * (y - target); accumulates into grads
    void backward(const std::vector<double>& xs, const std::vector<double>& ys, double scale,
                  const std::vector<StepCache>& caches, Grads& grads) const {
        std::vector<double> dh(H, 0.0), dc(H, 0.0);
        std::vector<double> dz(4 * H);
        const std::vector<double> zeros(H, 0.0);
        for (size_t t = xs.size(); t-- > 0;) {
            const StepCache& cc = caches[t];
            double dy = scale * 2.0 * (cc.y - ys[t]);
            if (m.relu_readout && cc.y_pre <= 0.0) dy = 0.0;
            grads.b_out += dy;
            for (int j = 0; j < H; ++j) {
                grads.w_out[j] += dy * cc.h[j];
                dh[j] += dy * m.w_out[j];
            }
            const std::vector<double>& h_prev = t > 0 ? caches[t - 1].h : zeros;
            const std::vector<double>& c_prev = t > 0 ? caches[t - 1].c : zeros;
            for (int j = 0; j < H; ++j) {
                const double do_ = dh[j] * cc.tanh_c[j];
                dc[j] += dh[j] * cc.o[j] * (1.0 - cc.tanh_c[j] * cc.tanh_c[j]);
                const double di = dc[j] * cc.g[j];
                const double df = dc[j] * c_prev[j];
                const double dg = dc[j] * cc.i[j];
                dz[j] = di * cc.i[j] * (1.0 - cc.i[j]);
                dz[H + j] = df * cc.f[j] * (1.0 - cc.f[j]);
                dz[2 * H + j] = dg * (1.0 - cc.g[j] * cc.g[j]);
                dz[3 * H + j] = do_ * cc.o[j] * (1.0 - cc.o[j]);
                dc[j] *= cc.f[j];
            }
            std::fill(dh.begin(), dh.end(), 0.0);
            for (int r = 0; r < 4 * H; ++r) {
                grads.w_in[r] += dz[r] * cc.x;
                grads.bias[r] += dz[r];
                for (int k = 0; k < H; ++k) {
                    grads.w_rec[static_cast<size_t>(r) * H + k] += dz[r] * h_prev[k];
                    dh[k] += dz[r] * m.w_rec[static_cast<size_t>(r) * H + k];
                }
            }
        }
    }
};

std::vector<double*> param_ptrs(LstmModel& m) {
    std::vector<double*> ptrs;
    for (auto& v : m.w_in) ptrs.push_back(&v);
    for (auto& v : m.w_rec) ptrs.push_back(&v);
    for (auto& v : m.bias) ptrs.push_back(&v);
    for (auto& v : m.w_out) ptrs.push_back(&v);
    ptrs.push_back(&m.b_out);
    return ptrs;
}

std::vector<double> grad_values(const Grads& g) {
    std::vector<double> out;
    out.insert(out.end(), g.w_in.begin(), g.w_in.end());
    out.insert(out.end(), g.w_rec.begin(), g.w_rec.end());
    out.insert(out.end(), g.bias.begin(), g.bias.end());
    out.insert(out.end(), g.w_out.begin(), g.w_out.end());
    out.push_back(g.b_out);
    return out;
}

struct Adam {
    AdamConfig cfg;
    std::vector<double> m, v;
    long t = 0;

    explicit Adam(size_t n, const AdamConfig& c) : cfg(c), m(n, 0.0), v(n, 0.0) {}

    void step(const std::vector<double*>& params, const std::vector<double>& grads) {
        ++t;
        const double corr1 = 1.0 - std::pow(cfg.beta1, t);
        const double corr2 = 1.0 - std::pow(cfg.beta2, t);
        for (size_t i = 0; i < params.size(); ++i) {
            m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * grads[i];
            v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * grads[i] * grads[i];
            *params[i] -= cfg.lr * (m[i] / corr1) / (std::sqrt(v[i] / corr2) + cfg.eps);
        }
    }
};

LstmModel init_model(const ForecastConfig& cfg, Rng& rng) {
    LstmModel m;
    m.hidden = cfg.hidden_units;
    m.relu_readout = cfg.relu_readout;
    const int H = m.hidden;
    m.w_in.resize(4 * H);
    m.w_rec.resize(static_cast<size_t>(4 * H) * H);
    m.bias.assign(4 * H, 0.0);
    m.w_out.resize(H);
    for (auto& v : m.w_in) v = rng.uniform(-0.5, 0.5);
    const double rec_scale = 1.0 / std::sqrt(static_cast<double>(H));
    for (auto& v : m.w_rec) v = rng.uniform(-0.5, 0.5) * rec_scale;
    for (auto& v : m.w_out) v = rng.uniform(-0.5, 0.5) * rec_scale;
    m.b_out = 0.0;
    return m;
}

} // namespace

LstmModel train(const DemandSeries& series, const ForecastConfig& cfg, std::uint64_t seed,
                TrainReport* report) {
    const auto t0 = std::chrono::steady_clock::now();
    const int spp = cfg.samples_per_period;
    if (cfg.train_periods < 1) throw std::invalid_argument("train_periods must be >= 1");
    const size_t need = static_cast<size_t>(cfg.train_periods + 1) * spp;
    if (series.values.size() < need)
        throw std::invalid_argument("series too short: need " + std::to_string(need) +
                                    " samples, have " + std::to_string(series.values.size()));

    const size_t n = static_cast<size_t>(cfg.train_periods) * spp;
    Rng rng(seed);
    LstmModel model = init_model(cfg, rng);
    model.norm_min = *std::min_element(series.values.begin(), series.values.begin() + n);
    model.norm_max = *std::max_element(series.values.begin(), series.values.begin() + n);

    std::vector<double> x(n);
    for (size_t t = 0; t < n; ++t) x[t] = model.normalize(series.values[t]);

    const size_t pairs = n - 1;
    const size_t val_count =
        std::min(pairs - 1, std::max<size_t>(1, static_cast<size_t>(std::llround(
                                                    cfg.validation_fraction * pairs))));
    const size_t train_count = pairs - val_count;

    std::vector<size_t> starts;
    for (size_t w = 0; w < train_count; w += cfg.bptt_window) starts.push_back(w);

    Cell cell(model);
    Adam adam(param_ptrs(model).size(), cfg.adam);
    const auto params = param_ptrs(model);

    auto validation_loss = [&]() {
        std::vector<double> h(model.hidden, 0.0), c(model.hidden, 0.0);
        StepCache cache;
        double sq = 0.0;
        for (size_t t = 0; t + 1 < n; ++t) {
            cell.step(x[t], h, c, cache);
            h = cache.h;
            c = cache.c;
            if (t >= train_count) {
                const double e = cache.y - x[t + 1];
                sq += e * e;
            }
        }
        return sq / static_cast<double>(val_count);
    };

    double best_val = kUnbounded;
    double last_val = kUnbounded;
    int best_epoch = 0;
    int epoch = 0;
    while (epoch < cfg.max_epochs) {
        ++epoch;
        // window order reshuffled each epoch
        for (size_t i = starts.size(); i > 1; --i)
            std::swap(starts[i - 1],
                      starts[static_cast<size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i) - 1))]);

        for (size_t b = 0; b < starts.size(); b += cfg.batch_size) {
            const size_t b_end = std::min(starts.size(), b + cfg.batch_size);
            size_t total_steps = 0;
            for (size_t wi = b; wi < b_end; ++wi)
                total_steps += std::min<size_t>(cfg.bptt_window, train_count - starts[wi]);
            Grads grads(model.hidden);
            double batch_sq = 0.0;
            for (size_t wi = b; wi < b_end; ++wi) {
                const size_t w0 = starts[wi];
                const size_t len = std::min<size_t>(cfg.bptt_window, train_count - w0);
                std::vector<double> xs(x.begin() + w0, x.begin() + w0 + len);
                std::vector<double> ys(x.begin() + w0 + 1, x.begin() + w0 + 1 + len);
                std::vector<StepCache> caches;
                batch_sq += cell.forward(xs, ys, caches);
                cell.backward(xs, ys, 1.0 / static_cast<double>(total_steps), caches, grads);
            }
            if (!std::isfinite(batch_sq))
                throw std::runtime_error("training diverged: non-finite loss");
            adam.step(params, grad_values(grads));
        }

        last_val = validation_loss();
        if (!std::isfinite(last_val))
            throw std::runtime_error("training diverged: non-finite validation loss");
        if (last_val < best_val - cfg.min_delta) {
            best_val = last_val;
            best_epoch = epoch;
        } else if (epoch - best_epoch >= cfg.patience) {
            break;
        }
    }

    if (report != nullptr) {
        report->epochs_run = epoch;
        report->final_val_loss = last_val;
        report->best_val_loss = best_val;
        report->train_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
    return model;
}

double predict_horizon(const LstmModel& model, const std::vector<double>& history, int h) {
    if (history.empty()) throw std::invalid_argument("history is empty");
    if (h < 1) throw std::invalid_argument("horizon must be >= 1");
    Cell cell(model);
    std::vector<double> hs(model.hidden, 0.0), cs(model.hidden, 0.0);
    StepCache cache;
    double y = 0.0;
    for (double raw : history) {
        cell.step(model.normalize(raw), hs, cs, cache);
        hs = cache.h;
        cs = cache.c;
        y = cache.y;
    }
    for (int k = 1; k < h; ++k) {
        cell.step(y, hs, cs, cache);
        hs = cache.h;
        cs = cache.c;
        y = cache.y;
    }
    return std::max(0.0, model.denormalize(y));
}

double gradient_check(const LstmModel& model, const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets, double fd_step) {
    LstmModel work = model;
    work.relu_readout = false;
    Cell cell(work);

    size_t total_steps = 0;
    for (const auto& xs : inputs) total_steps += xs.size();
    const double scale = 1.0 / static_cast<double>(total_steps);

    auto loss = [&]() {
        double sq = 0.0;
        std::vector<StepCache> caches;
        for (size_t w = 0; w < inputs.size(); ++w) sq += cell.forward(inputs[w], targets[w], caches);
        return sq * scale;
    };

    Grads grads(work.hidden);
    for (size_t w = 0; w < inputs.size(); ++w) {
        std::vector<StepCache> caches;
        cell.forward(inputs[w], targets[w], caches);
        cell.backward(inputs[w], targets[w], scale, caches, grads);
    }
    const std::vector<double> analytic = grad_values(grads);

    const auto params = param_ptrs(work);
    double max_err = 0.0;
    for (size_t i = 0; i < params.size(); ++i) {
        const double saved = *params[i];
        *params[i] = saved + fd_step;
        const double up = loss();
        *params[i] = saved - fd_step;
        const double down = loss();
        *params[i] = saved;
        const double numeric = (up - down) / (2.0 * fd_step);
        const double denom = std::max({std::fabs(analytic[i]), std::fabs(numeric), 1e-6});
        if (std::max(std::fabs(analytic[i]), std::fabs(numeric)) < 1e-10) continue;
        max_err = std::max(max_err, std::fabs(analytic[i] - numeric) / denom);
    }
    return max_err;
}

namespace {

// one-step teacher-forced RMSE over the final period, normalized scale
double eval_rmse_final_period(const LstmModel& model, const DemandSeries& series, int spp) {
    const size_t total = series.values.size();
    const size_t eval_start = total - static_cast<size_t>(spp);
    Cell cell(model);
    std::vector<double> h(model.hidden, 0.0), c(model.hidden, 0.0);
    StepCache cache;
    double sq = 0.0;
    for (size_t t = 0; t + 1 < total; ++t) {
        cell.step(model.normalize(series.values[t]), h, c, cache);
        h = cache.h;
        c = cache.c;
        if (t + 1 >= eval_start) {
            const double e = cache.y - model.normalize(series.values[t + 1]);
            sq += e * e;
        }
    }
    return std::sqrt(sq / spp);
}

} // namespace

std::vector<RmsePoint> evaluate_rmse(const DemandSeries& series, const ForecastConfig& cfg,
                                     const std::vector<int>& train_periods_list,
                                     std::uint64_t seed) {
    const int max_periods = *std::max_element(train_periods_list.begin(), train_periods_list.end());
    const size_t need = static_cast<size_t>(max_periods + 1) * cfg.samples_per_period;
    if (series.values.size() < need)
        throw std::invalid_argument("series too short for requested training periods");
    std::vector<RmsePoint> out;
    for (int count : train_periods_list) {
        ForecastConfig c = cfg;
        c.train_periods = count;
        TrainReport report;
        const LstmModel model =
            train(series, c, derive_seed(seed, {static_cast<std::uint64_t>(count)}), &report);
        RmsePoint point;
        point.train_periods = count;
        point.rmse = eval_rmse_final_period(model, series, cfg.samples_per_period);
        point.train_seconds = report.train_seconds;
        out.push_back(point);
    }
    return out;
}

double naive_rmse(const DemandSeries& series, const ForecastConfig& cfg, int train_periods) {
    const size_t n = static_cast<size_t>(train_periods) * cfg.samples_per_period;
    if (series.values.size() < n + cfg.samples_per_period)
        throw std::invalid_argument("series too short");
    const double lo = *std::min_element(series.values.begin(), series.values.begin() + n);
    const double hi = *std::max_element(series.values.begin(), series.values.begin() + n);
    const double span = hi - lo > 0.0 ? hi - lo : 1.0;
    const size_t total = series.values.size();
    const size_t eval_start = total - static_cast<size_t>(cfg.samples_per_period);
    double sq = 0.0;
    for (size_t t = eval_start; t < total; ++t) {
        const double e = (series.values[t - 1] - series.values[t]) / span;
        sq += e * e;
    }
    return std::sqrt(sq / cfg.samples_per_period);
}

std::string model_to_json(const LstmModel& m) {
    nlohmann::json j;
    j["hidden"] = m.hidden;
    j["w_in"] = m.w_in;
    j["w_rec"] = m.w_rec;
    j["bias"] = m.bias;
    j["w_out"] = m.w_out;
    j["b_out"] = m.b_out;
    j["norm_min"] = m.norm_min;
    j["norm_max"] = m.norm_max;
    j["relu_readout"] = m.relu_readout;
    return j.dump();
}

LstmModel model_from_json(const std::string& text) {
    nlohmann::json j = nlohmann::json::parse(text);
    LstmModel m;
    m.hidden = j.at("hidden").get<int>();
    m.w_in = j.at("w_in").get<std::vector<double>>();
    m.w_rec = j.at("w_rec").get<std::vector<double>>();
    m.bias = j.at("bias").get<std::vector<double>>();
    m.w_out = j.at("w_out").get<std::vector<double>>();
    m.b_out = j.at("b_out").get<double>();
    m.norm_min = j.at("norm_min").get<double>();
    m.norm_max = j.at("norm_max").get<double>();
    m.relu_readout = j.at("relu_readout").get<bool>();
    const size_t H = static_cast<size_t>(m.hidden);
    if (m.w_in.size() != 4 * H || m.w_rec.size() != 4 * H * H || m.bias.size() != 4 * H ||
        m.w_out.size() != H)
        throw std::runtime_error("model store is corrupted: weight shapes do not match");
    return m;
}

void save_store(const ForecastStore& store, const std::string& path) {
    nlohmann::json j;
    j["config"] = {{"hidden_units", store.config.hidden_units},
                   {"train_periods", store.config.train_periods},
                   {"horizon", store.config.horizon},
                   {"samples_per_period", store.config.samples_per_period},
                   {"relu_readout", store.config.relu_readout}};
    nlohmann::json groups = nlohmann::json::array();
    for (const auto& flows : store.models) {
        nlohmann::json row = nlohmann::json::array();
        for (const auto& m : flows) row.push_back(nlohmann::json::parse(model_to_json(m)));
        groups.push_back(row);
    }
    j["models"] = groups;
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model store: " + path);
    out << j.dump();
}

ForecastStore load_store(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open model store: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    nlohmann::json j = nlohmann::json::parse(ss.str());
    ForecastStore store;
    const auto& c = j.at("config");
    store.config.hidden_units = c.at("hidden_units").get<int>();
    store.config.train_periods = c.at("train_periods").get<int>();
    store.config.horizon = c.at("horizon").get<int>();
    store.config.samples_per_period = c.at("samples_per_period").get<int>();
    store.config.relu_readout = c.at("relu_readout").get<bool>();
    for (const auto& row : j.at("models")) {
        std::vector<LstmModel> flows;
        for (const auto& jm : row) flows.push_back(model_from_json(jm.dump()));
        store.models.push_back(std::move(flows));
    }
    return store;
}

} // namespace vnfopt
