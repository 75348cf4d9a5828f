#ifndef VNFOPT_FORECAST_HPP
#define VNFOPT_FORECAST_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "vnfopt/traffic.hpp"

namespace vnfopt {

struct AdamConfig {
    double lr = 1e-3;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct ForecastConfig {
    int hidden_units = 8;
    AdamConfig adam;
    int batch_size = 4;
    double validation_fraction = 0.10; // chronological tail of the training pairs
    double min_delta = 0.001;
    int patience = 10;
    int max_epochs = 1000; // safety cap, early stopping is the intended exit
    int train_periods = 50;
    int horizon = 6; // prediction shift in samples
    int samples_per_period = 24;
    int bptt_window = 24;
    bool relu_readout = true;
};

// Single-layer LSTM, input and output width 1. Gate order: input, forget,
// candidate, output; packed row-major [4H] x [1] and [4H] x [H].
struct LstmModel {
    int hidden = 8;
    std::vector<double> w_in;  // 4H
    std::vector<double> w_rec; // 4H x H
    std::vector<double> bias;  // 4H
    std::vector<double> w_out; // H
    double b_out = 0.0;
    double norm_min = 0.0;
    double norm_max = 1.0;
    bool relu_readout = true;

    double norm_span() const {
        const double s = norm_max - norm_min;
        return s > 0.0 ? s : 1.0;
    }
    double normalize(double x) const { return (x - norm_min) / norm_span(); }
    double denormalize(double y) const { return norm_min + y * norm_span(); }
};

struct TrainReport {
    int epochs_run = 0;
    double final_val_loss = 0.0;
    double best_val_loss = 0.0;
    double train_seconds = 0.0;
};

// Trains on the first train_periods periods of the series (min-max normalized
// over that span only); the last 10% of one-step pairs are the validation
// tail. Throws std::invalid_argument when the series is shorter than
// (train_periods + 1) periods, std::runtime_error on non-finite loss.
LstmModel train(const DemandSeries& series, const ForecastConfig& cfg, std::uint64_t seed,
                TrainReport* report = nullptr);

// Feeds the full history through the cell, then rolls forward h-1 steps on
// its own predictions; result is de-normalized and clamped at >= 0.
double predict_horizon(const LstmModel& model, const std::vector<double>& history, int h);

// Max relative error between backprop-through-time gradients and central
// finite differences over every parameter, on one batch of normalized-scale
// windows. Runs with the identity readout (finite differences are invalid at
// the ReLU kink).
double gradient_check(const LstmModel& model, const std::vector<std::vector<double>>& inputs,
                      const std::vector<std::vector<double>>& targets, double fd_step = 1e-5);

struct RmsePoint {
    int train_periods = 0;
    double rmse = 0.0; // normalized scale, one-step, final period of the series
    double train_seconds = 0.0;
};

std::vector<RmsePoint> evaluate_rmse(const DemandSeries& series, const ForecastConfig& cfg,
                                     const std::vector<int>& train_periods_list,
                                     std::uint64_t seed);

// last-value baseline under the identical evaluation protocol
double naive_rmse(const DemandSeries& series, const ForecastConfig& cfg, int train_periods);

std::string model_to_json(const LstmModel& model);
LstmModel model_from_json(const std::string& text);

// per-flow model store: key is (group index, flow index) in the dataset
struct ForecastStore {
    ForecastConfig config;
    std::vector<std::vector<LstmModel>> models; // [group][flow]
};

void save_store(const ForecastStore& store, const std::string& path);
ForecastStore load_store(const std::string& path);

} // namespace vnfopt

#endif
