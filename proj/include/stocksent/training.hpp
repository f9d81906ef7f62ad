#pragma once

#include <string>
#include <vector>

#include "stocksent/matrix.hpp"
#include "stocksent/network.hpp"
#include "stocksent/records.hpp"
#include "stocksent/rng.hpp"

namespace stocksent {

// Chronological three-way partition of a feature table, in order.
struct SplitTables {
    FeatureTable train, val, test;
};

// Splits rows into contiguous train/validation/test segments. `lookback`
// is the window length the segments must be able to support: any segment
// shorter than lookback+1 rows raises an insufficient-data error.
SplitTables chrono_split(const FeatureTable& table, double train_frac, double val_frac,
                         int lookback);

// Per-feature min-max parameters fit on the training split only.
struct ScalerParams {
    std::vector<double> min;
    std::vector<double> max;
    std::vector<bool> degenerate;   // max == min; such features scale to 0.0

    int features() const { return static_cast<int>(min.size()); }
    bool any_degenerate() const;
};

// data is samples x features.
ScalerParams fit_scaler(const Matrix& train);
Matrix transform(const Matrix& data, const ScalerParams& params);
Matrix inverse_transform(const Matrix& scaled, const ScalerParams& params);
double inverse_transform_value(double scaled, const ScalerParams& params, int feature);

// Numeric view of a feature table: column 0 adj_close, column 1 sentiment
// when requested.
Matrix feature_matrix(const FeatureTable& table, bool with_sentiment);

// Supervised windows: X[i] is the lookback x features block of rows
// [i, i+lookback); y[i] is the scaled adj_close at row i+lookback.
struct SupervisedWindows {
    std::vector<Matrix> X;
    std::vector<double> y;
    int lookback = 0;
    std::vector<std::string> feature_names;

    std::size_t size() const { return X.size(); }
    bool empty() const { return X.empty(); }
    int feature_count() const { return static_cast<int>(feature_names.size()); }
};

SupervisedWindows make_windows(const Matrix& scaled, int lookback, bool with_sentiment);

// Windows over a full scaled series, assigned to splits by target row so
// train targets strictly predate validation targets, which predate test
// targets. Window inputs may reach back across the boundary; targets never
// do. Row counts refer to the scaled series.
struct WindowSplits {
    SupervisedWindows train, val, test;
};

WindowSplits make_split_windows(const Matrix& scaled, int lookback, bool with_sentiment,
                                int train_rows, int val_rows);

struct HyperParams {
    int units = 50;
    double dropout_rate = 0.2;
    double learning_rate = 1e-3;
};

struct TrainConfig {
    int max_epochs = 200;
    int batch_size = 32;
    double learning_rate = 1e-3;
    int early_stop_patience = 10;
    double lr_reduce_factor = 0.5;
    int lr_reduce_patience = 5;
    double min_lr = 1e-5;
    double train_fraction = 0.7;
    double val_fraction = 0.15;
    unsigned long long seed = 42;

    void validate() const;   // throws ConfigError
};

struct EpochRecord {
    int epoch = 0;           // 1-based
    double train_loss = 0.0;
    double val_loss = 0.0;
    double lr = 0.0;         // rate this epoch trained with
    std::string event;       // "", "lr_reduced", "early_stop", or both
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
    int best_epoch = 0;          // 1-based; 0 = none
    double best_val_loss = 0.0;  // min validation loss over epochs
    bool early_stopped = false;

    std::string to_csv() const;
};

struct TrainResult {
    Network net;
    TrainHistory history;
};

// Mini-batch Adam training of the MSE objective with early stopping
// (best-epoch weights restored) and learning-rate reduction on plateau.
// Fully deterministic for a given seed, config, and data.
TrainResult train(const NetworkSpec& spec, const SupervisedWindows& train_set,
                  const SupervisedWindows& val_set, const TrainConfig& config);

// Mean squared error of inference-mode predictions over a window set.
double evaluate_mse(const Network& net, const SupervisedWindows& data);

struct SearchSpace {
    std::vector<int> units{32, 50, 64, 96, 128};
    double dropout_min = 0.0;
    double dropout_max = 0.5;
    double lr_min = 1e-4;
    double lr_max = 1e-2;

    void validate() const;   // throws ConfigError
};

struct TrialResult {
    int index = 0;
    HyperParams params;
    double best_val_loss = 0.0;
    int best_epoch = 0;
    int epochs_run = 0;
    bool diverged = false;
};

struct SearchResult {
    HyperParams best;
    int best_index = 0;
    std::vector<TrialResult> trials;
};

// Random hyperparameter search: units uniform over the declared set,
// dropout uniform, learning rate log-uniform. Each trial trains on its own
// derived RNG stream; the minimum best-epoch validation loss wins and ties
// break toward the lower trial index.
SearchResult random_search(const SearchSpace& space, int trials, const NetworkSpec& tmpl,
                           const SupervisedWindows& train_set, const SupervisedWindows& val_set,
                           const TrainConfig& config);

}  // namespace stocksent
