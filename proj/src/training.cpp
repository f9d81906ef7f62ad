#include "stocksent/training.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <utility>

#include "stocksent/adam.hpp"
#include "stocksent/errors.hpp"

namespace stocksent {

namespace {

// Restores the previous validation mode even when training throws.
struct ValidationGuard {
    bool prev;
    explicit ValidationGuard(bool enabled) : prev(validation_enabled()) {
        set_validation(enabled);
    }
    ~ValidationGuard() { set_validation(prev); }
};

void check_fraction(double v, const char* name) {
    if (!(v > 0.0 && v < 1.0)) {
        throw ConfigError(std::string(name) + " must be in (0,1), got " + std::to_string(v));
    }
}

}  // namespace

SplitTables chrono_split(const FeatureTable& table, double train_frac, double val_frac,
                         int lookback) {
    check_fraction(train_frac, "train fraction");
    check_fraction(val_frac, "validation fraction");
    if (train_frac + val_frac >= 1.0) {
        throw ConfigError("train + validation fractions must leave room for test, got " +
                          std::to_string(train_frac + val_frac));
    }
    if (lookback < 0) throw ConfigError("lookback must be non-negative");

    const std::size_t n = table.rows.size();
    const std::size_t n_train = static_cast<std::size_t>(train_frac * static_cast<double>(n) + 1e-9);
    const std::size_t n_val = static_cast<std::size_t>(val_frac * static_cast<double>(n) + 1e-9);
    const std::size_t n_test = n - n_train - n_val;

    const std::size_t need = static_cast<std::size_t>(lookback) + 1;
    if (n_train < need || n_val < need || n_test < need) {
        throw InsufficientDataError(
            "chronological split of " + std::to_string(n) + " rows gives segments " +
            std::to_string(n_train) + "/" + std::to_string(n_val) + "/" + std::to_string(n_test) +
            "; every segment needs at least lookback+1 = " + std::to_string(need) + " rows");
    }

    SplitTables out;
    out.train.ticker = out.val.ticker = out.test.ticker = table.ticker;
    out.train.rows.assign(table.rows.begin(), table.rows.begin() + n_train);
    out.val.rows.assign(table.rows.begin() + n_train, table.rows.begin() + n_train + n_val);
    out.test.rows.assign(table.rows.begin() + n_train + n_val, table.rows.end());
    return out;
}

bool ScalerParams::any_degenerate() const {
    for (bool d : degenerate) {
        if (d) return true;
    }
    return false;
}

ScalerParams fit_scaler(const Matrix& train) {
    ScalerParams p;
    p.min.assign(train.cols, std::numeric_limits<double>::infinity());
    p.max.assign(train.cols, -std::numeric_limits<double>::infinity());
    for (int i = 0; i < train.rows; ++i) {
        for (int j = 0; j < train.cols; ++j) {
            p.min[j] = std::min(p.min[j], train(i, j));
            p.max[j] = std::max(p.max[j], train(i, j));
        }
    }
    p.degenerate.resize(train.cols);
    for (int j = 0; j < train.cols; ++j) p.degenerate[j] = p.max[j] == p.min[j];
    return p;
}

Matrix transform(const Matrix& data, const ScalerParams& params) {
    if (data.cols != params.features()) {
        throw ShapeError("scaler fit on " + std::to_string(params.features()) +
                         " features, data has " + std::to_string(data.cols));
    }
    Matrix out(data.rows, data.cols);
    for (int j = 0; j < data.cols; ++j) {
        const double lo = params.min[j];
        const double range = params.max[j] - params.min[j];
        for (int i = 0; i < data.rows; ++i) {
            out(i, j) = params.degenerate[j] ? 0.0 : (data(i, j) - lo) / range;
        }
    }
    return out;
}

Matrix inverse_transform(const Matrix& scaled, const ScalerParams& params) {
    if (scaled.cols != params.features()) {
        throw ShapeError("scaler fit on " + std::to_string(params.features()) +
                         " features, data has " + std::to_string(scaled.cols));
    }
    Matrix out(scaled.rows, scaled.cols);
    for (int j = 0; j < scaled.cols; ++j) {
        for (int i = 0; i < scaled.rows; ++i) {
            out(i, j) = inverse_transform_value(scaled(i, j), params, j);
        }
    }
    return out;
}

double inverse_transform_value(double scaled, const ScalerParams& params, int feature) {
    if (feature < 0 || feature >= params.features()) {
        throw ShapeError("scaler has no feature " + std::to_string(feature));
    }
    if (params.degenerate[feature]) return params.min[feature];
    return scaled * (params.max[feature] - params.min[feature]) + params.min[feature];
}

Matrix feature_matrix(const FeatureTable& table, bool with_sentiment) {
    if (table.rows.empty()) throw InsufficientDataError("feature table is empty");
    Matrix out(static_cast<int>(table.rows.size()), with_sentiment ? 2 : 1);
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        out(static_cast<int>(i), 0) = table.rows[i].adj_close;
        if (with_sentiment) out(static_cast<int>(i), 1) = table.rows[i].mean_compound;
    }
    return out;
}

SupervisedWindows make_windows(const Matrix& scaled, int lookback, bool with_sentiment) {
    if (lookback < 1) throw ConfigError("lookback must be positive, got " + std::to_string(lookback));
    const int features = with_sentiment ? 2 : 1;
    if (scaled.cols < features) {
        throw ShapeError("scaled table has " + std::to_string(scaled.cols) +
                         " columns, need " + std::to_string(features));
    }
    if (scaled.rows <= lookback) {
        throw InsufficientDataError("need more than lookback=" + std::to_string(lookback) +
                                    " rows to build windows, got " + std::to_string(scaled.rows));
    }
    SupervisedWindows out;
    out.lookback = lookback;
    out.feature_names = with_sentiment ? std::vector<std::string>{"adj_close", "sentiment"}
                                       : std::vector<std::string>{"adj_close"};
    for (int t = lookback; t < scaled.rows; ++t) {
        Matrix w(lookback, features);
        for (int r = 0; r < lookback; ++r) {
            for (int j = 0; j < features; ++j) w(r, j) = scaled(t - lookback + r, j);
        }
        out.X.push_back(std::move(w));
        out.y.push_back(scaled(t, 0));
    }
    return out;
}

WindowSplits make_split_windows(const Matrix& scaled, int lookback, bool with_sentiment,
                                int train_rows, int val_rows) {
    if (train_rows < 0 || val_rows < 0 || train_rows + val_rows > scaled.rows) {
        throw ConfigError("split row counts " + std::to_string(train_rows) + "/" +
                          std::to_string(val_rows) + " do not fit " +
                          std::to_string(scaled.rows) + " rows");
    }
    SupervisedWindows all = make_windows(scaled, lookback, with_sentiment);
    WindowSplits out;
    out.train.lookback = out.val.lookback = out.test.lookback = lookback;
    out.train.feature_names = out.val.feature_names = out.test.feature_names = all.feature_names;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const int target_row = lookback + static_cast<int>(i);
        SupervisedWindows& dest = target_row < train_rows             ? out.train
                                  : target_row < train_rows + val_rows ? out.val
                                                                        : out.test;
        dest.X.push_back(std::move(all.X[i]));
        dest.y.push_back(all.y[i]);
    }
    const char* missing = out.train.empty() ? "train"
                          : out.val.empty() ? "validation"
                          : out.test.empty() ? "test"
                                             : nullptr;
    if (missing) {
        throw InsufficientDataError(std::string("the ") + missing +
                                    " split has no windows (lookback " +
                                    std::to_string(lookback) + " over " +
                                    std::to_string(scaled.rows) + " rows)");
    }
    return out;
}

void TrainConfig::validate() const {
    if (max_epochs < 0) throw ConfigError("max_epochs must be non-negative");
    if (batch_size < 1) throw ConfigError("batch_size must be positive");
    if (!(learning_rate > 0.0)) throw ConfigError("learning rate must be positive");
    if (early_stop_patience < 1) throw ConfigError("early-stop patience must be at least 1");
    if (lr_reduce_patience < 1) throw ConfigError("lr-reduce patience must be at least 1");
    if (!(lr_reduce_factor > 0.0 && lr_reduce_factor < 1.0)) {
        throw ConfigError("lr-reduce factor must be in (0,1), got " +
                          std::to_string(lr_reduce_factor));
    }
    if (!(min_lr > 0.0)) throw ConfigError("min_lr must be positive");
    check_fraction(train_fraction, "train fraction");
    check_fraction(val_fraction, "validation fraction");
    if (train_fraction + val_fraction >= 1.0) {
        throw ConfigError("train + validation fractions must be below 1");
    }
}

std::string TrainHistory::to_csv() const {
    std::ostringstream out;
    out << "epoch,train_loss,val_loss,lr,event\n";
    out.precision(17);
    for (const EpochRecord& e : epochs) {
        out << e.epoch << ',' << e.train_loss << ',' << e.val_loss << ',' << e.lr << ','
            << e.event << '\n';
    }
    return out.str();
}

double evaluate_mse(const Network& net, const SupervisedWindows& data) {
    if (data.empty()) throw InsufficientDataError("cannot evaluate on an empty window set");
    double sum = 0.0;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double err = net.predict(data.X[i]) - data.y[i];
        sum += err * err;
    }
    return sum / static_cast<double>(data.size());
}

TrainResult train(const NetworkSpec& spec, const SupervisedWindows& train_set,
                  const SupervisedWindows& val_set, const TrainConfig& config) {
    config.validate();
    spec.validate();
    if (train_set.empty() || val_set.empty()) {
        throw InsufficientDataError("training requires non-empty train and validation splits");
    }
    if (train_set.feature_count() != spec.input_dim || val_set.feature_count() != spec.input_dim) {
        throw ShapeError("network expects " + std::to_string(spec.input_dim) +
                         " features, data has " + std::to_string(train_set.feature_count()) +
                         " (train) and " + std::to_string(val_set.feature_count()) + " (val)");
    }

    SeededRng root(config.seed);
    SeededRng init_rng = root.split(1);
    SeededRng shuffle_rng = root.split(2);
    SeededRng dropout_rng = root.split(3);

    TrainResult result{Network(spec, init_rng), TrainHistory{}};
    Network& net = result.net;
    TrainHistory& history = result.history;
    if (config.max_epochs == 0) return result;

    // NaN predictions surface as divergence, not per-entry validation
    ValidationGuard guard(false);

    AdamState adam = AdamState::for_params(net.params());
    NetworkGrads grads = NetworkGrads::for_network(net);
    const auto params = net.params();
    const auto grad_ptrs = std::as_const(grads).pointers();

    double lr = config.learning_rate;
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<Matrix> best_params;
    int epochs_since_best = 0;
    int epochs_since_lr_best = 0;

    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
        // seeded Fisher-Yates shuffle
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[shuffle_rng.below(i)]);
        }

        double train_err_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t stop = std::min(order.size(), start + config.batch_size);
            const double inv_batch = 1.0 / static_cast<double>(stop - start);
            grads.zero();
            for (std::size_t k = start; k < stop; ++k) {
                const std::size_t idx = order[k];
                ForwardCache cache;
                const double pred = net.forward(train_set.X[idx], true, dropout_rng, &cache);
                const double err = pred - train_set.y[idx];
                train_err_sum += err * err;
                net.backward(2.0 * err * inv_batch, cache, grads);
            }
            adam_step(params, grad_ptrs, adam, lr);
        }
        const double train_loss = train_err_sum / static_cast<double>(train_set.size());

        double val_loss = 0.0;
        for (std::size_t i = 0; i < val_set.size(); ++i) {
            const double err = net.predict(val_set.X[i]) - val_set.y[i];
            val_loss += err * err;
        }
        val_loss /= static_cast<double>(val_set.size());

        if (!std::isfinite(train_loss) || !std::isfinite(val_loss)) {
            throw DivergenceError("loss became non-finite", epoch);
        }

        EpochRecord rec;
        rec.epoch = epoch;
        rec.train_loss = train_loss;
        rec.val_loss = val_loss;
        rec.lr = lr;

        if (val_loss < best_val) {
            best_val = val_loss;
            history.best_epoch = epoch;
            epochs_since_best = 0;
            epochs_since_lr_best = 0;
            best_params.clear();
            for (const Matrix* p : params) best_params.push_back(*p);
        } else {
            ++epochs_since_best;
            ++epochs_since_lr_best;
        }

        if (epochs_since_lr_best >= config.lr_reduce_patience && lr > config.min_lr) {
            lr = std::max(lr * config.lr_reduce_factor, config.min_lr);
            epochs_since_lr_best = 0;
            rec.event = "lr_reduced";
        }
        if (epochs_since_best >= config.early_stop_patience) {
            rec.event += rec.event.empty() ? "early_stop" : "+early_stop";
            history.early_stopped = true;
            history.epochs.push_back(std::move(rec));
            break;
        }
        history.epochs.push_back(std::move(rec));
    }

    history.best_val_loss = best_val;
    if (!best_params.empty()) {
        for (std::size_t k = 0; k < params.size(); ++k) *params[k] = best_params[k];
    }
    return result;
}

void SearchSpace::validate() const {
    if (units.empty()) throw ConfigError("hyperparameter search needs at least one units choice");
    for (int u : units) {
        if (u < 1) throw ConfigError("units choices must be positive, got " + std::to_string(u));
    }
    if (!(dropout_min >= 0.0 && dropout_max < 1.0 && dropout_min <= dropout_max)) {
        throw ConfigError("dropout range must satisfy 0 <= min <= max < 1");
    }
    if (!(lr_min > 0.0 && lr_max >= lr_min)) {
        throw ConfigError("learning-rate range must satisfy 0 < min <= max");
    }
}

SearchResult random_search(const SearchSpace& space, int trials, const NetworkSpec& tmpl,
                           const SupervisedWindows& train_set, const SupervisedWindows& val_set,
                           const TrainConfig& config) {
    space.validate();
    if (trials < 1) throw ConfigError("search needs at least one trial, got " + std::to_string(trials));

    SearchResult out;
    out.best_index = -1;
    double best_loss = std::numeric_limits<double>::infinity();

    SeededRng root(config.seed);
    for (int i = 0; i < trials; ++i) {
        SeededRng trial_rng = root.split(1000 + static_cast<unsigned long long>(i));
        TrialResult trial;
        trial.index = i;
        trial.params.units = space.units[trial_rng.below(space.units.size())];
        trial.params.dropout_rate = trial_rng.uniform(space.dropout_min, space.dropout_max);
        trial.params.learning_rate = trial_rng.log_uniform(space.lr_min, space.lr_max);

        NetworkSpec spec = tmpl;
        spec.hidden.assign(spec.hidden.size(), trial.params.units);
        spec.dropout_rate = trial.params.dropout_rate;

        TrainConfig trial_config = config;
        trial_config.learning_rate = trial.params.learning_rate;
        trial_config.seed = trial_rng.next_u64();

        try {
            TrainResult res = train(spec, train_set, val_set, trial_config);
            trial.best_val_loss = res.history.best_val_loss;
            trial.best_epoch = res.history.best_epoch;
            trial.epochs_run = static_cast<int>(res.history.epochs.size());
        } catch (const DivergenceError&) {
            trial.diverged = true;
            trial.best_val_loss = std::numeric_limits<double>::infinity();
        }

        if (!trial.diverged && trial.best_val_loss < best_loss) {
            best_loss = trial.best_val_loss;
            out.best_index = i;
            out.best = trial.params;
        }
        out.trials.push_back(trial);
    }

    if (out.best_index < 0) {
        throw FitError("every hyperparameter search trial diverged");
    }
    return out;
}

}  // namespace stocksent
