#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "stocksent/errors.hpp"
#include "stocksent/training.hpp"

using namespace stocksent;

namespace {

bool near(double a, double b, double tol) { return std::fabs(a - b) <= tol; }

Date day_n(int n) {
    // consecutive calendar days starting 2021-01-01
    int serial = days_from_civil(2021, 1, 1) + n;
    return civil_from_days(serial);
}

FeatureTable synth_table(int n, double (*price)(int), double (*senti)(int)) {
    FeatureTable t;
    t.ticker = "SYN";
    for (int i = 0; i < n; ++i) {
        t.rows.push_back(FeatureRow{day_n(i), price(i), senti(i)});
    }
    return t;
}

double ramp(int i) { return 100.0 + i; }
double flat_senti(int) { return 0.25; }

SupervisedWindows constant_windows(int count, double input, double target) {
    SupervisedWindows w;
    w.lookback = 2;
    w.feature_names = {"adj_close"};
    for (int i = 0; i < count; ++i) {
        w.X.push_back(Matrix(2, 1, input));
        w.y.push_back(target);
    }
    return w;
}

SupervisedWindows noise_windows(int count, SeededRng& rng) {
    SupervisedWindows w;
    w.lookback = 3;
    w.feature_names = {"adj_close"};
    for (int i = 0; i < count; ++i) {
        Matrix x(3, 1);
        for (double& v : x.data) v = rng.uniform01();
        w.X.push_back(std::move(x));
        w.y.push_back(rng.uniform01());
    }
    return w;
}

}  // namespace

TEST_CASE("chronological split partitions rows in order") {
    FeatureTable t = synth_table(100, ramp, flat_senti);
    SplitTables s = chrono_split(t, 0.7, 0.15, 5);
    CHECK(s.train.rows.size() == 70);
    CHECK(s.val.rows.size() == 15);
    CHECK(s.test.rows.size() == 15);
    CHECK(s.train.rows.front().adj_close == 100.0);
    CHECK(s.val.rows.front().adj_close == 170.0);
    CHECK(s.test.rows.back().adj_close == 199.0);

    // concatenating the pieces reproduces the input
    std::vector<FeatureRow> all;
    for (const auto* part : {&s.train, &s.val, &s.test}) {
        all.insert(all.end(), part->rows.begin(), part->rows.end());
    }
    REQUIRE(all.size() == t.rows.size());
    for (std::size_t i = 0; i < all.size(); ++i) {
        CHECK(all[i].adj_close == t.rows[i].adj_close);
        CHECK(all[i].date == t.rows[i].date);
    }
}

TEST_CASE("splits too short for the lookback are rejected") {
    FeatureTable t = synth_table(10, ramp, flat_senti);
    CHECK_THROWS_AS(chrono_split(t, 0.7, 0.15, 30), InsufficientDataError);
    FeatureTable big = synth_table(100, ramp, flat_senti);
    CHECK_THROWS_AS(chrono_split(big, 0.7, 0.15, 20), InsufficientDataError);  // val gets 15
    CHECK_THROWS_AS(chrono_split(big, 0.9, 0.15, 2), ConfigError);
    CHECK_THROWS_AS(chrono_split(big, 0.0, 0.15, 2), ConfigError);
    CHECK_THROWS_AS(chrono_split(big, 0.7, 1.0, 2), ConfigError);
}

TEST_CASE("min-max scaling uses train statistics only") {
    Matrix train(2, 1);
    train(0, 0) = 1.0;
    train(1, 0) = 3.0;
    ScalerParams p = fit_scaler(train);
    CHECK(p.min[0] == 1.0);
    CHECK(p.max[0] == 3.0);
    CHECK_FALSE(p.any_degenerate());

    Matrix probe(1, 1);
    probe(0, 0) = 2.0;
    CHECK(transform(probe, p)(0, 0) == 0.5);

    probe(0, 0) = 2.7;
    Matrix round_trip = inverse_transform(transform(probe, p), p);
    CHECK(near(round_trip(0, 0), 2.7, 1e-12));

    // values outside the train range scale outside [0,1]; still invertible
    probe(0, 0) = 5.0;
    CHECK(transform(probe, p)(0, 0) == 2.0);
    CHECK(near(inverse_transform(transform(probe, p), p)(0, 0), 5.0, 1e-12));

    Matrix wrong(1, 2);
    CHECK_THROWS_AS(transform(wrong, p), ShapeError);
}

TEST_CASE("constant features scale to zero and are flagged") {
    Matrix train(4, 2);
    for (int i = 0; i < 4; ++i) {
        train(i, 0) = 10.0 + i;
        train(i, 1) = 0.25;
    }
    ScalerParams p = fit_scaler(train);
    CHECK(p.degenerate[1]);
    CHECK_FALSE(p.degenerate[0]);
    CHECK(p.any_degenerate());
    Matrix scaled = transform(train, p);
    for (int i = 0; i < 4; ++i) CHECK(scaled(i, 1) == 0.0);
    // the inverse of a degenerate feature recovers the constant
    CHECK(inverse_transform(scaled, p)(2, 1) == 0.25);
}

TEST_CASE("window construction counts, shapes, and index shift") {
    Matrix scaled(5, 2);
    for (int i = 0; i < 5; ++i) {
        scaled(i, 0) = 0.1 * i;
        scaled(i, 1) = 1.0 - 0.1 * i;
    }

    SupervisedWindows w1 = make_windows(scaled, 2, false);
    CHECK(w1.size() == 3);
    CHECK(w1.feature_count() == 1);
    CHECK(w1.feature_names == std::vector<std::string>{"adj_close"});

    SupervisedWindows w2 = make_windows(scaled, 2, true);
    CHECK(w2.feature_count() == 2);
    for (std::size_t i = 0; i < w2.size(); ++i) {
        // targets are the scaled price sequence shifted by the lookback
        CHECK(w2.y[i] == scaled(static_cast<int>(i) + 2, 0));
        REQUIRE(w2.X[i].rows == 2);
        REQUIRE(w2.X[i].cols == 2);
        for (int r = 0; r < 2; ++r) {
            CHECK(w2.X[i](r, 0) == scaled(static_cast<int>(i) + r, 0));
            CHECK(w2.X[i](r, 1) == scaled(static_cast<int>(i) + r, 1));
        }
    }

    CHECK_THROWS_AS(make_windows(Matrix(2, 1), 2, false), InsufficientDataError);
    CHECK_THROWS_AS(make_windows(Matrix(3, 1), 2, true), ShapeError);
    CHECK_THROWS_AS(make_windows(scaled, 0, false), ConfigError);
}

TEST_CASE("split windows assign by target row and may straddle inputs") {
    Matrix scaled(30, 1);
    for (int i = 0; i < 30; ++i) scaled(i, 0) = i;

    WindowSplits s = make_split_windows(scaled, 5, false, 20, 5);
    CHECK(s.train.size() == 15);   // targets 5..19
    CHECK(s.val.size() == 5);      // targets 20..24
    CHECK(s.test.size() == 5);     // targets 25..29
    CHECK(s.train.y.front() == 5.0);
    CHECK(s.train.y.back() == 19.0);
    CHECK(s.val.y.front() == 20.0);
    CHECK(s.test.y.back() == 29.0);
    // the first validation window reads the last five train rows
    for (int r = 0; r < 5; ++r) CHECK(s.val.X.front()(r, 0) == 15.0 + r);

    CHECK_THROWS_AS(make_split_windows(scaled, 5, false, 28, 2), InsufficientDataError);
    CHECK_THROWS_AS(make_split_windows(scaled, 5, false, 3, 2), InsufficientDataError);
}

TEST_CASE("zero-epoch training returns the initialized network") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {2};
    TrainConfig cfg;
    cfg.max_epochs = 0;
    SupervisedWindows data = constant_windows(6, 0.3, 0.5);
    TrainResult r = train(spec, data, data, cfg);
    CHECK(r.history.epochs.empty());
    CHECK(r.history.best_epoch == 0);
    CHECK_FALSE(r.history.early_stopped);
    CHECK(std::isfinite(r.net.predict(data.X[0])));
}

TEST_CASE("training learns a constant target") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {2};
    TrainConfig cfg;
    cfg.max_epochs = 200;
    cfg.batch_size = 4;
    cfg.learning_rate = 0.05;
    cfg.seed = 9;
    SupervisedWindows tr = constant_windows(10, 0.3, 0.5);
    SupervisedWindows va = constant_windows(4, 0.3, 0.5);
    TrainResult r = train(spec, tr, va, cfg);
    CHECK(r.history.best_val_loss < 1e-4);
    CHECK(near(r.net.predict(tr.X[0]), 0.5, 0.05));
}

TEST_CASE("training is bit-identical for a fixed seed") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {3};
    spec.dropout_rate = 0.2;
    TrainConfig cfg;
    cfg.max_epochs = 12;
    cfg.batch_size = 4;
    cfg.learning_rate = 0.01;
    cfg.seed = 1234;
    cfg.early_stop_patience = 50;
    SeededRng rng(5);
    SupervisedWindows tr = noise_windows(17, rng);
    SupervisedWindows va = noise_windows(6, rng);

    TrainResult a = train(spec, tr, va, cfg);
    TrainResult b = train(spec, tr, va, cfg);
    REQUIRE(a.history.epochs.size() == b.history.epochs.size());
    for (std::size_t i = 0; i < a.history.epochs.size(); ++i) {
        CHECK(a.history.epochs[i].train_loss == b.history.epochs[i].train_loss);
        CHECK(a.history.epochs[i].val_loss == b.history.epochs[i].val_loss);
        CHECK(a.history.epochs[i].lr == b.history.epochs[i].lr);
        CHECK(a.history.epochs[i].event == b.history.epochs[i].event);
    }
    CHECK(a.history.best_epoch == b.history.best_epoch);
    CHECK(a.history.best_val_loss == b.history.best_val_loss);
    CHECK(a.net.predict(tr.X[0]) == b.net.predict(tr.X[0]));

    TrainConfig other = cfg;
    other.seed = 4321;
    TrainResult c = train(spec, tr, va, other);
    CHECK(c.net.predict(tr.X[0]) != a.net.predict(tr.X[0]));
}

TEST_CASE("an exploding learning rate raises a divergence error with its epoch") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {3};
    TrainConfig cfg;
    cfg.max_epochs = 50;
    cfg.learning_rate = 1e8;
    SeededRng rng(6);
    SupervisedWindows tr = noise_windows(12, rng);
    SupervisedWindows va = noise_windows(4, rng);
    try {
        train(spec, tr, va, cfg);
        FAIL("expected divergence");
    } catch (const DivergenceError& e) {
        CHECK(e.epoch() >= 1);
        CHECK(e.exit_code() == 4);
    }
}

TEST_CASE("early stopping restores the best epoch and the rate only decays") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {3};
    TrainConfig cfg;
    cfg.max_epochs = 80;
    cfg.batch_size = 8;
    cfg.learning_rate = 0.02;
    cfg.early_stop_patience = 8;
    cfg.lr_reduce_patience = 3;
    cfg.lr_reduce_factor = 0.5;
    cfg.min_lr = 1e-5;
    cfg.seed = 77;
    SeededRng rng(7);
    // targets unrelated to inputs: validation stops improving quickly
    SupervisedWindows tr = noise_windows(24, rng);
    SupervisedWindows va = noise_windows(10, rng);
    TrainResult r = train(spec, tr, va, cfg);

    REQUIRE(!r.history.epochs.empty());
    double min_val = std::numeric_limits<double>::infinity();
    for (const EpochRecord& e : r.history.epochs) min_val = std::min(min_val, e.val_loss);
    CHECK(r.history.best_val_loss == min_val);
    CHECK(r.history.epochs[r.history.best_epoch - 1].val_loss == min_val);

    // restored weights reproduce the reported minimum exactly
    CHECK(evaluate_mse(r.net, va) == min_val);

    for (std::size_t i = 1; i < r.history.epochs.size(); ++i) {
        CHECK(r.history.epochs[i].lr <= r.history.epochs[i - 1].lr);
    }
    for (const EpochRecord& e : r.history.epochs) CHECK(e.lr >= cfg.min_lr);

    if (r.history.early_stopped) {
        CHECK(r.history.epochs.size() < static_cast<std::size_t>(cfg.max_epochs));
        CHECK(r.history.epochs.back().event.find("early_stop") != std::string::npos);
    }
    bool saw_reduction = false;
    for (const EpochRecord& e : r.history.epochs) {
        if (e.event.find("lr_reduced") != std::string::npos) saw_reduction = true;
    }
    CHECK(saw_reduction);
}

TEST_CASE("history exports as csv") {
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {2};
    TrainConfig cfg;
    cfg.max_epochs = 3;
    cfg.early_stop_patience = 50;
    SeededRng rng(8);
    SupervisedWindows tr = noise_windows(8, rng);
    SupervisedWindows va = noise_windows(4, rng);
    TrainResult r = train(spec, tr, va, cfg);
    const std::string csv = r.history.to_csv();
    CHECK(csv.rfind("epoch,train_loss,val_loss,lr,event\n", 0) == 0);
    std::size_t lines = 0;
    for (char c : csv) lines += c == '\n';
    CHECK(lines == r.history.epochs.size() + 1);
}

TEST_CASE("training configuration is validated") {
    SupervisedWindows data = constant_windows(4, 0.2, 0.4);
    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {2};

    TrainConfig cfg;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(train(spec, data, data, cfg), ConfigError);
    cfg = TrainConfig{};
    cfg.early_stop_patience = 0;
    CHECK_THROWS_AS(train(spec, data, data, cfg), ConfigError);
    cfg = TrainConfig{};
    cfg.lr_reduce_factor = 1.0;
    CHECK_THROWS_AS(train(spec, data, data, cfg), ConfigError);
    cfg = TrainConfig{};
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(train(spec, data, data, cfg), ConfigError);
    cfg = TrainConfig{};
    CHECK_THROWS_AS(train(spec, SupervisedWindows{}, data, cfg), InsufficientDataError);

    NetworkSpec two_features = spec;
    two_features.input_dim = 2;
    CHECK_THROWS_AS(train(two_features, data, data, cfg), ShapeError);
}

TEST_CASE("validation loss improves on a clean periodic signal") {
    const int n = 120, lookback = 8;
    Matrix scaled(n, 1);
    for (int i = 0; i < n; ++i) scaled(i, 0) = 0.5 + 0.4 * std::sin(2.0 * M_PI * i / 25.0);
    WindowSplits s = make_split_windows(scaled, lookback, false, 84, 18);

    NetworkSpec spec;
    spec.input_dim = 1;
    spec.hidden = {6};
    TrainConfig cfg;
    cfg.max_epochs = 80;
    cfg.batch_size = 16;
    cfg.learning_rate = 0.01;
    cfg.seed = 2024;
    TrainResult r = train(spec, s.train, s.val, cfg);
    REQUIRE(!r.history.epochs.empty());
    CHECK(r.history.best_val_loss <= 0.5 * r.history.epochs.front().val_loss);
}

TEST_CASE("random search samples within bounds and returns the minimum") {
    SeededRng rng(9);
    SupervisedWindows tr = noise_windows(14, rng);
    SupervisedWindows va = noise_windows(5, rng);
    NetworkSpec tmpl;
    tmpl.input_dim = 1;
    tmpl.hidden = {2};
    TrainConfig cfg;
    cfg.max_epochs = 4;
    cfg.batch_size = 8;
    cfg.early_stop_patience = 50;
    cfg.seed = 31;

    SearchSpace space;
    space.units = {2, 3};
    space.dropout_min = 0.0;
    space.dropout_max = 0.3;
    space.lr_min = 1e-3;
    space.lr_max = 1e-2;

    SearchResult one = random_search(space, 1, tmpl, tr, va, cfg);
    CHECK(one.best_index == 0);
    CHECK(one.trials.size() == 1);

    SearchResult a = random_search(space, 5, tmpl, tr, va, cfg);
    SearchResult b = random_search(space, 5, tmpl, tr, va, cfg);
    REQUIRE(a.trials.size() == 5);
    CHECK(a.best_index == b.best_index);
    for (std::size_t i = 0; i < a.trials.size(); ++i) {
        const TrialResult& t = a.trials[i];
        CHECK(t.params.units >= 2);
        CHECK(t.params.units <= 3);
        CHECK(t.params.dropout_rate >= 0.0);
        CHECK(t.params.dropout_rate <= 0.3);
        CHECK(t.params.learning_rate >= 1e-3);
        CHECK(t.params.learning_rate <= 1e-2);
        CHECK(t.params.units == b.trials[i].params.units);
        CHECK(t.params.dropout_rate == b.trials[i].params.dropout_rate);
        CHECK(t.params.learning_rate == b.trials[i].params.learning_rate);
        CHECK(t.best_val_loss == b.trials[i].best_val_loss);
    }

    double best = std::numeric_limits<double>::infinity();
    int best_idx = -1;
    for (const TrialResult& t : a.trials) {
        if (!t.diverged && t.best_val_loss < best) {
            best = t.best_val_loss;
            best_idx = t.index;
        }
    }
    CHECK(a.best_index == best_idx);
    CHECK(a.trials[a.best_index].best_val_loss == best);

    CHECK_THROWS_AS(random_search(space, 0, tmpl, tr, va, cfg), ConfigError);
}

TEST_CASE("search survives divergent trials and fails only when all diverge") {
    SeededRng rng(10);
    SupervisedWindows tr = noise_windows(10, rng);
    SupervisedWindows va = noise_windows(4, rng);
    NetworkSpec tmpl;
    tmpl.input_dim = 1;
    tmpl.hidden = {2};
    TrainConfig cfg;
    cfg.max_epochs = 6;
    cfg.early_stop_patience = 50;
    cfg.seed = 77;

    // rates spanning sane to absurd: winners must come from the sane end
    SearchSpace wild;
    wild.units = {2};
    wild.dropout_min = 0.0;
    wild.dropout_max = 0.0;
    wild.lr_min = 1e-4;
    wild.lr_max = 1e6;
    SearchResult r = random_search(wild, 8, tmpl, tr, va, cfg);
    CHECK_FALSE(r.trials[r.best_index].diverged);
    CHECK(std::isfinite(r.trials[r.best_index].best_val_loss));
    CHECK(r.best.learning_rate < 1.0);

    SearchSpace hopeless = wild;
    hopeless.lr_min = 1e7;
    hopeless.lr_max = 1e7 + 1;
    CHECK_THROWS_AS(random_search(hopeless, 2, tmpl, tr, va, cfg), FitError);
}
