#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "stocksent/activations.hpp"
#include "stocksent/adam.hpp"
#include "stocksent/errors.hpp"
#include "stocksent/init.hpp"
#include "stocksent/matrix.hpp"
#include "stocksent/rng.hpp"

using namespace stocksent;

namespace {

Matrix random_matrix(int r, int c, SeededRng& rng) {
    Matrix m(r, c, 0.0);
    for (double& v : m.data) v = rng.uniform(-2.0, 2.0);
    return m;
}

}  // namespace

TEST_CASE("matmul identity leaves operand unchanged") {
    SeededRng rng(7);
    Matrix x = random_matrix(2, 3, rng);
    Matrix y = matmul(Matrix::identity(2), x);
    CHECK(y == x);
}

TEST_CASE("matmul matches hand product") {
    Matrix a(2, 2);
    a(0, 0) = 1; a(0, 1) = 2; a(1, 0) = 3; a(1, 1) = 4;
    Matrix b(2, 1);
    b(0, 0) = 0; b(1, 0) = 1;
    Matrix c = matmul(a, b);
    CHECK(c.rows == 2);
    CHECK(c.cols == 1);
    CHECK(c(0, 0) == 2.0);
    CHECK(c(1, 0) == 4.0);
}

TEST_CASE("matmul by zero matrix annihilates") {
    SeededRng rng(11);
    Matrix x = random_matrix(3, 2, rng);
    Matrix z(2, 4, 0.0);
    Matrix c = matmul(x, z);
    for (double v : c.data) CHECK(v == 0.0);
}

TEST_CASE("matmul shape mismatch names both shapes") {
    Matrix a(2, 3);
    Matrix b(2, 2);
    CHECK_THROWS_WITH_AS(matmul(a, b), doctest::Contains("2x3"), ShapeError);
}

TEST_CASE("matmul associativity on random matrices") {
    SeededRng rng(101);
    for (int trial = 0; trial < 20; ++trial) {
        Matrix a = random_matrix(3, 4, rng);
        Matrix b = random_matrix(4, 2, rng);
        Matrix c = random_matrix(2, 5, rng);
        Matrix left = matmul(matmul(a, b), c);
        Matrix right = matmul(a, matmul(b, c));
        for (std::size_t i = 0; i < left.size(); ++i) {
            CHECK(left.data[i] == doctest::Approx(right.data[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("validation mode rejects non-finite inputs") {
    Matrix a(1, 1);
    a(0, 0) = std::nan("");
    Matrix b = Matrix::identity(1);
    CHECK_THROWS_AS(matmul(a, b), NumericError);
    set_validation(false);
    CHECK_NOTHROW(matmul(a, b));
    set_validation(true);
}

TEST_CASE("sigmoid and tanh basics") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(tanh_act(0.0) == 0.0);
    CHECK(sigmoid(-1.7) == doctest::Approx(1.0 - sigmoid(1.7)).epsilon(1e-15));
    CHECK(sigmoid(1000.0) == doctest::Approx(1.0));
    CHECK(sigmoid(-1000.0) == doctest::Approx(0.0));
    CHECK(std::isfinite(sigmoid(710.0)));
    CHECK(std::isfinite(sigmoid(-710.0)));
}

TEST_CASE("activation derivatives match central finite differences") {
    SeededRng rng(23);
    const double h = 1e-6;
    for (int i = 0; i < 100; ++i) {
        double x = rng.uniform(-4.0, 4.0);
        double sd = dsigmoid_from_value(sigmoid(x));
        double sfd = (sigmoid(x + h) - sigmoid(x - h)) / (2 * h);
        CHECK(sd == doctest::Approx(sfd).epsilon(1e-6));
        double td = dtanh_from_value(tanh_act(x));
        double tfd = (tanh_act(x + h) - tanh_act(x - h)) / (2 * h);
        CHECK(td == doctest::Approx(tfd).epsilon(1e-6));
    }
}

TEST_CASE("glorot_init is deterministic per seed and respects its bound") {
    SeededRng a(42);
    SeededRng b(42);
    Matrix m1 = glorot_init(20, 30, a);
    Matrix m2 = glorot_init(20, 30, b);
    CHECK(m1 == m2);

    SeededRng c(7);
    Matrix big = glorot_init(1000, 1000, c);
    const double bound = std::sqrt(6.0 / 2000.0);
    CHECK(max_abs(big) <= bound);

    // Mean of n uniform(-bound, bound) draws concentrates near zero with
    // standard error bound/sqrt(3 n).
    double mean = 0.0;
    for (double v : big.data) mean += v;
    mean /= static_cast<double>(big.size());
    const double se = bound / std::sqrt(3.0 * static_cast<double>(big.size()));
    CHECK(std::fabs(mean) <= 3.0 * se);
}

TEST_CASE("adam zero gradient leaves parameters and moments at rest") {
    Matrix p(2, 2, 1.5);
    Matrix g(2, 2, 0.0);
    std::vector<Matrix*> params{&p};
    AdamState st = AdamState::for_params(params);
    adam_step(params, {&g}, st, 0.001);
    CHECK(p == Matrix(2, 2, 1.5));
    CHECK(st.m[0] == Matrix(2, 2, 0.0));
    CHECK(st.v[0] == Matrix(2, 2, 0.0));
    CHECK(st.t == 1);
}

TEST_CASE("adam single step matches scalar closed form") {
    Matrix p(1, 1, 1.0);
    Matrix g(1, 1, 1.0);
    std::vector<Matrix*> params{&p};
    AdamState st = AdamState::for_params(params);
    adam_step(params, {&g}, st, 0.001);
    // Bias correction makes the first step lr * g / (|g| + eps) for scalar g.
    const double expect = 1.0 - 0.001 * 1.0 / (1.0 + 1e-8);
    CHECK(p(0, 0) == doctest::Approx(expect).epsilon(1e-15));
}

TEST_CASE("adam two steps match a hand-unrolled recurrence") {
    Matrix p(1, 1, 1.0);
    Matrix g(1, 1, 1.0);
    std::vector<Matrix*> params{&p};
    AdamState st = AdamState::for_params(params);
    const double lr = 0.01, b1 = 0.9, b2 = 0.999, eps = 1e-8;
    adam_step(params, {&g}, st, lr);
    adam_step(params, {&g}, st, lr);

    // Independent scalar replay.
    double m = 0.0, v = 0.0, x = 1.0;
    for (int t = 1; t <= 2; ++t) {
        m = b1 * m + (1 - b1) * 1.0;
        v = b2 * v + (1 - b2) * 1.0;
        double mhat = m / (1.0 - std::pow(b1, t));
        double vhat = v / (1.0 - std::pow(b2, t));
        x -= lr * mhat / (std::sqrt(vhat) + eps);
    }
    CHECK(std::fabs(p(0, 0) - x) <= 1e-12);
}

TEST_CASE("adam with zero learning rate is the identity on parameters") {
    SeededRng rng(5);
    Matrix p = random_matrix(3, 3, rng);
    Matrix before = p;
    Matrix g = random_matrix(3, 3, rng);
    std::vector<Matrix*> params{&p};
    AdamState st = AdamState::for_params(params);
    adam_step(params, {&g}, st, 0.0);
    CHECK(p == before);
    CHECK(st.t == 1);
}

TEST_CASE("adam rejects mismatched shapes") {
    Matrix p(2, 2, 0.0);
    Matrix g(3, 1, 0.0);
    std::vector<Matrix*> params{&p};
    AdamState st = AdamState::for_params(params);
    CHECK_THROWS_AS(adam_step(params, {&g}, st, 0.001), ShapeError);
}

TEST_CASE("rng streams are reproducible and splits are distinct") {
    SeededRng a(123);
    SeededRng b(123);
    for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

    SeededRng parent(9);
    SeededRng c1 = parent.split(0);
    SeededRng c2 = parent.split(1);
    SeededRng c1_again = parent.split(0);
    bool all_equal = true;
    for (int i = 0; i < 16; ++i) {
        std::uint64_t x = c1.next_u64();
        CHECK(x == c1_again.next_u64());
        if (x != c2.next_u64()) all_equal = false;
    }
    CHECK_FALSE(all_equal);
}

TEST_CASE("rng uniform stays in range, normal has sane moments") {
    SeededRng rng(77);
    double sum = 0.0, sumsq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        double u = rng.uniform01();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
        double z = rng.normal();
        sum += z;
        sumsq += z * z;
    }
    double mean = sum / n;
    double var = sumsq / n - mean * mean;
    CHECK(std::fabs(mean) < 0.02);
    CHECK(var == doctest::Approx(1.0).epsilon(0.03));
}

TEST_CASE("rng below is unbiased over a small range") {
    SeededRng rng(31);
    std::vector<int> counts(5, 0);
    for (int i = 0; i < 50000; ++i) counts[static_cast<int>(rng.below(5))]++;
    for (int c : counts) CHECK(std::fabs(c - 10000) < 500);
}
