#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "patchscout/classifier.hpp"
#include "patchscout/errors.hpp"

using namespace patchscout;

namespace {

std::vector<double> random_vector(std::mt19937_64& rng, size_t dim) {
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<double> v(dim);
    for (double& x : v) x = dist(rng);
    return v;
}

} // namespace

TEST_CASE("sigmoid hits the fixed points and stays inside (0,1)") {
    CHECK(sigmoid(0.0) == 0.5);
    CHECK(sigmoid(50.0) > 1.0 - 1e-10);
    CHECK(sigmoid(-50.0) < 1e-10);
    // 36 is near the edge of what a double can keep strictly inside (0,1).
    CHECK(sigmoid(36.0) < 1.0);
    CHECK(sigmoid(-36.0) > 0.0);
    CHECK(std::isfinite(sigmoid(1000.0)));
    CHECK(std::isfinite(sigmoid(-1000.0)));
    CHECK(sigmoid(2.0) > sigmoid(1.0));
    CHECK(sigmoid(-3.0) == doctest::Approx(1.0 - sigmoid(3.0)).epsilon(1e-15));
}

TEST_CASE("weighted BCE matches hand-computed values") {
    CHECK(weighted_bce(0.5, 1, 10.0) ==
          doctest::Approx(6.931471805599453).epsilon(1e-12));
    CHECK(weighted_bce(0.9, 1, 10.0) ==
          doctest::Approx(1.0536051565782630).epsilon(1e-12));
    CHECK(weighted_bce(1.0 - 1e-13, 1, 10.0) < 1e-10);

    SUBCASE("weight one is plain BCE") {
        CHECK(weighted_bce(0.25, 1, 1.0) ==
              doctest::Approx(1.3862943611198906).epsilon(1e-12));
        CHECK(weighted_bce(0.25, 0, 1.0) ==
              doctest::Approx(0.2876820724517809).epsilon(1e-12));
    }
    SUBCASE("weight only applies to positives") {
        CHECK(weighted_bce(0.25, 0, 10.0) == weighted_bce(0.25, 0, 1.0));
        CHECK(weighted_bce(0.25, 1, 10.0) ==
              doctest::Approx(10.0 * weighted_bce(0.25, 1, 1.0)).epsilon(1e-12));
    }
    SUBCASE("clamping keeps the endpoints finite") {
        CHECK(weighted_bce(0.0, 1, 1.0) ==
              doctest::Approx(-std::log(1e-12)).epsilon(1e-4));
        CHECK(weighted_bce(1.0, 0, 1.0) ==
              doctest::Approx(-std::log(1e-12)).epsilon(1e-4));
        CHECK(std::isfinite(weighted_bce(0.0, 1, 10.0)));
    }
}

TEST_CASE("zero head scores one half for any input") {
    ClassifierHead head;
    head.weights.assign(8, 0.0);
    CHECK(head.probability({1, 2, 3, 4, 5, 6, 7, 8}) == 0.5);
    CHECK(head.probability({0, 0, 0, 0, 0, 0, 0, 0}) == 0.5);
}

TEST_CASE("dimension mismatch is refused") {
    ClassifierHead head;
    head.weights.assign(4, 0.1);
    CHECK_THROWS_AS(head.probability({1.0, 2.0}), ValidationError);
}

TEST_CASE("large bias saturates the probability") {
    ClassifierHead head;
    head.weights.assign(2, 0.0);
    head.bias = 50.0;
    CHECK(head.probability({0.0, 0.0}) > 1.0 - 1e-10);
}

TEST_CASE("analytic gradient matches central finite differences") {
    std::mt19937_64 rng(20240818);
    std::uniform_int_distribution<int> label_dist(0, 1);
    std::uniform_real_distribution<double> weight_dist(0.5, 12.0);
    const double step = 1e-6;

    for (int round = 0; round < 100; ++round) {
        size_t dim = 1 + static_cast<size_t>(round % 7);
        ClassifierHead head;
        head.weights = random_vector(rng, dim);
        head.bias = random_vector(rng, 1)[0];

        std::vector<std::vector<double>> xs;
        std::vector<int> ys;
        size_t batch = 1 + static_cast<size_t>(round % 3);
        for (size_t b = 0; b < batch; ++b) {
            xs.push_back(random_vector(rng, dim));
            ys.push_back(label_dist(rng));
        }
        double w = weight_dist(rng);

        std::vector<double> grad;
        double grad_bias = 0.0;
        loss_gradient(head, xs, ys, w, grad, grad_bias);

        for (size_t i = 0; i <= dim; ++i) {
            ClassifierHead up = head;
            ClassifierHead down = head;
            double analytic;
            if (i < dim) {
                up.weights[i] += step;
                down.weights[i] -= step;
                analytic = grad[i];
            } else {
                up.bias += step;
                down.bias -= step;
                analytic = grad_bias;
            }
            double numeric = (mean_loss(up, xs, ys, w) - mean_loss(down, xs, ys, w)) /
                             (2.0 * step);
            double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
            CHECK(std::abs(analytic - numeric) / scale < 1e-5);
        }
    }
}

TEST_CASE("training separates a linearly separable corpus") {
    // Positives light feature 0, negatives feature 1.
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 16; ++i) {
        xs.push_back({1.0, 0.0, i % 2 ? 0.3 : 0.0});
        ys.push_back(1);
        xs.push_back({0.0, 1.0, i % 3 ? 0.3 : 0.0});
        ys.push_back(0);
    }
    TrainConfig cfg;
    cfg.learning_rate = 2.0;
    cfg.epochs = 300;
    cfg.batch_size = 8;
    cfg.seed = 42;
    TrainResult result = train_head(xs, ys, cfg);

    CHECK(result.epoch_losses.size() == 300);
    CHECK(result.epoch_losses.back() < 0.1);
    CHECK(result.head.probability(xs[0]) > 0.9);
    CHECK(result.head.probability(xs[1]) < 0.1);

    SUBCASE("loss trajectory settles: 3-epoch window means never rise") {
        auto window = [&](size_t k) {
            return (result.epoch_losses[k] + result.epoch_losses[k + 1] +
                    result.epoch_losses[k + 2]) /
                   3.0;
        };
        for (size_t k = 0; k + 3 < result.epoch_losses.size(); ++k) {
            CHECK(window(k + 1) <= window(k) + 1e-9);
        }
    }
}

TEST_CASE("identical features with opposite labels keep an irreducible floor") {
    std::vector<std::vector<double>> xs{{1.0, 1.0}, {1.0, 1.0}};
    std::vector<int> ys{1, 0};
    TrainConfig cfg;
    cfg.learning_rate = 0.5;
    cfg.epochs = 200;
    TrainResult result = train_head(xs, ys, cfg);
    // Optimum sits at p = 10/11; the mean loss there is about 1.675.
    CHECK(result.epoch_losses.back() > 1.0);
}

TEST_CASE("fixed seed reproduces the head exactly") {
    std::mt19937_64 rng(9);
    std::vector<std::vector<double>> xs;
    std::vector<int> ys;
    for (int i = 0; i < 20; ++i) {
        xs.push_back(random_vector(rng, 6));
        ys.push_back(i % 3 == 0 ? 1 : 0);
    }
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 4;
    cfg.seed = 77;
    TrainResult a = train_head(xs, ys, cfg);
    TrainResult b = train_head(xs, ys, cfg);
    CHECK(a.head.weights == b.head.weights);
    CHECK(a.head.bias == b.head.bias);
    CHECK(a.epoch_losses == b.epoch_losses);

    cfg.seed = 78;
    TrainResult c = train_head(xs, ys, cfg);
    CHECK(a.head.weights != c.head.weights);
}

TEST_CASE("degenerate training inputs are refused") {
    std::vector<std::vector<double>> xs{{1.0}, {2.0}};
    CHECK_THROWS_AS(train_head({}, {}, TrainConfig{}), ValidationError);
    CHECK_THROWS_AS(train_head(xs, {1, 1}, TrainConfig{}), ValidationError);
    CHECK_THROWS_AS(train_head(xs, {0, 0}, TrainConfig{}), ValidationError);
    CHECK_THROWS_AS(train_head(xs, {1}, TrainConfig{}), ValidationError);
    CHECK_THROWS_AS(train_head(xs, {1, 2}, TrainConfig{}), ValidationError);

    TrainConfig bad;
    bad.learning_rate = 0.0;
    CHECK_THROWS_AS(train_head(xs, {1, 0}, bad), ValidationError);
}

TEST_CASE("heads survive a save/load round trip") {
    ClassifierHead head;
    head.weights = {0.125, -3.5e-7, 2.0 / 3.0, 0.0};
    head.bias = -0.015625;
    ClassifierHead back = load_head(save_head(head));
    CHECK(back.weights == head.weights);
    CHECK(back.bias == head.bias);
}

TEST_CASE("corrupt head files fail loudly") {
    CHECK_THROWS_AS(load_head("not json at all"), ParseError);
    CHECK_THROWS_AS(load_head("{\"bias\":0}"), ParseError);
    CHECK_THROWS_AS(
        load_head("{\"format_version\":99,\"dim\":1,\"bias\":0,\"weights\":[0]}"),
        ValidationError);
    CHECK_THROWS_AS(
        load_head("{\"format_version\":1,\"dim\":3,\"bias\":0,\"weights\":[0]}"),
        ValidationError);
}
