#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "adpqis/approx.hpp"
#include "adpqis/lattice.hpp"
#include "adpqis/rng.hpp"
#include "test_support.hpp"

using namespace adpqis;

namespace {

FeatureSpec unit_spec(std::size_t d)
{
    FeatureSpec spec;
    spec.inputs.assign(d, InputBounds{0.0, 1.0});
    return spec;
}

// Feature vector recomputed from the definition, independent of the
// library path.
std::vector<double> brute_features(const std::vector<double>& normalized)
{
    std::vector<double> f{1.0};
    for (double x : normalized)
        f.push_back(x);
    for (double x : normalized)
        f.push_back(x * x);
    for (std::size_t i = 0; i < normalized.size(); ++i)
        for (std::size_t j = i + 1; j < normalized.size(); ++j)
            f.push_back(normalized[i] * normalized[j]);
    return f;
}

} // namespace

TEST_CASE("feature vector at the lower bounds is the bare constant")
{
    FeatureSpec spec;
    spec.inputs = {{2.0, 4.0}, {-1.0, 1.0}, {0.0, 10.0}};
    const std::vector<double> inputs{2.0, -1.0, 0.0};
    const std::vector<double> f = features(spec, inputs);
    CHECK(f.size() == spec.feature_count());
    CHECK(f[0] == 1.0);
    for (std::size_t i = 1; i < f.size(); ++i)
        CHECK(f[i] == 0.0);
}

TEST_CASE("feature vector with all inputs normalized to one")
{
    const std::vector<double> f = features(unit_spec(2), std::vector<double>{1.0, 1.0});
    CHECK(f == std::vector<double>{1, 1, 1, 1, 1, 1});
}

TEST_CASE("feature vector ordering for d=2")
{
    const std::vector<double> f = features(unit_spec(2), std::vector<double>{0.5, 0.25});
    CHECK(f == std::vector<double>{1, 0.5, 0.25, 0.25, 0.0625, 0.125});
}

TEST_CASE("normalization clips to [-2,2] and zeroes degenerate ranges")
{
    FeatureSpec spec;
    spec.inputs = {{0.0, 1.0}, {5.0, 5.0}};
    const std::vector<double> f = features(spec, std::vector<double>{17.0, 123.0});
    CHECK(f[1] == 2.0);
    CHECK(f[2] == 0.0);
}

TEST_CASE("feature count formula")
{
    CHECK(unit_spec(2).feature_count() == 6);
    CHECK(unit_spec(10).feature_count() == 66);
}

TEST_CASE("evaluate equals an independent dot product")
{
    FeatureSpec spec = unit_spec(5);
    Rng rng(41);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<double> inputs(5), normalized(5);
        for (std::size_t i = 0; i < 5; ++i) {
            inputs[i] = uniform_in(rng, 0, 1);
            normalized[i] = inputs[i];
        }
        std::vector<double> theta(spec.feature_count());
        for (auto& t : theta)
            t = uniform_in(rng, -3, 3);
        const std::vector<double> phi = brute_features(normalized);
        double expected = 0.0;
        for (std::size_t i = 0; i < phi.size(); ++i)
            expected += theta[i] * phi[i];
        CHECK(testing::approx_rel(evaluate_inputs(spec, theta, inputs), expected, 1e-12));
    }
}

TEST_CASE("evaluate with zero and constant-only coefficients")
{
    FeatureSpec spec = unit_spec(3);
    QApprox q = QApprox::zeros(1, spec);
    const StateVector s{{0.3}};
    const ActionShares a{{0.6, 0.4}};
    CHECK(evaluate(q, s, a) == 0.0);
    q.theta[0] = 4.5;
    CHECK(evaluate(q, s, a) == 4.5);
}

TEST_CASE("evaluate is linear in the coefficients")
{
    FeatureSpec spec = unit_spec(4);
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        QApprox q1 = QApprox::zeros(1, spec), q2 = QApprox::zeros(1, spec), mix = QApprox::zeros(1, spec);
        const double alpha = uniform_in(rng, -2, 2), beta = uniform_in(rng, -2, 2);
        for (std::size_t i = 0; i < q1.theta.size(); ++i) {
            q1.theta[i] = uniform_in(rng, -1, 1);
            q2.theta[i] = uniform_in(rng, -1, 1);
            mix.theta[i] = alpha * q1.theta[i] + beta * q2.theta[i];
        }
        const StateVector s{{uniform_in(rng, 0, 1), uniform_in(rng, 0, 1)}};
        const ActionShares a{{uniform_in(rng, 0, 1), uniform_in(rng, 0, 1)}};
        CHECK(testing::approx_rel(evaluate(mix, s, a), alpha * evaluate(q1, s, a) + beta * evaluate(q2, s, a),
                                  1e-10));
    }
}

TEST_CASE("single-sample update is an exact convex combination at the point")
{
    FeatureSpec spec = unit_spec(4);
    Rng rng(9);
    QApprox q = QApprox::zeros(2, spec);
    for (auto& t : q.theta)
        t = uniform_in(rng, -2, 2);
    const StateVector s{{0.7, 0.2}};
    const ActionShares a{{0.3, 0.7}};

    SUBCASE("full step hits the target")
    {
        const TdSample sample{s, a, 13.25};
        const QApprox next = td_batch_update(q, std::vector<TdSample>{sample}, 1.0);
        CHECK(testing::approx_eq(evaluate(next, s, a), 13.25, 1e-9));
    }
    SUBCASE("lambda 0.1 keeps nine tenths of the residual")
    {
        const double before = evaluate(q, s, a);
        const TdSample sample{s, a, 0.0};
        const QApprox next = td_batch_update(q, std::vector<TdSample>{sample}, 0.1);
        CHECK(testing::approx_eq(evaluate(next, s, a), 0.9 * before, 1e-9));
        CHECK(testing::approx_eq(std::abs(0.0 - evaluate(next, s, a)), 0.9 * std::abs(0.0 - before), 1e-9));
    }
}

TEST_CASE("a batch of two identical samples equals the single-sample batch")
{
    FeatureSpec spec = unit_spec(3);
    Rng rng(13);
    QApprox q = QApprox::zeros(1, spec);
    for (auto& t : q.theta)
        t = uniform_in(rng, -1, 1);
    const TdSample sample{StateVector{{0.4}}, ActionShares{{0.9, 0.1}}, 3.5};
    const QApprox once = td_batch_update(q, std::vector<TdSample>{sample}, 0.3);
    const QApprox twice = td_batch_update(q, std::vector<TdSample>{sample, sample}, 0.3);
    for (std::size_t i = 0; i < once.theta.size(); ++i)
        CHECK(testing::approx_eq(once.theta[i], twice.theta[i], 1e-12));
}

TEST_CASE("update step matches the semi-gradient of the squared loss")
{
    // theta' - theta = -(lambda/|phi|^2) * dL/dtheta with L = (target-q)^2/2;
    // compare against central finite differences of L.
    FeatureSpec spec = unit_spec(4);
    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        QApprox q = QApprox::zeros(1, spec);
        for (auto& t : q.theta)
            t = uniform_in(rng, -2, 2);
        const StateVector s{{uniform_in(rng, 0, 1), uniform_in(rng, 0, 1)}};
        const ActionShares a{{uniform_in(rng, 0, 1), uniform_in(rng, 0, 1)}};
        const double target = uniform_in(rng, -5, 5);
        const double lambda = 0.25;

        const std::vector<double> phi = features(spec, s, a);
        double norm2 = 0.0;
        for (double p : phi)
            norm2 += p * p;

        const QApprox next = td_batch_update(q, std::vector<TdSample>{{s, a, target}}, lambda);
        const double h = 1e-5;
        for (std::size_t i = 0; i < q.theta.size(); ++i) {
            QApprox plus = q, minus = q;
            plus.theta[i] += h;
            minus.theta[i] -= h;
            const double loss_plus = 0.5 * std::pow(target - evaluate(plus, s, a), 2);
            const double loss_minus = 0.5 * std::pow(target - evaluate(minus, s, a), 2);
            const double fd_grad = (loss_plus - loss_minus) / (2 * h);
            const double implied_grad = -(next.theta[i] - q.theta[i]) * norm2 / lambda;
            CHECK(testing::approx_rel(implied_grad, fd_grad, 1e-6));
        }
    }
}

TEST_CASE("update rejects bad batches")
{
    FeatureSpec spec = unit_spec(2);
    const QApprox q = QApprox::zeros(1, spec);
    CHECK_THROWS_AS(td_batch_update(q, std::vector<TdSample>{}, 0.5), ContractViolation);
    const TdSample bad{StateVector{{}}, ActionShares{{0.5, 0.5}}, std::nan("")};
    CHECK_THROWS_AS(td_batch_update(q, std::vector<TdSample>{bad}, 0.5), ContractViolation);
    const TdSample ok{StateVector{{}}, ActionShares{{0.5, 0.5}}, 1.0};
    CHECK_THROWS_AS(td_batch_update(q, std::vector<TdSample>{ok}, 0.0), ContractViolation);
}

TEST_CASE("simplex lattice size for half steps and four parts")
{
    CHECK(composition_count(2, 4) == 10);
    CHECK(simplex_compositions(2, 4).size() == 10);
    CHECK(simplex_compositions(2, 4).front() == std::vector<int>{2, 0, 0, 0});
}

TEST_CASE("flat surrogate returns the first canonical lattice point")
{
    FeatureSpec spec = unit_spec(4); // action-only inputs
    const QApprox q = QApprox::zeros(1, spec);
    const ArgminResult r = argmin_action(q, StateVector{{}}, {0.25, 4});
    CHECK(r.value == 0.0);
    CHECK(r.action.shares == std::vector<double>{1.0, 0.0, 0.0, 0.0});
}

TEST_CASE("quadratic with a corner minimum is found within resolution")
{
    // q(a) = (a0 - 1)^2 over the simplex: constant 1, linear a0 -2, square a0 +1
    FeatureSpec spec = unit_spec(4);
    QApprox q = QApprox::zeros(1, spec);
    q.theta[0] = 1.0;
    q.theta[1] = -2.0;
    q.theta[1 + 4] = 1.0;
    const ArgminResult r = argmin_action(q, StateVector{{}}, {0.05, 20});

    // independent exhaustive scan over the same lattice
    double brute = 1e300;
    for (const auto& c : simplex_compositions(20, 4)) {
        const double a0 = c[0] / 20.0;
        brute = std::min(brute, (a0 - 1) * (a0 - 1));
    }
    CHECK(r.value <= brute + 1e-12);
    CHECK(testing::approx_eq(r.action.shares[0], 1.0, 0.05));
}

TEST_CASE("refinement never returns worse than the scanned lattice minimum")
{
    FeatureSpec spec = unit_spec(4);
    Rng rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        QApprox q = QApprox::zeros(1, spec);
        for (auto& t : q.theta)
            t = uniform_in(rng, -1, 1);
        const ArgminParams params{0.2, 8};
        const ArgminResult r = argmin_action(q, StateVector{{}}, params);
        double lattice_min = 1e300;
        for (const auto& c : simplex_compositions(5, 4)) {
            ActionShares a;
            for (int x : c)
                a.shares.push_back(x / 5.0);
            lattice_min = std::min(lattice_min, evaluate(q, StateVector{{}}, a));
        }
        CHECK(r.value <= lattice_min + 1e-12);
        validate_shares(r.action);
    }
}

TEST_CASE("shifting the constant coefficient does not move the argmin")
{
    FeatureSpec spec = unit_spec(4);
    Rng rng(29);
    QApprox q = QApprox::zeros(1, spec);
    for (auto& t : q.theta)
        t = uniform_in(rng, -1, 1);
    QApprox shifted = q;
    shifted.theta[0] += 42.0;
    const ArgminParams params{0.1, 10};
    const ArgminResult a = argmin_action(q, StateVector{{}}, params);
    const ArgminResult b = argmin_action(shifted, StateVector{{}}, params);
    CHECK(a.action.shares == b.action.shares);
    CHECK(testing::approx_eq(b.value - a.value, 42.0, 1e-9));
}

TEST_CASE("argmin validates the resolution")
{
    FeatureSpec spec = unit_spec(4);
    const QApprox q = QApprox::zeros(1, spec);
    CHECK_THROWS(argmin_action(q, StateVector{{}}, {0.3, 4}));
    CHECK_THROWS(argmin_action(q, StateVector{{}}, {0.0, 4}));
}
