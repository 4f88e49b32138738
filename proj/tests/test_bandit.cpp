#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "relab/bandit/diagnostics.hpp"
#include "relab/bandit/linucb.hpp"
#include "relab/bandit/reward.hpp"
#include "relab/core/rng.hpp"

using namespace relab;

namespace {

std::vector<double> random_x(int d, Rng& rng) {
    std::vector<double> x(d);
    for (auto& v : x) v = rng.uniform();
    return x;
}

// dense Gauss-Jordan solve, independent of the Cholesky path
std::vector<double> gauss_solve(Matrix a, std::vector<double> b) {
    const std::size_t n = a.rows();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::abs(a(r, col)) > std::abs(a(piv, col))) piv = r;
        for (std::size_t c = 0; c < n; ++c) std::swap(a(col, c), a(piv, c));
        std::swap(b[col], b[piv]);
        const double p = a(col, col);
        for (std::size_t c = 0; c < n; ++c) a(col, c) /= p;
        b[col] /= p;
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a(r, col);
            if (f == 0.0) continue;
            for (std::size_t c = 0; c < n; ++c) a(r, c) -= f * a(col, c);
            b[r] -= f * b[col];
        }
    }
    return b;
}

}  // namespace

TEST_SUITE_BEGIN("bandit");

TEST_CASE("fresh policy scores zero and tie-breaks to the first candidate") {
    LinUcbPolicy p(3, 0.0);
    const std::vector<std::vector<double>> cands{{0.1, 0.2, 0.3}, {0.3, 0.2, 0.1}};
    CHECK(p.score(cands[0]) == 0.0);
    CHECK(p.select(cands) == 0);
    CHECK_THROWS_AS(p.select(std::vector<std::vector<double>>{}), std::invalid_argument);
}

TEST_CASE("alpha zero is pure greedy exploitation") {
    LinUcbPolicy p(2, 0.0);
    p.update_episode(std::vector<std::vector<double>>{{1.0, 0.0}, {0.0, 1.0}},
                     std::vector<double>{1.0, -1.0});
    const std::vector<std::vector<double>> cands{{0.0, 1.0}, {1.0, 0.0}, {0.5, 0.5}};
    CHECK(p.select(cands) == 1);
}

TEST_CASE("selection matches a dense linear-algebra oracle of the UCB rule") {
    Rng rng(42);
    const int d = 5;
    LinUcbPolicy p(d, 0.7);
    // push a few episodes through so A and b are non-trivial
    for (int ep = 0; ep < 4; ++ep) {
        std::vector<std::vector<double>> xs;
        std::vector<double> rs;
        for (int t = 0; t < 6; ++t) {
            xs.push_back(random_x(d, rng));
            rs.push_back(rng.uniform(-1.0, 1.0));
        }
        p.update_episode(xs, rs);
    }
    std::vector<std::vector<double>> cands;
    for (int i = 0; i < 10; ++i) cands.push_back(random_x(d, rng));

    // oracle: explicit theta = A^-1 b and bonus via dense solve
    int best = -1;
    double best_score = -1e300;
    const std::vector<double> theta =
        gauss_solve(p.A(), std::vector<double>(p.b().begin(), p.b().end()));
    for (int i = 0; i < 10; ++i) {
        double exploit = 0.0;
        for (int j = 0; j < d; ++j) exploit += cands[i][j] * theta[j];
        const auto z = gauss_solve(p.A(), cands[i]);
        double quad = 0.0;
        for (int j = 0; j < d; ++j) quad += cands[i][j] * z[j];
        const double s = exploit + 0.7 * std::sqrt(quad);
        if (s > best_score) {
            best_score = s;
            best = i;
        }
        CHECK(p.score(cands[i]) == doctest::Approx(s).epsilon(1e-10));
    }
    CHECK(p.select(cands) == best);
}

TEST_CASE("argmax is invariant to positive scaling of the candidates") {
    Rng rng(7);
    const int d = 4;
    LinUcbPolicy p(d, 1.0);
    std::vector<std::vector<double>> xs;
    std::vector<double> rs;
    for (int t = 0; t < 12; ++t) {
        xs.push_back(random_x(d, rng));
        rs.push_back(rng.uniform());
    }
    p.update_episode(xs, rs);
    std::vector<std::vector<double>> cands;
    for (int i = 0; i < 8; ++i) cands.push_back(random_x(d, rng));
    const int pick = p.select(cands);
    for (double c : {0.5, 2.0, 17.0}) {
        auto scaled = cands;
        for (auto& x : scaled)
            for (auto& v : x) v *= c;
        CHECK(p.select(scaled) == pick);
    }
}

TEST_CASE("episode updates: initialization, empty trace, incremental equals closed form") {
    const int d = 6;
    LinUcbPolicy p(d, 1.0);
    // A0 = I, b0 = 0
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) CHECK(p.A()(i, j) == (i == j ? 1.0 : 0.0));
    for (double v : p.b()) CHECK(v == 0.0);
    for (double v : p.theta()) CHECK(v == 0.0);

    p.update_episode(std::vector<std::vector<double>>{}, std::vector<double>{});
    for (double v : p.theta()) CHECK(v == 0.0);

    Rng rng(99);
    std::vector<std::vector<double>> all_x;
    std::vector<double> all_r;
    for (int ep = 0; ep < 10; ++ep) {
        std::vector<std::vector<double>> xs;
        std::vector<double> rs;
        for (int t = 0; t < 5; ++t) {
            xs.push_back(random_x(d, rng));
            rs.push_back(rng.uniform(-0.5, 1.0));
            all_x.push_back(xs.back());
            all_r.push_back(rs.back());
        }
        p.update_episode(xs, rs);
    }
    Matrix X(all_x.size(), d);
    for (std::size_t i = 0; i < all_x.size(); ++i)
        std::copy(all_x[i].begin(), all_x[i].end(), X.row(i));
    const auto closed = closed_form_theta(X, all_r);
    for (int j = 0; j < d; ++j) CHECK(p.theta()[j] == doctest::Approx(closed[j]).epsilon(1e-8));
}

TEST_CASE("closed form solves tiny systems by hand") {
    SUBCASE("no rows gives zero") {
        const Matrix X(0, 2);
        const auto t = closed_form_theta(X, std::vector<double>{});
        CHECK(t == std::vector<double>{0.0, 0.0});
    }
    SUBCASE("single row x=(1,0), r=1 gives (0.5, 0)") {
        Matrix X(1, 2);
        X(0, 0) = 1.0;
        const auto t = closed_form_theta(X, std::vector<double>{1.0});
        CHECK(t[0] == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(t[1] == doctest::Approx(0.0).epsilon(1e-15));
    }
    SUBCASE("random 20x5 system satisfies the normal equations") {
        Rng rng(1234);
        Matrix X(20, 5);
        std::vector<double> r(20);
        for (std::size_t i = 0; i < 20; ++i) {
            for (std::size_t j = 0; j < 5; ++j) X(i, j) = rng.uniform(-1.0, 1.0);
            r[i] = rng.uniform(-1.0, 1.0);
        }
        const auto t = closed_form_theta(X, r);
        // residual of (X^T X + I) t - X^T r
        for (std::size_t row = 0; row < 5; ++row) {
            double lhs = t[row];
            for (std::size_t i = 0; i < 20; ++i) {
                double xt = 0.0;
                for (std::size_t j = 0; j < 5; ++j) xt += X(i, j) * t[j];
                lhs += X(i, row) * xt;
            }
            double rhs = 0.0;
            for (std::size_t i = 0; i < 20; ++i) rhs += X(i, row) * r[i];
            CHECK(std::abs(lhs - rhs) < 1e-10);
        }
    }
}

TEST_CASE("A stays symmetric positive definite with unit floor") {
    Rng rng(5);
    const int d = 8;
    LinUcbPolicy p(d, 1.0);
    for (int ep = 0; ep < 20; ++ep) {
        std::vector<std::vector<double>> xs;
        std::vector<double> rs;
        for (int t = 0; t < 7; ++t) {
            xs.push_back(random_x(d, rng));
            rs.push_back(rng.uniform());
        }
        p.update_episode(xs, rs);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) CHECK(p.A()(i, j) == doctest::Approx(p.A()(j, i)));
        // A - (1-1e-9) I must stay positive definite
        Matrix shifted = p.A();
        for (int i = 0; i < d; ++i) shifted(i, i) -= 1.0 - 1e-9;
        CHECK_NOTHROW(Cholesky{shifted});
    }
}

TEST_CASE("policy checkpoints round-trip and reject schema mismatches") {
    Rng rng(3);
    LinUcbPolicy p(4, 0.3);
    p.update_episode(std::vector<std::vector<double>>{random_x(4, rng), random_x(4, rng)},
                     std::vector<double>{0.2, 0.8});
    const std::string text = p.to_json(0xabcdef, "subgraph");
    const LinUcbPolicy q = LinUcbPolicy::from_json(text, 0xabcdef);
    CHECK(q.dim() == 4);
    CHECK(q.alpha() == 0.3);
    CHECK(q.level() == "subgraph");
    for (int j = 0; j < 4; ++j) CHECK(q.theta()[j] == p.theta()[j]);
    CHECK_THROWS_WITH_AS(LinUcbPolicy::from_json(text, 0x123456),
                         doctest::Contains("schema hash"), std::runtime_error);
}

TEST_CASE("reward shaper") {
    const RewardShaper s(-0.2, 0.8);
    CHECK(s.shape(0.8) == 1.0);
    CHECK(s.shape(-0.2) == 0.0);
    CHECK(s.shape(0.3) == doctest::Approx(0.5));
    CHECK(s.shape(5.0) == 1.0);
    CHECK(s.shape(-5.0) == 0.0);
    CHECK_THROWS_AS(RewardShaper(1.0, 1.0), std::invalid_argument);
    RewardShaper raw;
    CHECK_THROWS_AS(raw.shape(0.1), std::logic_error);
    const auto c = RewardShaper::calibrate(std::vector<double>{0.0, 1.0});
    CHECK(c.lo() == doctest::Approx(-0.05));
    CHECK(c.hi() == doctest::Approx(1.05));
}

TEST_CASE("time-dependent baseline keeps exact running means") {
    StepBaseline v(3);
    CHECK(v.value(1) == 0.0);  // empty prior
    v.record(1, 0.5);
    v.record(1, 0.7);
    v.record(2, 1.0);
    CHECK(v.value(1) == (0.5 + 0.7) / 2.0);  // bitwise: same sum, same divide
    CHECK(v.value(2) == 1.0);
    CHECK(v.value(3) == 0.0);
    CHECK(v.count(1) == 2);
    CHECK_THROWS_AS(v.value(0), std::out_of_range);
    CHECK_THROWS_AS(v.record(4, 0.1), std::out_of_range);

    SUBCASE("stored value equals the left-to-right arithmetic mean exactly") {
        Rng rng(8);
        StepBaseline w(1);
        double sum = 0.0;
        for (int e = 0; e < 57; ++e) {
            const double r = rng.uniform();
            w.record(1, r);
            sum += r;
        }
        CHECK(w.value(1) == sum / 57.0);  // bitwise
    }

    SUBCASE("nonzero ewma rate tracks an exponentially-weighted mean") {
        StepBaseline w(1, 0.5);
        w.record(1, 1.0);
        CHECK(w.value(1) == 1.0);  // first sample initializes
        w.record(1, 0.0);
        CHECK(w.value(1) == doctest::Approx(0.5));
        w.record(1, 0.0);
        CHECK(w.value(1) == doctest::Approx(0.25));
        CHECK_THROWS_AS(StepBaseline(1, 1.5), std::invalid_argument);
    }
}

TEST_CASE("baseline adjustment modes") {
    const std::vector<double> x{0.5, 0.5};
    SUBCASE("first episode subtracts nothing; later ones subtract the running mean") {
        BaselineState b(BaselineMode::TimeDependent, 2);
        CHECK(b.adjust(0, 1, 0, x, 0.6) == 0.6);
        b.record_shared(1, 0.6);
        CHECK(b.adjust(0, 1, 0, x, 0.9) == doctest::Approx(0.9 - 0.6));
        CHECK(b.adjust(1, 1, 0, x, 0.9) == doctest::Approx(0.9 - 0.6));  // shared across levels
        b.record_shared(1, 0.6);  // constant reward stream
        CHECK(b.adjust(0, 1, 0, x, 0.6) == doctest::Approx(0.0));
    }
    SUBCASE("constant baseline averages all history") {
        BaselineState b(BaselineMode::Constant, 2);
        b.record_shared(1, 0.2);
        b.record_shared(2, 0.4);
        CHECK(b.adjust(0, 1, 0, x, 0.5) == doctest::Approx(0.5 - 0.3));
    }
    SUBCASE("graph buckets are keyed and per level") {
        BaselineState b(BaselineMode::GraphBucket, 2);
        b.record_level(0, 3, 0.9);
        CHECK(b.adjust(0, 1, 3, x, 0.5) == doctest::Approx(0.5 - 0.9));
        CHECK(b.adjust(0, 1, 4, x, 0.5) == 0.5);   // unseen bucket
        CHECK(b.adjust(1, 1, 3, x, 0.5) == 0.5);   // other level untouched
    }
    SUBCASE("state function fits a linear value model") {
        BaselineState b(BaselineMode::StateFunction, 2);
        const std::vector<std::vector<double>> xs{{1.0, 0.0}, {0.0, 1.0}};
        const std::vector<double> rs{1.0, 0.0};
        for (int pass = 0; pass < 200; ++pass) b.finish_episode(0, xs, rs);
        CHECK(b.adjust(0, 1, 0, xs[0], 1.0) == doctest::Approx(0.0).epsilon(0.05));
    }
    SUBCASE("none passes rewards through") {
        BaselineState b(BaselineMode::None, 2);
        b.record_shared(1, 0.9);
        CHECK(b.adjust(0, 1, 0, x, 0.4) == 0.4);
    }
}

TEST_CASE("variance check: hand case, E=1 edge case, random sweep") {
    SUBCASE("R = [[1,0],[3,2]] gives exactly (1.25, 1.0)") {
        Matrix r(2, 2);
        r(0, 0) = 1;
        r(0, 1) = 0;
        r(1, 0) = 3;
        r(1, 1) = 2;
        const auto vc = variance_check(r);
        CHECK(vc.sigma2 == 1.25);
        CHECK(vc.sigma2_prime == 1.0);
        CHECK(vc.ok);
    }
    SUBCASE("a single trajectory centers to zero variance") {
        Matrix r(1, 4);
        for (int t = 0; t < 4; ++t) r(0, t) = 0.3 * t;
        const auto vc = variance_check(r);
        CHECK(vc.sigma2_prime == doctest::Approx(0.0));
        CHECK(vc.ok);
    }
    SUBCASE("1000 random matrices all satisfy the reduction bound") {
        Rng rng(2718);
        for (int trial = 0; trial < 1000; ++trial) {
            const std::size_t e = 1 + rng.uniform_int(8);
            const std::size_t t = 1 + rng.uniform_int(12);
            Matrix r(e, t);
            for (std::size_t i = 0; i < r.size(); ++i) r.data()[i] = rng.uniform(-3.0, 3.0);
            const auto vc = variance_check(r);
            REQUIRE(vc.ok);
            // oracle recompute of sigma2 via direct definition
            double mean = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i) mean += r.data()[i];
            mean /= static_cast<double>(r.size());
            double var = 0.0;
            for (std::size_t i = 0; i < r.size(); ++i)
                var += (r.data()[i] - mean) * (r.data()[i] - mean);
            var /= static_cast<double>(r.size());
            REQUIRE(vc.sigma2 == doctest::Approx(var).epsilon(1e-12));
        }
    }
}

TEST_CASE("noise precision estimate and predictive variance") {
    CHECK_THROWS_AS(inverse_beta_ml(std::vector<double>{1.0}), std::invalid_argument);
    CHECK(inverse_beta_ml(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
    CHECK(inverse_beta_ml(std::vector<double>{1.0, -1.0}) == 1.0);

    SUBCASE("posterior term shrinks as samples accumulate") {
        Rng rng(31);
        const int d = 4;
        LinUcbPolicy p(d, 1.0);
        const auto x = random_x(d, rng);
        double prev = predictive_variance(p, x, 0.0);
        for (int ep = 0; ep < 15; ++ep) {
            std::vector<std::vector<double>> xs;
            std::vector<double> rs;
            for (int t = 0; t < 10; ++t) {
                xs.push_back(random_x(d, rng));
                rs.push_back(rng.uniform());
            }
            p.update_episode(xs, rs);
            const double cur = predictive_variance(p, x, 0.0);
            CHECK(cur <= prev + 1e-12);
            prev = cur;
        }
        // with zero residuals the predictive variance is exactly the quadratic form
        CHECK(predictive_variance(p, x, 0.0) ==
              doctest::Approx(p.inverse_quadratic_form(x)).epsilon(1e-15));
    }
}

TEST_SUITE_END();
