#include <doctest.h>

#include <cmath>
#include <complex>

#include "mixedosc/dominance.hpp"
#include "mixedosc/equilibria.hpp"
#include "mixedosc/errors.hpp"
#include "mixedosc/linalg.hpp"
#include "test_helpers.hpp"

using namespace mixedosc;
using testutil::lag_params;

TEST_CASE("circle criterion: p = 0 below the gain bound at rate 0") {
    const CircleTestResult r = circle_criterion(make_loop_tf(lag_params(0.5, 0.4)), 0.0);
    REQUIRE(r.ok);
    CHECK(r.certificate->p == 0);
    CHECK(r.certificate->margin > 0.0);
    CHECK(r.shifted_unstable_poles == 0);
}

TEST_CASE("circle criterion: p = 2 certificate at the oscillating point") {
    const CircleTestResult r = circle_criterion(make_loop_tf(lag_params(5.0, 0.4)), 50.0);
    REQUIRE(r.ok);
    CHECK(r.certificate->p == 2);
    CHECK(r.certificate->lambda == 50.0);
}

TEST_CASE("circle criterion at very large gain, rate 50") {
    // The shifted locus of this loop never crosses Re = 0 (dense-scan
    // oracle), so the test passes for arbitrarily large gains.
    const TransferFunction g = make_loop_tf(lag_params(900.0, 0.4));
    double oracle = 1e300;
    for (int i = 0; i <= 200000; ++i) {
        const double w = std::exp(std::log(1e-5) + (std::log(1e7) - std::log(1e-5)) * i / 200000.0);
        oracle = std::min(oracle, g(std::complex<double>(-50.0, w)).real());
    }
    REQUIRE(oracle >= -1e-9);
    const CircleTestResult r = circle_criterion(g, 50.0);
    CHECK(r.ok);
    CHECK(r.shifted_unstable_poles == 2);
}

TEST_CASE("circle criterion failure when the locus crosses the line") {
    // At rate 0 the locus dips below -1 once k exceeds k0.
    const MixedFeedbackParams p = lag_params(1.0, 0.4);
    const double k0 = k0_gain_bound(0.4, p);
    const CircleTestResult fail = circle_criterion(make_loop_tf(lag_params(1.01 * k0, 0.4)), 0.0);
    CHECK(!fail.ok);
    CHECK(fail.attained_min_real < -1.0);
    const CircleTestResult pass = circle_criterion(make_loop_tf(lag_params(0.99 * k0, 0.4)), 0.0);
    CHECK(pass.ok);
    CHECK(pass.certificate->p == 0);
}

TEST_CASE("circle criterion propagates shifted-axis poles") {
    CHECK_THROWS_AS(circle_criterion(make_loop_tf(lag_params(1.0, 0.4)), 10.0), ShiftedAxisPole);
}

TEST_CASE("k0 gain bound: frozen value and dense-grid bracketing") {
    const MixedFeedbackParams p = lag_params(1.0, 0.4);
    const double k0 = k0_gain_bound(0.4, p);
    CHECK(k0 == doctest::Approx(3.20647).epsilon(1e-4)); // regression baseline
    CHECK(k0 < 5.0);
    CHECK(k0_gain_bound(0.2, p) == doctest::Approx(7.52383).epsilon(1e-4));

    // Brute-force bracketing: the circle verdict flips within one grid step.
    const int n = 400;
    double last_pass = 0.0, first_fail = 1e9;
    for (int i = 0; i <= n; ++i) {
        const double k = 2.0 + (4.0 - 2.0) * i / n;
        const CircleTestResult r = circle_criterion(make_loop_tf(lag_params(k, 0.4)), 0.0);
        if (r.ok)
            last_pass = std::max(last_pass, k);
        else
            first_fail = std::min(first_fail, k);
    }
    const double step = 2.0 / n;
    CHECK(k0 >= last_pass - step);
    CHECK(k0 <= first_fail + step);
}

TEST_CASE("k2 gain bound: splitting precondition and branches") {
    const MixedFeedbackParams p = lag_params(1.0, 0.4);

    SUBCASE("rate left of every controller pole fails the precondition") {
        CHECK_THROWS_AS(k2_gain_bound(0.4, 0.1, p), PreconditionFailed);
    }
    SUBCASE("rate beyond the plant pole fails the precondition") {
        CHECK_THROWS_AS(k2_gain_bound(0.4, 200.0, p), PreconditionFailed);
    }
    SUBCASE("infinite branch at the oscillating balance") {
        CHECK(std::isinf(k2_gain_bound(0.4, 50.0, p)));
        CHECK(k2_gain_bound(0.4, 50.0, p) > 5.0);
    }
    SUBCASE("finite branch at weak positive feedback, with bracketing") {
        const double k2 = k2_gain_bound(0.02, 50.0, p);
        CHECK(k2 == doctest::Approx(33.33).epsilon(1e-3)); // regression baseline
        const CircleTestResult pass =
            circle_criterion(make_loop_tf(lag_params(0.99 * k2, 0.02)), 50.0);
        REQUIRE(pass.ok);
        CHECK(pass.certificate->p == 2);
        const CircleTestResult fail =
            circle_criterion(make_loop_tf(lag_params(1.01 * k2, 0.02)), 50.0);
        CHECK(!fail.ok);
    }
    SUBCASE("endpoint balances cancel a controller pole and fail the splitting") {
        CHECK_THROWS_AS(k2_gain_bound(0.0, 50.0, p), PreconditionFailed);
        CHECK_THROWS_AS(k2_gain_bound(1.0, 50.0, p), PreconditionFailed);
    }
}

TEST_CASE("k2 >= k0 across the oscillation-relevant balance range") {
    const MixedFeedbackParams p = lag_params(1.0, 0.4);
    for (int i = 0; i <= 18; ++i) {
        const double beta = 0.05 + 0.9 * i / 18.0;
        const double k0 = k0_gain_bound(beta, p);
        const double k2 = k2_gain_bound(beta, 50.0, p);
        CHECK(k2 >= k0);
    }
}

TEST_CASE("scaling invariance of the gain bounds") {
    // Scaling G by c and k by 1/c leaves the certificates unchanged, so the
    // bounds scale exactly inversely with the plant gain.
    const MixedFeedbackParams p1 = lag_params(1.0, 0.3);
    MixedFeedbackParams p2 = p1;
    const double c = 2.5;
    p2.plant = c * p1.plant;
    CHECK(k0_gain_bound(0.3, p2) * c == doctest::Approx(k0_gain_bound(0.3, p1)).epsilon(1e-10));
    // finite k2 branch (weak positive feedback)
    CHECK(k2_gain_bound(0.02, 50.0, p2) * c ==
          doctest::Approx(k2_gain_bound(0.02, 50.0, p1)).epsilon(1e-10));
}

TEST_CASE("default rate heuristic uses the two leftmost poles") {
    CHECK(default_rate_heuristic(lag_params(1.0, 0.4)) ==
          doctest::Approx(std::sqrt(100.0 * 10.0)).epsilon(1e-9));
}

TEST_CASE("root locus") {
    const MixedFeedbackParams p = lag_params(1.0, 0.4);
    std::vector<double> grid;
    for (int i = 0; i <= 150; ++i) grid.push_back(std::pow(10.0, -1.0 + 4.0 * i / 150.0));

    SUBCASE("zero gain gives the open-loop poles") {
        const auto loci = root_locus(0.4, p, {0.0});
        CHECK(testutil::match_distance(loci[0], {{-100.0, 0.0}, {-10.0, 0.0}, {-1.0, 0.0}}) <
              1e-8);
    }
    SUBCASE("fast positive / slow negative: the rightmost branch destabilizes") {
        for (double beta : {0.4, 0.8}) {
            const auto loci = root_locus(beta, p, grid);
            bool crossed = false;
            for (const auto& eigs : loci)
                if (max_real_part(eigs) > 0.0) crossed = true;
            CHECK(crossed);
        }
    }
    SUBCASE("slow positive / fast negative: no rate yields a uniform 2-splitting") {
        const MixedFeedbackParams slow{1.0, 0.5, 1.0, 0.1, first_order_lag(0.01)};
        for (double beta : {0.3, 0.8}) {
            const auto loci = root_locus(beta, slow, grid);
            for (double lambda = 15.0; lambda <= 95.0; lambda += 10.0) {
                bool uniform = true;
                for (const auto& eigs : loci) {
                    int count = 0;
                    for (const auto& e : eigs)
                        if (e.real() > -lambda) ++count;
                    if (count != 2) {
                        uniform = false;
                        break;
                    }
                }
                CHECK(!uniform);
            }
        }
    }
    SUBCASE("slope scales the effective gain") {
        const auto half = root_locus(0.4, p, {2.0}, 0.5);
        const auto full = root_locus(0.4, p, {1.0}, 1.0);
        CHECK(testutil::match_distance(half[0], full[0]) < 1e-9);
    }
}

TEST_CASE("dominance map structure on a coarse grid") {
    DominanceMapConfig cfg;
    cfg.beta_points = 11;
    cfg.k_points = 25;
    cfg.lambda = 50.0;
    cfg.threads = 2;
    const DominanceMapResult map = dominance_map(lag_params(1.0, 0.4), cfg);

    REQUIRE(map.betas.size() == 11);
    REQUIRE(map.ks.size() == 25);
    REQUIRE(map.labels.size() == 11 * 25);
    REQUIRE(map.k0_curve.size() == 11);

    SUBCASE("labels never return to ZeroDominant once k has left it") {
        for (int i = 0; i < 11; ++i) {
            bool left = false;
            for (int j = 0; j < 25; ++j) {
                const RegionLabel l = map.at(i, j);
                if (l != RegionLabel::ZeroDominant) left = true;
                if (left) CHECK(l != RegionLabel::ZeroDominant);
            }
        }
    }
    SUBCASE("k0 column values match the direct computation") {
        for (int i : {2, 5, 8}) {
            const double direct = k0_gain_bound(map.betas[i], lag_params(1.0, 0.4), cfg.omega_grid);
            CHECK(map.k0_curve[i] == doctest::Approx(direct).epsilon(1e-12));
        }
    }
    SUBCASE("endpoint balances have no 2-dominance column") {
        CHECK(std::isnan(map.k2_curve.front()));
        CHECK(std::isnan(map.k2_curve.back()));
    }
    SUBCASE("deterministic across thread counts") {
        DominanceMapConfig cfg1 = cfg;
        cfg1.threads = 1;
        const DominanceMapResult map1 = dominance_map(lag_params(1.0, 0.4), cfg1);
        CHECK(map1.labels == map.labels);
        CHECK(map1.k0_curve == map.k0_curve);
    }
}
