#include <doctest.h>

#include <cmath>
#include <random>

#include "mixedosc/equilibria.hpp"
#include "mixedosc/errors.hpp"
#include "test_helpers.hpp"

using namespace mixedosc;
using testutil::lag_params;

namespace {

// Independent scalar oracle: roots of y/g + r = tanh(y) by bisection on a
// fine bracketing grid.
std::vector<double> oracle_roots(double g, double r) {
    auto f = [&](double y) { return y / g + r - std::tanh(y); };
    const double span = std::abs(g) * (1.0 + std::abs(r)) + 1.0;
    std::vector<double> out;
    const int n = 20000;
    double prev_y = -span, prev_f = f(prev_y);
    for (int i = 1; i <= n; ++i) {
        const double y = -span + 2.0 * span * i / n;
        const double fy = f(y);
        if ((prev_f < 0.0) != (fy < 0.0)) {
            double lo = prev_y, hi = y;
            for (int it = 0; it < 100; ++it) {
                const double mid = 0.5 * (lo + hi);
                ((f(lo) < 0.0) == (f(mid) < 0.0) ? lo : hi) = mid;
            }
            out.push_back(0.5 * (lo + hi));
        }
        prev_y = y;
        prev_f = fy;
    }
    return out;
}

} // namespace

TEST_CASE("origin is always an equilibrium for zero reference") {
    for (double beta : {0.2, 0.4, 0.55, 0.8}) {
        const auto eqs = find_equilibria(lag_params(5.0, beta), 0.0);
        bool has_origin = false;
        for (const auto& e : eqs)
            if (std::abs(e.y1) < 1e-12) has_origin = true;
        CHECK(has_origin);
    }
}

TEST_CASE("three equilibria at strong positive feedback, matching the oracle") {
    // g = k P(0) (2 beta - 1) = 3 at (k, beta) = (5, 0.8).
    const auto eqs = find_equilibria(lag_params(5.0, 0.8), 0.0);
    REQUIRE(eqs.size() == 3);
    const auto oracle = oracle_roots(3.0, 0.0);
    REQUIRE(oracle.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(eqs[i].y1 == doctest::Approx(oracle[i]).epsilon(1e-9));
    CHECK(eqs[0].y1 < 0.0);
    CHECK(eqs[1].y1 == doctest::Approx(0.0));
    CHECK(eqs[2].y1 > 0.0);
    // Outer equilibria stable, origin unstable (bistable regime).
    CHECK(eqs[0].stable);
    CHECK(!eqs[1].stable);
    CHECK(eqs[2].stable);
}

TEST_CASE("single equilibrium for nonpositive DC gain") {
    const auto eqs = find_equilibria(lag_params(5.0, 0.4), 0.0); // g = -1
    REQUIRE(eqs.size() == 1);
    CHECK(eqs[0].y1 == doctest::Approx(0.0));
    CHECK(!eqs[0].stable); // oscillating regime: origin unstable
}

TEST_CASE("residual invariants hold at every returned root") {
    for (double beta : {0.4, 0.7, 0.8}) {
        const MixedFeedbackParams p = lag_params(5.0, beta);
        const ClosedLoopSystem sys = assemble_closed_loop(p);
        const double g = sys.dc_loop_gain();
        for (double r : {0.0, 0.3, -1.2}) {
            const auto eqs = find_equilibria(sys, r);
            REQUIRE(!eqs.empty());
            for (const auto& e : eqs) {
                if (g != 0.0) CHECK(std::abs(e.y1 / g + r - sys.phi(e.y1)) <= 1e-10);
                const Eigen::VectorXd residual =
                    sys.A * e.x + sys.B1 * sys.phi(sys.K.dot(e.x)) + sys.r_inject * r;
                CHECK(residual.norm() <= 1e-10);
                CHECK(sys.K.dot(e.x) == doctest::Approx(e.y1).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("root count parity and completeness") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> kdist(0.5, 40.0);
    std::uniform_real_distribution<double> bdist(0.0, 1.0);
    int done = 0;
    while (done < 100) {
        const double k = kdist(rng);
        const double beta = bdist(rng);
        const MixedFeedbackParams p = lag_params(k, beta);
        const ClosedLoopSystem sys = assemble_closed_loop(p);
        const double g = sys.dc_loop_gain();
        std::vector<Equilibrium> eqs;
        try {
            eqs = find_equilibria(sys, 0.0);
        } catch (const MarginalEquilibrium&) {
            continue; // boundary draw; parity undefined there
        }
        CHECK((eqs.size() == 1 || eqs.size() == 3));
        if (g <= 0.0) CHECK(eqs.size() == 1);

        // No sign change of the fixed-point function between consecutive roots.
        auto f = [&](double y) { return y + g * (0.0 - sys.phi(y)); };
        for (std::size_t i = 0; i + 1 < eqs.size(); ++i) {
            const double a = eqs[i].y1, b = eqs[i + 1].y1;
            int changes = 0;
            double prev = f(a + (b - a) * 1e-4);
            for (int s = 1; s <= 200; ++s) {
                const double y = a + (b - a) * (1e-4 + (1.0 - 2e-4) * s / 200.0);
                const double v = f(y);
                if ((prev < 0.0) != (v < 0.0)) ++changes;
                prev = v;
            }
            CHECK(changes == 0);
        }
        ++done;
    }
}

TEST_CASE("large reference leaves exactly one equilibrium") {
    const auto eqs = find_equilibria(lag_params(5.0, 0.8), 2.5);
    CHECK(eqs.size() == 1);
}

TEST_CASE("classification of the origin across regimes") {
    SUBCASE("below k0 the origin is stable") {
        const ClosedLoopSystem sys = assemble_closed_loop(lag_params(5.0, 0.2));
        const EquilibriumClassification c =
            classify_equilibrium(sys, Eigen::VectorXd::Zero(3));
        CHECK(c.stable);
    }
    SUBCASE("in the oscillation region the origin is unstable") {
        const ClosedLoopSystem sys = assemble_closed_loop(lag_params(5.0, 0.4));
        const EquilibriumClassification c =
            classify_equilibrium(sys, Eigen::VectorXd::Zero(3));
        CHECK(!c.stable);
    }
    SUBCASE("marginal linearization raises instead of guessing") {
        // Gain bisected so the leading eigenvalue sits numerically on the axis.
        const ClosedLoopSystem sys = assemble_closed_loop(lag_params(1.421377064434, 0.8));
        CHECK_THROWS_AS(classify_equilibrium(sys, Eigen::VectorXd::Zero(3)), MarginalEquilibrium);
    }
    SUBCASE("non-equilibrium state is rejected") {
        const ClosedLoopSystem sys = assemble_closed_loop(lag_params(5.0, 0.4));
        Eigen::VectorXd x(3);
        x << 1.0, 2.0, 3.0; // lag states inconsistent with the plant output
        CHECK_THROWS_AS(classify_equilibrium(sys, x), InvalidInput);
    }
}

TEST_CASE("region labels at the three reference points") {
    CHECK(classify_region(lag_params(5.0, 0.2), 50.0, 0.0) == RegionLabel::ZeroDominant);
    CHECK(classify_region(lag_params(5.0, 0.4), 50.0, 0.0) == RegionLabel::Oscillation);
    CHECK(classify_region(lag_params(5.0, 0.8), 50.0, 0.0) ==
          RegionLabel::OscillationPlusFixedPoints);
}

TEST_CASE("narrow band above k0 with a still-stable origin") {
    // k0(0.8) ~ 1.375 while the origin destabilizes only at k ~ 1.421; in
    // between the loop is 2-dominant with a unique stable equilibrium.
    CHECK(classify_region(lag_params(1.40, 0.8), 50.0, 0.0) == RegionLabel::TwoDomStableEq);
}

TEST_CASE("label progression along the gain axis at beta = 0.6") {
    CHECK(classify_region(lag_params(1.0, 0.6), 50.0, 0.0) == RegionLabel::ZeroDominant);
    CHECK(classify_region(lag_params(5.0, 0.6), 50.0, 0.0) == RegionLabel::Oscillation);
    CHECK(classify_region(lag_params(900.0, 0.6), 50.0, 0.0) ==
          RegionLabel::OscillationPlusFixedPoints);
}
