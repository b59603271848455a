#include <doctest.h>

#include "mgsim/errors.hpp"
#include "mgsim/microgrid.hpp"
#include "support/mg_checks.hpp"
#include "support/random_microgrid.hpp"

#include <cmath>
#include <limits>

using namespace mgsim::microgrid;
using mgsim::AwardExceedsTie;

namespace {

MicrogridCase base_case(int horizon, std::vector<double> load, double tie) {
    MicrogridCase mg;
    mg.id = "test";
    mg.horizon = horizon;
    mg.fixed_load.push_back(std::move(load));
    mg.tie_limit = tie;
    return mg;
}

DispatchableDer simple_der(double p_min, double p_max, double mc) {
    DispatchableDer der;
    der.name = "dg";
    der.p_min = p_min;
    der.p_max = p_max;
    der.marginal_cost = mc;
    return der;
}

// Enumeration oracle for the two-hour storage arbitrage case: grid over
// charge in hour 1 and discharge in hour 2 in half-MW steps, terminal soc
// equal to the initial one.
double arbitrage_oracle(double rho1, double rho2, double p_cap, double soc_cap) {
    double best = std::numeric_limits<double>::infinity();
    for (int ci = 0; ci <= 10; ++ci) {
        for (int di = 0; di <= 10; ++di) {
            const double c = ci * p_cap / 10.0;
            const double d = di * p_cap / 10.0;
            if (c > soc_cap) continue;
            if (std::fabs(c - d) > 1e-12) continue;  // terminal = initial, unit efficiency
            best = std::min(best, rho1 * c - rho2 * d);
        }
    }
    return best;
}

} // namespace

TEST_CASE("schedule: no DERs passes the load straight through") {
    MicrogridCase mg = base_case(3, {4.0, 7.0, 5.0}, 100.0);
    const std::vector<double> price{20.0, 25.0, 30.0};
    const MicrogridSchedule s = schedule(mg, price);
    double expected = 0.0;
    for (int t = 0; t < 3; ++t) {
        CHECK(s.exchange[t] == doctest::Approx(mg.fixed_load[0][t]));
        CHECK(s.curtailment[t] == doctest::Approx(0.0));
        expected += price[t] * mg.fixed_load[0][t];
    }
    CHECK(s.total_cost == doctest::Approx(expected));
    CHECK(net_load(s) == s.exchange);
}

TEST_CASE("schedule: islanded deficit becomes curtailment") {
    MicrogridCase mg = base_case(2, {10.0, 10.0}, 0.0);
    mg.dispatchables = {simple_der(0.0, 8.0, 30.0)};
    const MicrogridSchedule s = schedule(mg, {50.0, 50.0});
    for (int t = 0; t < 2; ++t) {
        CHECK(s.der_power[0][t] == doctest::Approx(8.0));
        CHECK(s.curtailment[t] == doctest::Approx(2.0));
        CHECK(s.exchange[t] == doctest::Approx(0.0));
    }
    CHECK(s.total_cost == doctest::Approx(2 * (8.0 * 30.0 + 2.0 * 10000.0)));
}

TEST_CASE("schedule: cheap grid beats local generation") {
    // Import at 20 costs 200/h; generating at 30 costs 300/h.
    MicrogridCase mg = base_case(2, {10.0, 10.0}, 1000.0);
    mg.dispatchables = {simple_der(0.0, 20.0, 30.0)};
    const MicrogridSchedule s = schedule(mg, {20.0, 20.0});
    for (int t = 0; t < 2; ++t) {
        CHECK(s.exchange[t] == doctest::Approx(10.0));
        CHECK(s.der_power[0][t] == doctest::Approx(0.0));
        CHECK(s.der_on[0][t] == 0);
    }
    CHECK(s.total_cost == doctest::Approx(400.0));
}

TEST_CASE("schedule: storage arbitrage matches the enumeration oracle") {
    MicrogridCase mg = base_case(2, {0.0, 0.0}, 1000.0);
    StorageDer st;
    st.name = "es";
    st.charge_max = st.discharge_max = 5.0;
    st.energy_capacity = 10.0;
    st.soc_min = 0.0;
    st.soc_max = 10.0;
    st.soc_initial = 0.0;
    st.require_terminal_soc = true;
    st.terminal_soc = 0.0;
    mg.storages = {st};
    const MicrogridSchedule s = schedule(mg, {10.0, 50.0});
    const double oracle = arbitrage_oracle(10.0, 50.0, 5.0, 10.0);
    CHECK(oracle == doctest::Approx(-200.0));
    CHECK(s.total_cost == doctest::Approx(oracle));
    CHECK(s.exchange[0] == doctest::Approx(5.0));
    CHECK(s.exchange[1] == doctest::Approx(-5.0));
    CHECK(net_load(s)[0] == doctest::Approx(5.0));
    CHECK(net_load(s)[1] == doctest::Approx(-5.0));
}

TEST_CASE("schedule: adjustable load lands on the cheap hours") {
    MicrogridCase mg = base_case(4, {0.0, 0.0, 0.0, 0.0}, 100.0);
    AdjustableLoad al;
    al.name = "flex";
    al.p_min = 2.0;
    al.p_max = 4.0;
    al.required_energy = 6.0;
    al.window_start = 1;
    al.window_end = 3;
    al.pickup_rate = al.drop_rate = 4.0;
    mg.adjustable_loads = {al};
    const MicrogridSchedule s = schedule(mg, {50.0, 10.0, 40.0, 12.0});
    CHECK(s.adjustable_power[0][0] == doctest::Approx(0.0));
    double served = 0.0;
    for (int t = 1; t <= 3; ++t) served += s.adjustable_power[0][t];
    CHECK(served == doctest::Approx(6.0));
    // Cheapest split: 4 MW at hour 1 and 2 MW at hour 3.
    CHECK(s.adjustable_power[0][1] == doctest::Approx(4.0));
    CHECK(s.adjustable_power[0][3] == doctest::Approx(2.0));
    CHECK(s.total_cost == doctest::Approx(4.0 * 10.0 + 2.0 * 12.0));
}

TEST_CASE("fixed exchange: following the unconstrained optimum costs no deviation") {
    MicrogridCase mg = base_case(3, {6.0, 6.0, 6.0}, 50.0);
    mg.dispatchables = {simple_der(0.0, 10.0, 30.0)};
    const std::vector<double> price{20.0, 45.0, 25.0};
    const MicrogridSchedule best = schedule(mg, price);
    const MicrogridSchedule follow = schedule_with_fixed_exchange(mg, best.exchange);
    for (int t = 0; t < 3; ++t) {
        CHECK(follow.deviation_up[t] == doctest::Approx(0.0));
        CHECK(follow.deviation_down[t] == doctest::Approx(0.0));
        CHECK(follow.exchange[t] == doctest::Approx(best.exchange[t]));
    }
}

TEST_CASE("fixed exchange: zero award self-supplies when generation suffices") {
    MicrogridCase mg = base_case(2, {5.0, 5.0}, 50.0);
    mg.dispatchables = {simple_der(0.0, 10.0, 30.0)};
    const MicrogridSchedule s = schedule_with_fixed_exchange(mg, {0.0, 0.0});
    for (int t = 0; t < 2; ++t) {
        CHECK(s.deviation_up[t] == doctest::Approx(0.0));
        CHECK(s.deviation_down[t] == doctest::Approx(0.0));
        CHECK(s.der_power[0][t] == doctest::Approx(5.0));
        CHECK(s.curtailment[t] == doctest::Approx(0.0));
    }
}

TEST_CASE("fixed exchange: award beyond the tie limit is rejected") {
    MicrogridCase mg = base_case(1, {5.0}, 3.0);
    CHECK_THROWS_AS((void)schedule_with_fixed_exchange(mg, {5.0}), AwardExceedsTie);
}

TEST_CASE("demand bid: self-generation threshold creates one step") {
    MicrogridCase mg = base_case(2, {10.0, 10.0}, 1000.0);
    mg.dispatchables = {simple_der(0.0, 10.0, 30.0)};
    const BidCurve curve = build_demand_bid(mg, {20.0, 40.0});
    for (int t = 0; t < 2; ++t) {
        REQUIRE(curve.hours[t].size() == 1);
        CHECK(curve.hours[t][0].price == doctest::Approx(20.0));
        CHECK(curve.hours[t][0].quantity == doctest::Approx(10.0));
    }
}

TEST_CASE("demand bid: inelastic load bids at the highest sample") {
    MicrogridCase mg = base_case(2, {10.0, 10.0}, 1000.0);
    const BidCurve curve = build_demand_bid(mg, {10.0, 30.0, 50.0});
    for (int t = 0; t < 2; ++t) {
        REQUIRE(curve.hours[t].size() == 1);
        CHECK(curve.hours[t][0].price == doctest::Approx(50.0));
        CHECK(curve.hours[t][0].quantity == doctest::Approx(10.0));
    }
    curve.validate(mg.tie_limit);
}

TEST_CASE("demand bid: nothing to buy yields an empty curve") {
    MicrogridCase mg = base_case(2, {0.0, 0.0}, 1000.0);
    const BidCurve curve = build_demand_bid(mg, {10.0, 30.0});
    for (int t = 0; t < 2; ++t) CHECK(curve.hours[t].empty());
}

TEST_CASE("schedule: random cases satisfy balance, bounds, and energy equalities") {
    for (unsigned seed = 1; seed <= 25; ++seed) {
        const MicrogridCase mg = testsupport::random_microgrid(seed);
        const auto price = testsupport::random_price_series(seed + 900, mg.horizon);
        const MicrogridSchedule s = schedule(mg, price);
        const auto audit = testsupport::audit_schedule(mg, s);
        CAPTURE(seed);
        CHECK(audit.balance_residual <= 1e-6);
        CHECK(audit.bound_violation <= 1e-6);
        CHECK(audit.energy_residual <= 1e-6);
        CHECK(audit.soc_residual <= 1e-6);
        // Objective must match an independent re-evaluation of the schedule.
        const double recomputed = evaluate_cost(mg, s, price);
        CHECK(std::fabs(recomputed - s.total_cost) <= 1e-6 * (1.0 + std::fabs(s.total_cost)));
        // All prices and marginal costs sit below voll, so nothing is shed.
        for (double ls : s.curtailment) CHECK(ls <= 1e-9);
    }
}

TEST_CASE("schedule: optimal cost is concave in the price and obeys subgradients") {
    for (unsigned seed = 40; seed <= 52; ++seed) {
        const MicrogridCase mg = testsupport::random_microgrid(seed);
        const auto rho1 = testsupport::random_price_series(seed + 1000, mg.horizon);
        const auto rho2 = testsupport::random_price_series(seed + 2000, mg.horizon);
        const MicrogridSchedule s1 = schedule(mg, rho1);
        const MicrogridSchedule s2 = schedule(mg, rho2);
        CAPTURE(seed);
        for (double lambda : {0.25, 0.5, 0.75}) {
            std::vector<double> mix(mg.horizon);
            for (int t = 0; t < mg.horizon; ++t)
                mix[t] = lambda * rho1[t] + (1.0 - lambda) * rho2[t];
            const double mixed = schedule(mg, mix).total_cost;
            const double chord = lambda * s1.total_cost + (1.0 - lambda) * s2.total_cost;
            CHECK(mixed >= chord - 1e-6 * (1.0 + std::fabs(mixed)));
        }
        double linear = s1.total_cost;
        for (int t = 0; t < mg.horizon; ++t) linear += (rho2[t] - rho1[t]) * s1.exchange[t];
        CHECK(s2.total_cost <= linear + 1e-6 * (1.0 + std::fabs(s2.total_cost)));
    }
}

TEST_CASE("validation: voll must dominate DER marginal costs") {
    MicrogridCase mg = base_case(1, {5.0}, 10.0);
    mg.dispatchables = {simple_der(0.0, 5.0, 30.0)};
    mg.voll = 25.0;
    CHECK_THROWS_AS(mg.validate(), mgsim::ValidationError);
}
