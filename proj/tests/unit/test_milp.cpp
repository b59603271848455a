#include <doctest.h>

#include "mgsim/errors.hpp"
#include "mgsim/milp.hpp"
#include "support/lp_checks.hpp"
#include "support/random_problems.hpp"

#include <cmath>
#include <limits>

using namespace mgsim::milp;
using mgsim::AssignmentMismatch;

namespace {

LinearProgram single_var(double lo, double hi, double cost) {
    LinearProgram lp;
    lp.add_variable(lo, hi, cost);
    return lp;
}

} // namespace

TEST_CASE("lp: single active >= constraint") {
    LinearProgram lp = single_var(0.0, 10.0, 1.0);
    lp.add_constraint({{1.0}, Relation::GreaterEqual, 1.0});
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(1.0));
    CHECK(sol.objective == doctest::Approx(1.0));
    CHECK(sol.duals[0] == doctest::Approx(1.0));
}

TEST_CASE("lp: contradictory rows are infeasible") {
    LinearProgram lp = single_var(-10.0, 10.0, 0.0);
    lp.add_constraint({{1.0}, Relation::LessEqual, 0.0});
    lp.add_constraint({{1.0}, Relation::GreaterEqual, 1.0});
    CHECK(solve_lp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: vertex optimum and dual from rhs perturbation") {
    // min 2x+3y s.t. x+y >= 4, x <= 3, x,y >= 0. Feasible-region vertices:
    // (3,1), (0,4), (3,large->bounded by box). Hand enumeration gives (3,1).
    LinearProgram lp;
    lp.add_variable(0.0, 100.0, 2.0);
    lp.add_variable(0.0, 100.0, 3.0);
    lp.add_constraint({{1.0, 1.0}, Relation::GreaterEqual, 4.0});
    lp.add_constraint({{1.0, 0.0}, Relation::LessEqual, 3.0});
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal[0] == doctest::Approx(3.0));
    CHECK(sol.primal[1] == doctest::Approx(1.0));
    CHECK(sol.objective == doctest::Approx(9.0));
    CHECK(sol.duals[0] == doctest::Approx(3.0));

    // Dual cross-check: raising the rhs to 5 must raise the optimum by 3.
    lp.constraints[0].rhs = 5.0;
    const LpSolution shifted = solve_lp(lp);
    REQUIRE(shifted.status == SolveStatus::Optimal);
    CHECK(shifted.objective == doctest::Approx(12.0));
    CHECK(shifted.objective - sol.objective == doctest::Approx(sol.duals[0]));
}

TEST_CASE("lp: negative lower bounds are shifted, not split") {
    LinearProgram lp;
    lp.add_variable(-8.0, 5.0, 1.0);
    lp.add_variable(-3.0, 3.0, -1.0);
    lp.add_constraint({{1.0, 1.0}, Relation::GreaterEqual, -4.0});
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    // x pushed down, y pushed up: x + y >= -4 binds at x = -7, y = 3.
    CHECK(sol.primal[1] == doctest::Approx(3.0));
    CHECK(sol.primal[0] == doctest::Approx(-7.0));
    CHECK(sol.objective == doctest::Approx(-10.0));
}

TEST_CASE("lp: equality row dual is unrestricted in sign") {
    // min -x s.t. x = 2: raising the rhs lowers the objective, dual -1.
    LinearProgram lp = single_var(0.0, 10.0, -1.0);
    lp.add_constraint({{1.0}, Relation::Equal, 2.0});
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.duals[0] == doctest::Approx(-1.0));
}

TEST_CASE("lp: empty problem and zero-row constraints") {
    LinearProgram lp;
    Constraint zero_eq;
    zero_eq.rel = Relation::Equal;
    zero_eq.rhs = 0.0;
    lp.add_constraint(zero_eq);
    const LpSolution sol = solve_lp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == 0.0);
    CHECK(sol.duals[0] == 0.0);

    LinearProgram bad;
    Constraint impossible;
    impossible.rel = Relation::GreaterEqual;
    impossible.rhs = 5.0;
    bad.add_constraint(impossible);
    CHECK(solve_lp(bad).status == SolveStatus::Infeasible);
}

TEST_CASE("lp: pivot limit reported") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -1.0);
    lp.add_variable(0.0, 1.0, -1.0);
    lp.add_constraint({{1.0, 1.0}, Relation::LessEqual, 1.5});
    SolverOptions opts;
    opts.pivot_limit = 1;
    CHECK(solve_lp(lp, opts).status == SolveStatus::PivotLimit);
}

TEST_CASE("milp: integral relaxation needs one node") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -1.0, true);
    lp.add_constraint({{1.0}, Relation::LessEqual, 1.0});
    const MilpSolution sol = solve_milp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal[0] == 1.0);
    CHECK(sol.objective == doctest::Approx(-1.0));
    CHECK(sol.node_count == 1);
}

TEST_CASE("milp: knapsack pair picks the heavier item") {
    // All four binary points: (0,0)->0, (1,0)->-1, (0,1)->-2, (1,1) infeasible.
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -1.0, true);
    lp.add_variable(0.0, 1.0, -2.0, true);
    lp.add_constraint({{1.0, 1.0}, Relation::LessEqual, 1.0});
    const MilpSolution sol = solve_milp(lp);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.primal[0] == 0.0);
    CHECK(sol.primal[1] == 1.0);
    CHECK(sol.objective == doctest::Approx(-2.0));
}

TEST_CASE("milp: unattainable binary sum is infeasible") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, 0.0, true);
    lp.add_variable(0.0, 1.0, 0.0, true);
    lp.add_constraint({{1.0, 1.0}, Relation::GreaterEqual, 3.0});
    CHECK(solve_milp(lp).status == SolveStatus::Infeasible);
}

TEST_CASE("milp: node limit returns incumbent and gap") {
    // Small knapsack with a fractional relaxation so branching is needed.
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -5.0, true);
    lp.add_variable(0.0, 1.0, -4.0, true);
    lp.add_variable(0.0, 1.0, -3.0, true);
    lp.add_constraint({{2.0, 3.0, 1.0}, Relation::LessEqual, 3.5});
    SolverOptions opts;
    opts.node_limit = 2;
    const MilpSolution sol = solve_milp(lp, opts);
    CHECK(sol.status == SolveStatus::NodeLimit);
    CHECK(sol.node_count == 2);
}

TEST_CASE("fix_binaries: clamps, keeps rows aligned, validates input") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -1.0, true);
    lp.add_variable(0.0, 5.0, 2.0);
    lp.add_constraint({{1.0, 1.0}, Relation::LessEqual, 4.0});

    const LinearProgram fixed = fix_binaries(lp, {1.0});
    CHECK(fixed.lower[0] == 1.0);
    CHECK(fixed.upper[0] == 1.0);
    CHECK(!fixed.is_binary[0]);
    CHECK(fixed.num_constraints() == lp.num_constraints());
    const LpSolution sol = solve_lp(fixed);
    REQUIRE(sol.status == SolveStatus::Optimal);
    CHECK(sol.objective == doctest::Approx(-1.0));

    CHECK_THROWS_AS((void)fix_binaries(lp, {1.0, 0.0}), AssignmentMismatch);
    CHECK_THROWS_AS((void)fix_binaries(lp, {0.5}), AssignmentMismatch);

    // Empty binary set: identity.
    LinearProgram pure;
    pure.add_variable(0.0, 1.0, 3.0);
    const LinearProgram same = fix_binaries(pure, {});
    CHECK(same.lower[0] == 0.0);
    CHECK(same.upper[0] == 1.0);
}

TEST_CASE("lp: random feasible problems satisfy duality and feasibility") {
    SolverOptions opts;
    int solved = 0;
    for (unsigned seed = 1; seed <= 40; ++seed) {
        const LinearProgram lp = testsupport::random_problem(seed, {10, 0, 12, true});
        const LpSolution sol = solve_lp(lp, opts);
        REQUIRE(sol.status == SolveStatus::Optimal);
        ++solved;
        CHECK(testsupport::primal_violation(lp, sol.primal) <= 1e-6);
        const double dual_obj = testsupport::dual_objective(lp, sol.duals);
        CHECK(std::fabs(sol.objective - dual_obj) <= 1e-6 * (1.0 + std::fabs(sol.objective)));
        CHECK(testsupport::complementary_slackness_residual(lp, sol.primal, sol.duals) <= 1e-5);
        CHECK(testsupport::dual_sign_violation(lp, sol.duals) <= 1e-9);
    }
    CHECK(solved == 40);
}

TEST_CASE("milp: objective matches exhaustive enumeration") {
    SolverOptions opts;
    for (unsigned seed = 100; seed < 120; ++seed) {
        const LinearProgram lp = testsupport::random_problem(seed, {6, 6, 10, true});
        const MilpSolution sol = solve_milp(lp, opts);
        const double oracle = testsupport::enumerate_milp_optimum(lp, opts);
        REQUIRE(sol.status == SolveStatus::Optimal);
        CHECK(std::fabs(sol.objective - oracle) <= 1e-6 * (1.0 + std::fabs(oracle)));
        for (std::size_t j = 0; j < lp.num_vars(); ++j)
            if (lp.is_binary[j]) CHECK((sol.primal[j] == 0.0 || sol.primal[j] == 1.0));
    }
}

TEST_CASE("milp: not-necessarily-feasible problems agree with the oracle") {
    SolverOptions opts;
    for (unsigned seed = 300; seed < 312; ++seed) {
        const LinearProgram lp = testsupport::random_problem(seed, {4, 5, 8, false});
        const MilpSolution sol = solve_milp(lp, opts);
        const double oracle = testsupport::enumerate_milp_optimum(lp, opts);
        if (std::isinf(oracle)) {
            CHECK(sol.status == SolveStatus::Infeasible);
        } else {
            REQUIRE(sol.status == SolveStatus::Optimal);
            CHECK(std::fabs(sol.objective - oracle) <= 1e-6 * (1.0 + std::fabs(oracle)));
        }
    }
}

TEST_CASE("solver runs are bitwise deterministic") {
    const LinearProgram lp = testsupport::random_problem(7, {8, 6, 10, true});
    const MilpSolution a = solve_milp(lp);
    const MilpSolution b = solve_milp(lp);
    REQUIRE(a.status == SolveStatus::Optimal);
    REQUIRE(a.primal.size() == b.primal.size());
    for (std::size_t j = 0; j < a.primal.size(); ++j) CHECK(a.primal[j] == b.primal[j]);
    CHECK(a.objective == b.objective);
    CHECK(a.node_count == b.node_count);
}

TEST_CASE("dump renders one equation per line") {
    LinearProgram lp;
    lp.add_variable(0.0, 1.0, -1.0, true);
    lp.add_variable(-2.0, 5.0, 2.5);
    lp.add_constraint({{1.0, 1.0}, Relation::LessEqual, 4.0});
    const std::string text = lp.dump();
    CHECK(text.find("min") != std::string::npos);
    CHECK(text.find("<= 4") != std::string::npos);
    CHECK(text.find("binary") != std::string::npos);
}

TEST_CASE("validate rejects malformed programs") {
    LinearProgram lp;
    lp.add_variable(1.0, 0.0, 0.0);
    CHECK_THROWS_AS(lp.validate(), mgsim::ValidationError);

    LinearProgram lp2;
    lp2.add_variable(0.0, 1.0, 0.0);
    lp2.constraints.push_back({{1.0, 2.0}, Relation::Equal, 0.0});
    CHECK_THROWS_AS(lp2.validate(), mgsim::ValidationError);

    LinearProgram lp3;
    lp3.add_variable(0.0, 2.0, 0.0, true);
    CHECK_THROWS_AS(lp3.validate(), mgsim::ValidationError);
}
