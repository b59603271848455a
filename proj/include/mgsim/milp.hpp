#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace mgsim::milp {

enum class Relation { LessEqual, Equal, GreaterEqual };

enum class SolveStatus { Optimal, Infeasible, Unbounded, PivotLimit, NodeLimit };

std::string to_string(SolveStatus s);
std::string to_string(Relation r);

/// One dense constraint row: coeffs . x  <rel>  rhs.
struct Constraint {
    std::vector<double> coeffs;
    Relation rel = Relation::LessEqual;
    double rhs = 0.0;
};

/// Minimization problem over box-bounded variables; integral variables are
/// restricted to {0,1}. All bounds must be finite.
struct LinearProgram {
    std::vector<double> cost;
    std::vector<Constraint> constraints;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<std::uint8_t> is_binary;

    std::size_t num_vars() const { return cost.size(); }
    std::size_t num_constraints() const { return constraints.size(); }

    std::size_t add_variable(double lo, double hi, double cost_coeff, bool binary = false);
    std::size_t add_constraint(Constraint c);

    /// Throws ValidationError when row lengths, bounds, or binary flags are inconsistent.
    void validate() const;

    /// Human-readable equation-per-line dump for bug reports.
    std::string dump() const;
};

struct SolverOptions {
    double feas_tol = 1e-6;   // max absolute row violation, on scaled rows
    double dual_tol = 1e-6;   // relative duality-gap tolerance
    double int_tol = 1e-6;    // binary integrality tolerance
    long node_limit = 200000;
    long pivot_limit = 1000000;

    void validate() const;
};

struct LpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> primal;
    std::vector<double> duals;   // d(objective)/d(rhs), one per constraint
    double objective = 0.0;
    long pivot_count = 0;
    double max_violation = 0.0;  // feasibility residual on scaled rows
};

struct MilpSolution {
    SolveStatus status = SolveStatus::Infeasible;
    std::vector<double> primal;
    double objective = 0.0;
    long node_count = 0;
    double incumbent_bound_gap = 0.0;
};

/// Two-phase primal simplex on a dense tableau. Integrality flags are ignored.
LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& opts = {});

/// Same, with per-variable bound overrides (used by branch and bound to fix
/// binaries without copying the constraint matrix).
LpSolution solve_lp_with_bounds(const LinearProgram& lp, const std::vector<double>& lower,
                                const std::vector<double>& upper, const SolverOptions& opts);

/// Depth-first branch and bound over the binary variables.
MilpSolution solve_milp(const LinearProgram& lp, const SolverOptions& opts = {});

/// Returns a pure LP with the binary variables clamped to `assignment` via
/// equal lower/upper bounds. Constraint rows are untouched, so dual indices
/// stay aligned with the input. `assignment` holds one value in {0,1} per
/// binary-flagged variable, in increasing variable order.
LinearProgram fix_binaries(const LinearProgram& lp, const std::vector<double>& assignment);

} // namespace mgsim::milp
