#include "mgsim/errors.hpp"
#include "mgsim/milp.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace mgsim::milp {

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::PivotLimit: return "PivotLimit";
        case SolveStatus::NodeLimit: return "NodeLimit";
    }
    return "?";
}

std::string to_string(Relation r) {
    switch (r) {
        case Relation::LessEqual: return "<=";
        case Relation::Equal: return "=";
        case Relation::GreaterEqual: return ">=";
    }
    return "?";
}

std::size_t LinearProgram::add_variable(double lo, double hi, double cost_coeff, bool binary) {
    cost.push_back(cost_coeff);
    lower.push_back(lo);
    upper.push_back(hi);
    is_binary.push_back(binary ? 1 : 0);
    for (Constraint& c : constraints) c.coeffs.push_back(0.0);
    return cost.size() - 1;
}

std::size_t LinearProgram::add_constraint(Constraint c) {
    c.coeffs.resize(num_vars(), 0.0);
    constraints.push_back(std::move(c));
    return constraints.size() - 1;
}

void SolverOptions::validate() const {
    if (!(feas_tol > 0.0) || !(dual_tol > 0.0) || !(int_tol > 0.0))
        throw ValidationError("SolverOptions", "tolerances must be positive");
    if (node_limit <= 0 || pivot_limit <= 0)
        throw ValidationError("SolverOptions", "limits must be positive");
}

void LinearProgram::validate() const {
    const std::size_t n = num_vars();
    if (lower.size() != n || upper.size() != n || is_binary.size() != n)
        throw ValidationError("LinearProgram", "cost/bound/flag arrays differ in length");
    for (std::size_t j = 0; j < n; ++j) {
        if (!std::isfinite(lower[j]) || !std::isfinite(upper[j]))
            throw ValidationError("LinearProgram",
                                  "variable " + std::to_string(j) + " has non-finite bounds");
        if (lower[j] > upper[j])
            throw ValidationError("LinearProgram",
                                  "variable " + std::to_string(j) + " has lower > upper");
        if (is_binary[j] && (lower[j] < -1e-12 || upper[j] > 1.0 + 1e-12))
            throw ValidationError("LinearProgram",
                                  "binary variable " + std::to_string(j) + " has bounds outside [0,1]");
        if (!std::isfinite(cost[j]))
            throw ValidationError("LinearProgram",
                                  "variable " + std::to_string(j) + " has non-finite cost");
    }
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const Constraint& c = constraints[i];
        if (c.coeffs.size() != n)
            throw ValidationError("LinearProgram",
                                  "row " + std::to_string(i) + " length != variable count");
        if (!std::isfinite(c.rhs))
            throw ValidationError("LinearProgram", "row " + std::to_string(i) + " has non-finite rhs");
        for (double a : c.coeffs)
            if (!std::isfinite(a))
                throw ValidationError("LinearProgram",
                                      "row " + std::to_string(i) + " has non-finite coefficient");
    }
}

std::string LinearProgram::dump() const {
    std::ostringstream out;
    out << "min";
    bool first = true;
    for (std::size_t j = 0; j < num_vars(); ++j) {
        if (cost[j] == 0.0) continue;
        out << (first ? " " : " + ") << cost[j] << "*x" << j;
        first = false;
    }
    if (first) out << " 0";
    out << "\n";
    for (std::size_t i = 0; i < constraints.size(); ++i) {
        const Constraint& c = constraints[i];
        out << "r" << i << ":";
        bool any = false;
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            if (c.coeffs[j] == 0.0) continue;
            out << (any ? " + " : " ") << c.coeffs[j] << "*x" << j;
            any = true;
        }
        if (!any) out << " 0";
        out << " " << to_string(c.rel) << " " << c.rhs << "\n";
    }
    for (std::size_t j = 0; j < num_vars(); ++j) {
        out << "x" << j << " in [" << lower[j] << ", " << upper[j] << "]";
        if (is_binary[j]) out << " binary";
        out << "\n";
    }
    return out.str();
}

LinearProgram fix_binaries(const LinearProgram& lp, const std::vector<double>& assignment) {
    lp.validate();
    std::size_t n_bin = 0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (lp.is_binary[j]) ++n_bin;
    if (assignment.size() != n_bin)
        throw AssignmentMismatch("fix_binaries: expected " + std::to_string(n_bin) +
                                 " values, got " + std::to_string(assignment.size()));
    LinearProgram fixed = lp;
    std::size_t k = 0;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        if (!lp.is_binary[j]) continue;
        const double v = assignment[k++];
        if (std::fabs(v) > 1e-6 && std::fabs(v - 1.0) > 1e-6)
            throw AssignmentMismatch("fix_binaries: value for variable " + std::to_string(j) +
                                     " is not 0 or 1");
        const double rounded = v < 0.5 ? 0.0 : 1.0;
        fixed.lower[j] = rounded;
        fixed.upper[j] = rounded;
        fixed.is_binary[j] = 0;
    }
    return fixed;
}

} // namespace mgsim::milp
