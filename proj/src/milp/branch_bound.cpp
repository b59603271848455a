#include "mgsim/errors.hpp"
#include "mgsim/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "simplex_engine.hpp"

namespace mgsim::milp {

namespace {

constexpr double kPruneGap = 1e-7;  // absolute incumbent gap used for pruning
constexpr double kInf = std::numeric_limits<double>::infinity();

// Subtrees are pruned once they cannot improve the incumbent by more than
// the relative duality tolerance; the returned objective therefore matches
// the exact optimum within dual_tol * (1 + |objective|).
double prune_margin(double incumbent, double dual_tol) {
    return std::max(kPruneGap, dual_tol * (1.0 + std::fabs(incumbent)));
}

// Most fractional binary: value closest to one half, lowest index on ties.
std::size_t pick_branch_var(const LinearProgram& lp, const std::vector<double>& primal,
                            double int_tol) {
    std::size_t best = lp.num_vars();
    double best_frac = int_tol;
    for (std::size_t j = 0; j < lp.num_vars(); ++j) {
        if (!lp.is_binary[j]) continue;
        const double frac = std::min(primal[j], 1.0 - primal[j]);
        if (frac > best_frac) {
            best_frac = frac;
            best = j;
        }
    }
    return best;
}

double primal_row_violation(const LinearProgram& lp, const std::vector<double>& x) {
    double worst = 0.0;
    for (const Constraint& c : lp.constraints) {
        double lhs = 0.0, amax = 0.0;
        for (std::size_t j = 0; j < c.coeffs.size(); ++j) {
            lhs += c.coeffs[j] * x[j];
            amax = std::max(amax, std::fabs(c.coeffs[j]));
        }
        const double scale = amax > 0.0 ? amax : 1.0;
        double v = 0.0;
        if (c.rel == Relation::LessEqual) v = (lhs - c.rhs) / scale;
        else if (c.rel == Relation::GreaterEqual) v = (c.rhs - lhs) / scale;
        else v = std::fabs(lhs - c.rhs) / scale;
        worst = std::max(worst, v);
    }
    return worst;
}

// Depth-first search over an incrementally re-solved engine. Each descent
// fixes one binary inside a frame and repairs optimality with the dual
// simplex; backtracking reverses the frame, restoring the parent state.
class WarmSearch {
public:
    WarmSearch(const LinearProgram& lp, const SolverOptions& opts)
        : lp_(lp), opts_(opts), engine_(lp, lp.lower, lp.upper, opts) {}

    MilpSolution run() {
        MilpSolution out;
        const SolveStatus root = engine_.solve();
        node_count_ = 1;
        if (root != SolveStatus::Optimal) {
            out.status = root;
            out.node_count = node_count_;
            return out;
        }

        engine_.structural_values(scratch_);
        if (pick_branch_var(lp_, scratch_, opts_.int_tol) == lp_.num_vars()) {
            accept_incumbent(engine_.objective());
        } else {
            root_heuristic();
            dive(engine_.objective());
        }

        out.node_count = node_count_;
        if (failed_status_ != SolveStatus::Optimal) {
            out.status = failed_status_;
            return out;
        }
        if (node_limit_hit_) {
            out.status = SolveStatus::NodeLimit;
            if (have_incumbent_) {
                out.primal = incumbent_;
                out.objective = incumbent_obj_;
                out.incumbent_bound_gap = incumbent_obj_ - open_bound_;
            } else {
                out.incumbent_bound_gap = kInf;
            }
            return out;
        }
        if (!have_incumbent_) {
            out.status = SolveStatus::Infeasible;
            return out;
        }
        out.status = SolveStatus::Optimal;
        out.primal = incumbent_;
        out.objective = incumbent_obj_;
        out.incumbent_bound_gap = 0.0;
        return out;
    }

private:
    const LinearProgram& lp_;
    const SolverOptions& opts_;
    SimplexEngine engine_;
    std::vector<double> scratch_;
    std::vector<double> incumbent_;
    double incumbent_obj_ = kInf;
    bool have_incumbent_ = false;
    long node_count_ = 0;
    bool node_limit_hit_ = false;
    double open_bound_ = kInf;
    SolveStatus failed_status_ = SolveStatus::Optimal;

    void accept_incumbent(double objective) {
        engine_.structural_values(scratch_);
        for (std::size_t j = 0; j < lp_.num_vars(); ++j)
            if (lp_.is_binary[j]) scratch_[j] = scratch_[j] < 0.5 ? 0.0 : 1.0;
        if (!have_incumbent_ || objective < incumbent_obj_) {
            have_incumbent_ = true;
            incumbent_obj_ = objective;
            incumbent_ = scratch_;
        }
    }

    // Fixing every fractional binary at its nearest integer often yields a
    // feasible incumbent that lets pure commitment dives prune at once.
    void root_heuristic() {
        engine_.structural_values(scratch_);
        std::vector<std::pair<std::size_t, double>> fixes;
        for (std::size_t j = 0; j < lp_.num_vars(); ++j) {
            if (!lp_.is_binary[j] || lp_.lower[j] >= lp_.upper[j]) continue;
            fixes.emplace_back(j, scratch_[j] < 0.5 ? 0.0 : 1.0);
        }
        if (fixes.empty()) return;
        engine_.begin_frame();
        for (const auto& [j, v] : fixes) engine_.set_fixed(j, v);
        const SolveStatus st = engine_.dual_resolve();
        ++node_count_;
        if (st == SolveStatus::Optimal) accept_incumbent(engine_.objective());
        else if (st == SolveStatus::PivotLimit) failed_status_ = st;
        engine_.undo_frame();
    }

    void dive(double node_obj) {
        if (failed_status_ != SolveStatus::Optimal) return;
        if (have_incumbent_ && node_obj >= incumbent_obj_ - prune_margin(incumbent_obj_, opts_.dual_tol)) return;

        engine_.structural_values(scratch_);
        const std::size_t branch_var = pick_branch_var(lp_, scratch_, opts_.int_tol);
        if (branch_var == lp_.num_vars()) {
            accept_incumbent(node_obj);
            return;
        }
        const double near = scratch_[branch_var] < 0.5 ? 0.0 : 1.0;

        for (const double value : {near, 1.0 - near}) {
            if (failed_status_ != SolveStatus::Optimal) return;
            if (node_limit_hit_ || node_count_ >= opts_.node_limit) {
                node_limit_hit_ = true;
                open_bound_ = std::min(open_bound_, node_obj);
                return;
            }
            if (have_incumbent_ && node_obj >= incumbent_obj_ - prune_margin(incumbent_obj_, opts_.dual_tol)) return;

            engine_.begin_frame();
            engine_.set_fixed(branch_var, value);
            const SolveStatus st = engine_.dual_resolve();
            ++node_count_;
            if (st == SolveStatus::Optimal) dive(engine_.objective());
            else if (st == SolveStatus::PivotLimit) failed_status_ = st;
            engine_.undo_frame();
        }
    }
};

// Reference search: every node re-solved from scratch. Used as the fallback
// when the incremental path cannot certify its answer.
MilpSolution solve_milp_scratch(const LinearProgram& lp, const SolverOptions& opts) {
    struct Node {
        std::vector<std::pair<std::size_t, double>> fixes;
        double parent_bound;
    };
    MilpSolution out;
    std::vector<double> lower = lp.lower;
    std::vector<double> upper = lp.upper;

    bool have_incumbent = false;
    double incumbent_obj = kInf;
    std::vector<double> incumbent;
    double open_bound_min = kInf;
    bool node_limit_hit = false;

    std::vector<Node> stack;
    stack.push_back(Node{{}, -kInf});

    auto apply_fixes = [&](const Node& node) {
        std::copy(lp.lower.begin(), lp.lower.end(), lower.begin());
        std::copy(lp.upper.begin(), lp.upper.end(), upper.begin());
        for (const auto& [var, val] : node.fixes) {
            lower[var] = val;
            upper[var] = val;
        }
    };

    while (!stack.empty()) {
        if (out.node_count >= opts.node_limit) {
            node_limit_hit = true;
            for (const Node& n : stack) open_bound_min = std::min(open_bound_min, n.parent_bound);
            break;
        }
        Node node = std::move(stack.back());
        stack.pop_back();
        if (have_incumbent && node.parent_bound >= incumbent_obj - prune_margin(incumbent_obj, opts.dual_tol)) continue;

        apply_fixes(node);
        LpSolution rel = solve_lp_with_bounds(lp, lower, upper, opts);
        ++out.node_count;
        if (rel.status == SolveStatus::PivotLimit || rel.status == SolveStatus::Unbounded) {
            out.status = rel.status;
            return out;
        }
        if (rel.status == SolveStatus::Infeasible) continue;
        if (have_incumbent && rel.objective >= incumbent_obj - prune_margin(incumbent_obj, opts.dual_tol)) continue;

        const std::size_t branch_var = pick_branch_var(lp, rel.primal, opts.int_tol);
        if (branch_var == lp.num_vars()) {
            for (std::size_t j = 0; j < lp.num_vars(); ++j)
                if (lp.is_binary[j]) rel.primal[j] = rel.primal[j] < 0.5 ? 0.0 : 1.0;
            if (!have_incumbent || rel.objective < incumbent_obj) {
                have_incumbent = true;
                incumbent_obj = rel.objective;
                incumbent = rel.primal;
            }
            continue;
        }

        const double near = rel.primal[branch_var] < 0.5 ? 0.0 : 1.0;
        Node far{node.fixes, rel.objective};
        far.fixes.emplace_back(branch_var, 1.0 - near);
        Node nearest{std::move(node.fixes), rel.objective};
        nearest.fixes.emplace_back(branch_var, near);
        stack.push_back(std::move(far));
        stack.push_back(std::move(nearest));
    }

    if (node_limit_hit) {
        out.status = SolveStatus::NodeLimit;
        if (have_incumbent) {
            out.primal = incumbent;
            out.objective = incumbent_obj;
            out.incumbent_bound_gap = incumbent_obj - open_bound_min;
        } else {
            out.incumbent_bound_gap = kInf;
        }
        return out;
    }
    if (!have_incumbent) {
        out.status = SolveStatus::Infeasible;
        return out;
    }
    out.status = SolveStatus::Optimal;
    out.primal = incumbent;
    out.objective = incumbent_obj;
    out.incumbent_bound_gap = 0.0;
    return out;
}

} // namespace

MilpSolution solve_milp(const LinearProgram& lp, const SolverOptions& opts) {
    opts.validate();
    lp.validate();

    WarmSearch search(lp, opts);
    MilpSolution sol = search.run();

    // The incremental path reuses one tableau across thousands of pivots;
    // certify its answer against the original rows and fall back to the
    // from-scratch search if the certificate fails.
    if (sol.status == SolveStatus::Optimal &&
        primal_row_violation(lp, sol.primal) > 10.0 * opts.feas_tol)
        return solve_milp_scratch(lp, opts);
    return sol;
}

} // namespace mgsim::milp
