#include "mgsim/errors.hpp"
#include "mgsim/milp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "simplex_engine.hpp"

namespace mgsim::milp {

namespace {

constexpr double kPivotTol = 1e-9;  // smallest pivot element accepted
constexpr double kCostTol = 1e-9;   // reduced-cost optimality threshold
constexpr long kDegenerateStreak = 60;
constexpr double kInf = std::numeric_limits<double>::infinity();

} // namespace

// Two-phase primal simplex on a dense tableau with bounded variables, plus a
// bounded-variable dual simplex used to re-solve after bound tightenings.
// Variables are shifted so the initial lower bound is 0; nonbasic variables
// sit at slo or shi (current bounds in shifted space, mutated by branch and
// bound). Entering variable by largest reduced cost; Bland's lowest-index
// rule takes over after a run of degenerate pivots and guarantees
// termination. Ratio-test ties always break toward the lowest variable index.

SimplexEngine::SimplexEngine(const LinearProgram& lp, const std::vector<double>& lower,
                             const std::vector<double>& upper, const SolverOptions& opts)
    : lp_(lp), lb_(lower), ub_(upper), opts_(opts) {}

void SimplexEngine::build() {
    m_ = lp_.num_constraints();
    n_struct_ = lp_.num_vars();

    std::vector<double> rhs(m_);
    std::vector<Relation> rel(m_);
    row_mult_.assign(m_, 1.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const Constraint& c = lp_.constraints[i];
        double b = c.rhs;
        double amax = 0.0;
        for (std::size_t j = 0; j < n_struct_; ++j) {
            b -= c.coeffs[j] * lb_[j];
            amax = std::max(amax, std::fabs(c.coeffs[j]));
        }
        double mult = amax > 0.0 ? 1.0 / amax : 1.0;
        if (b * mult < 0.0) mult = -mult;
        Relation r = c.rel;
        if (mult < 0.0) {
            if (c.rel == Relation::LessEqual) r = Relation::GreaterEqual;
            else if (c.rel == Relation::GreaterEqual) r = Relation::LessEqual;
        }
        double b_scaled = b * mult;
        if (b_scaled == 0.0) {
            b_scaled = 0.0;  // normalize -0
            // A >= row with zero rhs must not seed its surplus (basis columns
            // must be +1); flip it into <= form.
            if (r == Relation::GreaterEqual) {
                mult = -mult;
                r = Relation::LessEqual;
            }
        }
        row_mult_[i] = mult;
        rhs[i] = b_scaled;
        rel[i] = r;
    }

    std::vector<int> slack_col(m_, -1), art_col(m_, -1);
    std::size_t next = n_struct_;
    for (std::size_t i = 0; i < m_; ++i)
        if (rel[i] != Relation::Equal) slack_col[i] = static_cast<int>(next++);
    for (std::size_t i = 0; i < m_; ++i)
        if (rel[i] == Relation::Equal || (rel[i] == Relation::GreaterEqual && rhs[i] > 0.0))
            art_col[i] = static_cast<int>(next++);
    n_total_ = next;

    tab_.assign(m_ * n_total_, 0.0);
    slo_.assign(n_total_, 0.0);
    shi_.assign(n_total_, kInf);
    state_.assign(n_total_, VarState::AtLower);
    is_art_.assign(n_total_, 0);
    basis_.assign(m_, -1);
    basic_value_.assign(m_, 0.0);
    dual_col_.assign(m_, -1);
    dual_sign_.assign(m_, 1.0);

    for (std::size_t j = 0; j < n_struct_; ++j) shi_[j] = ub_[j] - lb_[j];

    for (std::size_t i = 0; i < m_; ++i) {
        double* r = row(i);
        const double mult = row_mult_[i];
        const std::vector<double>& coeffs = lp_.constraints[i].coeffs;
        for (std::size_t j = 0; j < n_struct_; ++j) r[j] = coeffs[j] * mult;
        if (slack_col[i] >= 0) {
            const double sign = rel[i] == Relation::LessEqual ? 1.0 : -1.0;
            r[slack_col[i]] = sign;
            dual_col_[i] = slack_col[i];
            dual_sign_[i] = sign;
        }
        if (art_col[i] >= 0) {
            r[art_col[i]] = 1.0;
            is_art_[art_col[i]] = 1;
            dual_col_[i] = art_col[i];
            dual_sign_[i] = 1.0;
        }
        basis_[i] = art_col[i] >= 0 ? art_col[i] : slack_col[i];
        basic_value_[i] = rhs[i];
        state_[basis_[i]] = VarState::Basic;
    }

    obj1_.assign(n_total_, 0.0);
    obj2_.assign(n_total_, 0.0);
    for (std::size_t j = 0; j < n_struct_; ++j) obj2_[j] = lp_.cost[j];
    for (std::size_t i = 0; i < m_; ++i) {
        if (art_col[i] < 0 || basis_[i] != art_col[i]) continue;
        const double* r = row(i);
        for (std::size_t j = 0; j < n_total_; ++j) obj1_[j] -= r[j];
    }
    for (std::size_t j = 0; j < n_total_; ++j)
        if (is_art_[j]) obj1_[j] += 1.0;
}

double SimplexEngine::phase1_value() const {
    double v = 0.0;
    for (std::size_t i = 0; i < m_; ++i)
        if (is_art_[basis_[i]]) v += basic_value_[i];
    return v;
}

void SimplexEngine::seal_artificials() {
    for (std::size_t j = 0; j < n_total_; ++j)
        if (is_art_[j]) shi_[j] = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (!is_art_[basis_[i]]) continue;
        basic_value_[i] = 0.0;
        const double* r = row(i);
        int enter = -1;
        for (std::size_t j = 0; j < n_total_; ++j) {
            if (is_art_[j] || state_[j] == VarState::Basic) continue;
            if (std::fabs(r[j]) > kPivotTol) { enter = static_cast<int>(j); break; }
        }
        if (enter >= 0) {
            // Degenerate exchange: the entering variable keeps its value.
            const std::size_t e = static_cast<std::size_t>(enter);
            const double v = nonbasic_value(e);
            state_[basis_[i]] = VarState::AtLower;
            pivot_matrix(i, e);
            basis_[i] = static_cast<int>(e);
            basic_value_[i] = v;
            state_[e] = VarState::Basic;
        }
        // else: the row is redundant; the artificial stays basic at zero.
    }
}

double SimplexEngine::nonbasic_value(std::size_t j) const {
    return state_[j] == VarState::AtUpper ? shi_[j] : slo_[j];
}

void SimplexEngine::pivot_matrix(std::size_t prow, std::size_t pcol) {
    double* pr = row(prow);
    const double pe = pr[pcol];
    for (std::size_t j = 0; j < n_total_; ++j) pr[j] /= pe;
    pr[pcol] = 1.0;
    for (std::size_t i = 0; i < m_; ++i) {
        if (i == prow) continue;
        double* r = row(i);
        const double d = r[pcol];
        if (d == 0.0) continue;
        for (std::size_t j = 0; j < n_total_; ++j) r[j] -= d * pr[j];
        r[pcol] = 0.0;
    }
    const double d1 = obj1_[pcol];
    if (d1 != 0.0) {
        for (std::size_t j = 0; j < n_total_; ++j) obj1_[j] -= d1 * pr[j];
        obj1_[pcol] = 0.0;
    }
    const double d2 = obj2_[pcol];
    if (d2 != 0.0) {
        for (std::size_t j = 0; j < n_total_; ++j) obj2_[j] -= d2 * pr[j];
        obj2_[pcol] = 0.0;
    }
}

std::size_t SimplexEngine::pick_entering(const std::vector<double>& obj, bool bland) const {
    std::size_t best = n_total_;
    double best_score = kCostTol;
    for (std::size_t j = 0; j < n_total_; ++j) {
        if (state_[j] == VarState::Basic || is_art_[j] || shi_[j] - slo_[j] <= 0.0) continue;
        const double rc = obj[j];
        const double score = state_[j] == VarState::AtLower ? -rc : rc;
        if (score <= kCostTol) continue;
        if (bland) return j;
        if (score > best_score) {
            best_score = score;
            best = j;
        }
    }
    return best;
}

bool SimplexEngine::primal_phase(bool phase1) {
    std::vector<double>& obj = phase1 ? obj1_ : obj2_;
    long streak = 0;
    while (true) {
        if (phase1 && phase1_value() <= 0.0) return true;
        const std::size_t enter = pick_entering(obj, streak >= kDegenerateStreak);
        if (enter == n_total_) return true;
        if (pivots_ >= opts_.pivot_limit) { exhausted_ = true; return false; }

        const double dir = state_[enter] == VarState::AtLower ? 1.0 : -1.0;
        double best_t = shi_[enter] - slo_[enter];
        std::size_t leave_row = m_;
        int leave_var = -1;
        bool leave_to_upper = false;
        for (std::size_t i = 0; i < m_; ++i) {
            const double d = row(i)[enter] * dir;
            const int bcol = basis_[i];
            double t;
            bool to_upper;
            if (d > kPivotTol) {
                t = std::max(0.0, basic_value_[i] - slo_[bcol]) / d;
                to_upper = false;
            } else if (d < -kPivotTol && shi_[bcol] < kInf) {
                t = std::max(0.0, shi_[bcol] - basic_value_[i]) / (-d);
                to_upper = true;
            } else {
                continue;
            }
            if (t < best_t - kPivotTol ||
                (t < best_t + kPivotTol && (leave_var < 0 || bcol < leave_var))) {
                best_t = std::min(t, best_t);
                leave_row = i;
                leave_var = bcol;
                leave_to_upper = to_upper;
            }
        }
        if (leave_row == m_ && !(shi_[enter] - slo_[enter] < kInf)) return false;  // unbounded

        ++pivots_;
        streak = best_t > 1e-12 ? 0 : streak + 1;

        if (leave_row == m_) {
            const double step = dir * (shi_[enter] - slo_[enter]);
            for (std::size_t i = 0; i < m_; ++i) {
                const double d = row(i)[enter];
                if (d != 0.0) basic_value_[i] -= step * d;
            }
            state_[enter] =
                state_[enter] == VarState::AtLower ? VarState::AtUpper : VarState::AtLower;
            continue;
        }

        const double enter_value =
            dir > 0.0 ? slo_[enter] + best_t : shi_[enter] - best_t;
        const double step = dir * best_t;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave_row) continue;
            const double d = row(i)[enter];
            if (d != 0.0) basic_value_[i] -= step * d;
        }
        state_[basis_[leave_row]] = leave_to_upper ? VarState::AtUpper : VarState::AtLower;
        pivot_matrix(leave_row, enter);
        basis_[leave_row] = static_cast<int>(enter);
        basic_value_[leave_row] = enter_value;
        state_[enter] = VarState::Basic;
    }
}

SolveStatus SimplexEngine::solve() {
    build();
    if (!primal_phase(true))
        return exhausted_ ? SolveStatus::PivotLimit : SolveStatus::Unbounded;
    if (phase1_value() > opts_.feas_tol) return SolveStatus::Infeasible;
    seal_artificials();
    if (!primal_phase(false))
        return exhausted_ ? SolveStatus::PivotLimit : SolveStatus::Unbounded;
    solved_ = true;
    return SolveStatus::Optimal;
}

void SimplexEngine::begin_frame() {
    Frame f;
    f.saved_basis = basis_;
    f.saved_states = state_;
    f.saved_values = basic_value_;
    frames_.push_back(std::move(f));
}

void SimplexEngine::set_fixed(std::size_t var, double value) {
    Frame& f = frames_.back();
    f.bound_changes.push_back({var, slo_[var], shi_[var]});
    const double v = value - lb_[var];  // shifted space
    if (state_[var] != VarState::Basic) {
        const double old = nonbasic_value(var);
        if (old != v) {
            const double step = v - old;
            for (std::size_t i = 0; i < m_; ++i) {
                const double d = row(i)[var];
                if (d != 0.0) basic_value_[i] -= step * d;
            }
        }
        state_[var] = VarState::AtLower;
    }
    slo_[var] = v;
    shi_[var] = v;
}

void SimplexEngine::undo_frame() {
    Frame& f = frames_.back();
    for (std::size_t k = f.pivot_rows.size(); k-- > 0;)
        pivot_matrix(f.pivot_rows[k], f.pivot_left[k]);
    for (std::size_t k = f.bound_changes.size(); k-- > 0;) {
        const BoundChange& bc = f.bound_changes[k];
        slo_[bc.var] = bc.old_lo;
        shi_[bc.var] = bc.old_hi;
    }
    basis_ = f.saved_basis;
    state_ = f.saved_states;
    basic_value_ = f.saved_values;
    frames_.pop_back();
}

// Bounded-variable dual simplex: the basis is dual feasible (reduced costs
// consistent with the nonbasic states) and some basic values violate their
// bounds after a tightening. Returns Optimal, Infeasible (a row proves the
// tightened problem empty), or PivotLimit.
SolveStatus SimplexEngine::dual_resolve() {
    long streak = 0;
    while (true) {
        if (pivots_ >= opts_.pivot_limit) { exhausted_ = true; return SolveStatus::PivotLimit; }

        // Leaving row: largest bound violation, or the lowest-index violated
        // basic variable once degenerate pivots stall (Bland-style escape).
        const bool bland = streak >= kDegenerateStreak;
        std::size_t leave_row = m_;
        double worst = opts_.feas_tol * 0.5;
        double target = 0.0;
        double direction = 0.0;
        int lowest_var = -1;
        for (std::size_t i = 0; i < m_; ++i) {
            const int b = basis_[i];
            const double below = slo_[b] - basic_value_[i];
            const double above = basic_value_[i] - shi_[b];
            const double viol = std::max(below, above);
            if (viol <= opts_.feas_tol * 0.5) continue;
            const bool take = bland ? (lowest_var < 0 || b < lowest_var) : viol > worst;
            if (take) {
                worst = viol;
                lowest_var = b;
                leave_row = i;
                direction = below >= above ? 1.0 : -1.0;
                target = below >= above ? slo_[b] : shi_[b];
            }
        }
        if (leave_row == m_) return SolveStatus::Optimal;

        const double* r = row(leave_row);
        std::size_t enter = n_total_;
        double best_ratio = kInf;
        for (std::size_t j = 0; j < n_total_; ++j) {
            if (state_[j] == VarState::Basic || is_art_[j] || shi_[j] - slo_[j] <= 0.0) continue;
            const double alpha = r[j];
            if (std::fabs(alpha) <= kPivotTol) continue;
            const double dj = state_[j] == VarState::AtLower ? 1.0 : -1.0;
            // Moving j in its feasible direction must push the leaving basic
            // toward its violated bound.
            if (direction * alpha * dj >= 0.0) continue;
            const double ratio = std::max(0.0, dj * obj2_[j]) / std::fabs(alpha);
            if (ratio < best_ratio - kPivotTol ||
                (ratio < best_ratio + kPivotTol && (enter == n_total_ || j < enter))) {
                best_ratio = std::min(ratio, best_ratio);
                enter = j;
            }
        }
        if (enter == n_total_) return SolveStatus::Infeasible;

        ++pivots_;
        const double alpha = r[enter];
        const double delta = (basic_value_[leave_row] - target) / alpha;
        streak = std::fabs(delta) > 1e-12 ? 0 : streak + 1;
        const double enter_value = nonbasic_value(enter) + delta;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == leave_row) continue;
            const double d = row(i)[enter];
            if (d != 0.0) basic_value_[i] -= delta * d;
        }
        state_[basis_[leave_row]] =
            direction > 0.0 ? VarState::AtLower : VarState::AtUpper;
        if (!frames_.empty()) {
            frames_.back().pivot_rows.push_back(leave_row);
            frames_.back().pivot_left.push_back(static_cast<std::size_t>(basis_[leave_row]));
        }
        pivot_matrix(leave_row, enter);
        basis_[leave_row] = static_cast<int>(enter);
        basic_value_[leave_row] = enter_value;
        state_[enter] = VarState::Basic;
    }
}

void SimplexEngine::structural_values(std::vector<double>& out) const {
    out.assign(n_struct_, 0.0);
    std::vector<double> shifted(n_total_, 0.0);
    for (std::size_t j = 0; j < n_total_; ++j)
        if (state_[j] != VarState::Basic) shifted[j] = nonbasic_value(j);
    for (std::size_t i = 0; i < m_; ++i) shifted[basis_[i]] = basic_value_[i];
    for (std::size_t j = 0; j < n_struct_; ++j) out[j] = shifted[j] + lb_[j];
}

double SimplexEngine::objective() const {
    std::vector<double> x;
    structural_values(x);
    double obj = 0.0;
    for (std::size_t j = 0; j < n_struct_; ++j) obj += lp_.cost[j] * x[j];
    return obj;
}

LpSolution SimplexEngine::extract() const {
    LpSolution sol;
    sol.status = SolveStatus::Optimal;
    sol.pivot_count = pivots_;
    structural_values(sol.primal);
    double obj = 0.0;
    for (std::size_t j = 0; j < n_struct_; ++j) obj += lp_.cost[j] * sol.primal[j];
    sol.objective = obj;

    sol.duals.assign(m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
        const double rc = obj2_[dual_col_[i]];
        sol.duals[i] = -rc * dual_sign_[i] * row_mult_[i];
    }

    double worst = 0.0;
    for (std::size_t i = 0; i < m_; ++i) {
        const Constraint& c = lp_.constraints[i];
        double lhs = 0.0;
        for (std::size_t j = 0; j < n_struct_; ++j) lhs += c.coeffs[j] * sol.primal[j];
        const double resid = (lhs - c.rhs) * row_mult_[i];
        double viol = 0.0;
        switch (c.rel) {
            case Relation::LessEqual: viol = row_mult_[i] > 0 ? resid : -resid; break;
            case Relation::GreaterEqual: viol = row_mult_[i] > 0 ? -resid : resid; break;
            case Relation::Equal: viol = std::fabs(resid); break;
        }
        worst = std::max(worst, viol);
    }
    sol.max_violation = worst;
    return sol;
}

LpSolution solve_lp_with_bounds(const LinearProgram& lp, const std::vector<double>& lower,
                                const std::vector<double>& upper, const SolverOptions& opts) {
    opts.validate();
    lp.validate();
    if (lower.size() != lp.num_vars() || upper.size() != lp.num_vars())
        throw ValidationError("solve_lp", "bound override length mismatch");
    SimplexEngine engine(lp, lower, upper, opts);
    const SolveStatus status = engine.solve();
    if (status != SolveStatus::Optimal) {
        LpSolution sol;
        sol.status = status;
        sol.pivot_count = engine.pivots();
        return sol;
    }
    return engine.extract();
}

LpSolution solve_lp(const LinearProgram& lp, const SolverOptions& opts) {
    return solve_lp_with_bounds(lp, lp.lower, lp.upper, opts);
}

} // namespace mgsim::milp
