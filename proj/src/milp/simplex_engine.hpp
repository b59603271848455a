#pragma once

// Internal solver engine shared by solve_lp and branch and bound. Not part of
// the public interface.

#include "mgsim/milp.hpp"

#include <cstddef>
#include <vector>

namespace mgsim::milp {

enum class VarState : unsigned char { AtLower, AtUpper, Basic };

// Dense-tableau simplex with bounded variables. solve() runs the two-phase
// primal method. Afterwards, branch and bound drives it incrementally:
// begin_frame / set_fixed / dual_resolve tighten binary bounds and re-solve
// warm; undo_frame restores the exact pre-frame state by reversing the
// frame's pivots and reinstating the saved basis metadata.
class SimplexEngine {
public:
    SimplexEngine(const LinearProgram& lp, const std::vector<double>& lower,
                  const std::vector<double>& upper, const SolverOptions& opts);

    SolveStatus solve();

    void begin_frame();
    void set_fixed(std::size_t var, double value);  // value in original space
    SolveStatus dual_resolve();
    void undo_frame();
    std::size_t frame_depth() const { return frames_.size(); }

    double objective() const;
    void structural_values(std::vector<double>& out) const;
    long pivots() const { return pivots_; }
    LpSolution extract() const;

private:
    struct BoundChange {
        std::size_t var;
        double old_lo, old_hi;
    };
    struct Frame {
        std::vector<BoundChange> bound_changes;
        std::vector<std::size_t> pivot_rows;
        std::vector<std::size_t> pivot_left;  // basic column replaced, per pivot
        std::vector<int> saved_basis;
        std::vector<VarState> saved_states;
        std::vector<double> saved_values;
    };

    const LinearProgram& lp_;
    const std::vector<double>& lb_;
    const std::vector<double>& ub_;
    const SolverOptions& opts_;

    std::size_t m_ = 0, n_struct_ = 0, n_total_ = 0;
    std::vector<double> tab_;
    std::vector<double> obj1_, obj2_;
    std::vector<double> basic_value_;
    std::vector<int> basis_;
    std::vector<VarState> state_;
    std::vector<double> slo_, shi_;  // current bounds in shifted space
    std::vector<double> row_mult_;
    std::vector<int> dual_col_;
    std::vector<double> dual_sign_;
    std::vector<unsigned char> is_art_;
    std::vector<Frame> frames_;
    long pivots_ = 0;
    bool exhausted_ = false;
    bool solved_ = false;

    double* row(std::size_t i) { return tab_.data() + i * n_total_; }
    const double* row(std::size_t i) const { return tab_.data() + i * n_total_; }

    void build();
    double phase1_value() const;
    void seal_artificials();
    double nonbasic_value(std::size_t j) const;
    void pivot_matrix(std::size_t prow, std::size_t pcol);
    std::size_t pick_entering(const std::vector<double>& obj, bool bland) const;
    bool primal_phase(bool phase1);
};

} // namespace mgsim::milp
