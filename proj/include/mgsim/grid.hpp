#pragma once

#include "mgsim/milp.hpp"

#include <string>
#include <vector>

namespace mgsim::grid {

/// MW per unit of per-unit flow (system MVA base).
constexpr double kPowerBase = 100.0;

struct Bus {
    int id = 0;
    bool is_reference = false;
};

struct Branch {
    int from_bus = 0;
    int to_bus = 0;
    double reactance = 0.1;   // per unit
    double flow_limit = 0.0;  // MW
};

struct ThermalUnit {
    std::string name;
    int bus = 0;
    double p_min = 0.0, p_max = 0.0;  // MW
    double marginal_cost = 0.0;       // $/MWh
    double no_load_cost = 0.0;        // $/h
    double startup_cost = 0.0;        // $
    double shutdown_cost = 0.0;       // $
    double ramp_up = 0.0, ramp_down = 0.0;  // MW/h
    int min_up = 1, min_down = 1;     // h
    bool initial_on = false;
    double initial_power = 0.0;       // MW
    // Hours already spent in the initial state; large defaults mean no
    // carry-over coupling into the horizon.
    int initial_up_time = 9999, initial_down_time = 9999;  // h
};

struct NetworkCase {
    std::vector<Bus> buses;
    std::vector<Branch> branches;
    std::vector<ThermalUnit> units;
    int horizon = 24;
    std::vector<std::vector<double>> bus_load;  // [bus position][hour] MW

    int bus_index(int id) const;
    int reference_index() const;
    double total_load(int hour) const;
    void validate() const;
};

struct UcResult {
    std::vector<std::vector<unsigned char>> commitment;  // [unit][hour]
    std::vector<std::vector<double>> dispatch;           // [unit][hour] MW
    std::vector<std::vector<double>> angle;              // [bus][hour] rad
    std::vector<std::vector<double>> flow;               // [branch][hour] MW
    std::vector<std::vector<double>> lmp;                // [bus][hour] $/MWh
    double total_cost = 0.0;
};

/// UC MILP plus the index maps needed to read the solution back out and to
/// extend the model (the market clearing bolts bid blocks onto balance rows).
struct UcProblem {
    milp::LinearProgram lp;
    std::vector<std::vector<std::size_t>> p, on, su, sd;  // [unit][hour]
    std::vector<std::vector<std::size_t>> theta;          // [bus][hour]
    std::vector<std::vector<std::size_t>> flow;           // [branch][hour]
    std::vector<std::vector<std::size_t>> balance_row;    // [bus][hour]
    int horizon = 0;
};

/// Commitment, dispatch, angle, flow, and startup/shutdown variables with DC
/// flow and nodal balance per bus-hour; minimizes production plus commitment
/// costs. Throws ValidationError on dangling references.
UcProblem build_uc_problem(const NetworkCase& net);

/// Day-ahead UC via branch and bound, then a fixed-commitment re-solve for
/// prices. Throws SolveFailed when the MILP is infeasible or hits a limit.
UcResult solve_unit_commitment(const NetworkCase& net, const milp::SolverOptions& opts = {});

/// Economic dispatch under a fixed commitment; LMP per bus-hour is the dual
/// of that bus-hour's balance row (cost of one extra MW of load). Throws
/// RedispatchInfeasible when the fixed commitment cannot serve the load.
UcResult solve_dispatch_with_lmp(const NetworkCase& net,
                                 const std::vector<std::vector<unsigned char>>& commitment,
                                 const milp::SolverOptions& opts = {});

double average_lmp(const UcResult& result, int hour);

/// Reads primal values of a solved UC problem into a UcResult (no prices).
UcResult extract_uc_primal(const NetworkCase& net, const UcProblem& prob,
                           const std::vector<double>& primal);

} // namespace mgsim::grid
