#pragma once

#include "mgsim/grid.hpp"
#include "mgsim/microgrid.hpp"

#include <map>
#include <string>
#include <vector>

namespace mgsim::paradigms {

enum class Paradigm { Baseline, Redispatch, Iterative, Dmo };

std::string to_string(Paradigm p);
Paradigm paradigm_from_string(const std::string& name);

struct Scenario {
    grid::NetworkCase network;
    // Microgrid templates sized for full penetration of their bus; paradigm
    // runs scale power, energy, and fixed dollar costs by the penetration
    // fraction and set the fixed load to f times the bus forecast.
    std::vector<microgrid::MicrogridCase> microgrids;
    std::vector<double> penetration_override;  // per microgrid, <0 = use global
    double penetration = 0.5;
    Paradigm paradigm = Paradigm::Baseline;
    int max_iter = 50;
    double load_tol = 1e-3;            // MW, fixed-point and cycle matching
    std::vector<double> price_grid;    // bid samples; empty = automatic

    void validate() const;
    double effective_penetration(std::size_t mg_index) const;
};

/// Microgrid template scaled to penetration f of the bus forecast.
microgrid::MicrogridCase scale_microgrid(const microgrid::MicrogridCase& tpl, double f,
                                         const std::vector<double>& bus_forecast);

enum class Termination { FixedPoint, CycleDetected, MaxIterations };

std::string to_string(Termination t);

struct IterationEntry {
    std::vector<std::vector<double>> bus_load;  // [bus][hour] input load
    std::vector<std::vector<double>> lmp;       // [bus][hour]
    std::vector<double> avg_lmp;                // [hour]
    std::vector<double> microgrid_cost;         // per microgrid
    double total_cost = 0.0;
};

struct IterationTrace {
    std::vector<IterationEntry> iterations;
    Termination termination = Termination::MaxIterations;
    int cycle_period = 0;
};

struct MicrogridOutcome {
    std::string id;
    int bus = 0;
    double penetration = 0.0;
    microgrid::MicrogridSchedule sched;
    std::vector<double> award;  // market paradigm only
};

struct ParadigmReport {
    Paradigm paradigm = Paradigm::Baseline;
    std::vector<std::vector<double>> forecast_load;  // [bus][hour]
    std::vector<std::vector<double>> actual_load;    // [bus][hour]
    grid::UcResult base_uc;
    std::vector<MicrogridOutcome> microgrids;

    double max_abs_delta_mw = 0.0;
    double sum_abs_delta_mwh = 0.0;
    std::vector<double> hourly_delta_mw;  // aggregate signed delta per hour

    // Redispatch paradigm
    bool redispatch_attempted = false;
    bool redispatch_feasible = false;
    grid::UcResult redispatch;
    std::vector<std::vector<double>> dispatch_delta;  // [unit][hour]
    double max_redispatch_residual_mw = 0.0;

    // Iterative paradigm
    IterationTrace trace;

    // Market paradigm
    std::vector<std::vector<double>> award_mw;  // [bus][hour]
    double welfare = 0.0;
    double clearing_generation_cost = 0.0;
    double total_deviation_mwh = 0.0;
    double baseline_sum_abs_delta_mwh = 0.0;  // same scenario run price-based

    void compute_mismatch();
};

struct MarketResult {
    std::vector<std::vector<double>> award;  // [bus][hour]
    double welfare = 0.0;
    double generation_cost = 0.0;
    grid::UcResult uc;
};

ParadigmReport run_baseline(const Scenario& scn, const milp::SolverOptions& opts = {});
ParadigmReport run_redispatch(const Scenario& scn, const milp::SolverOptions& opts = {});
ParadigmReport run_iterative(const Scenario& scn, const milp::SolverOptions& opts = {});
ParadigmReport run_dmo(const Scenario& scn, const milp::SolverOptions& opts = {});
ParadigmReport run(const Scenario& scn, const milp::SolverOptions& opts = {});

/// Multiset merge of bid steps, descending price; equal thresholds coalesce.
microgrid::BidCurve aggregate_bids(const std::vector<microgrid::BidCurve>& curves);

/// Welfare-maximizing clearing: the UC model plus one elastic block per bid
/// step (objective credit = threshold * accepted quantity). Loads in
/// `rigid_net` stay rigid.
MarketResult clear_market(const grid::NetworkCase& rigid_net,
                          const std::map<int, microgrid::BidCurve>& bids_per_bus,
                          const milp::SolverOptions& opts = {});

/// Splits one bus-hour award over the microgrid bids in descending threshold
/// order; ties share pro-rata with largest-remainder rounding on a 1e-9 MW
/// grid, and the sum of the parts reproduces the award exactly.
std::vector<double> disaggregate_award(const std::vector<microgrid::BidCurve>& curves, int hour,
                                       double bus_award);

/// Default bid price grid: 20 samples spanning half the cheapest DER marginal
/// cost to twice the dearest marginal cost in the system.
std::vector<double> default_price_grid(const Scenario& scn);

} // namespace mgsim::paradigms
