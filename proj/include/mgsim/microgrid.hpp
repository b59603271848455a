#pragma once

#include "mgsim/milp.hpp"

#include <string>
#include <vector>

namespace mgsim::microgrid {

struct DispatchableDer {
    std::string name;
    double p_min = 0.0, p_max = 0.0;  // MW
    double marginal_cost = 0.0;       // $/MWh
    double no_load_cost = 0.0;        // $/h
    double startup_cost = 0.0, shutdown_cost = 0.0;  // $
    double ramp_up = 0.0, ramp_down = 0.0;           // MW/h
    int min_up = 1, min_down = 1;                    // h
    bool initial_on = false;
    double initial_power = 0.0;
    int initial_up_time = 9999, initial_down_time = 9999;
};

struct StorageDer {
    std::string name;
    double charge_max = 0.0, discharge_max = 0.0;  // MW
    double energy_capacity = 0.0;                  // MWh
    double soc_min = 0.0, soc_max = 0.0;           // MWh
    double charge_efficiency = 1.0, discharge_efficiency = 1.0;  // (0,1]
    double soc_initial = 0.0;  // MWh
    bool require_terminal_soc = false;
    double terminal_soc = 0.0;
};

struct AdjustableLoad {
    std::string name;
    double p_min = 0.0, p_max = 0.0;  // MW while running
    double required_energy = 0.0;     // MWh over the window
    int window_start = 0, window_end = 0;  // inclusive hour range
    int min_operating_time = 1;            // h
    double pickup_rate = 0.0, drop_rate = 0.0;  // MW/h
};

struct MicrogridCase {
    std::string id;
    int attached_bus = 0;
    std::vector<DispatchableDer> dispatchables;
    std::vector<StorageDer> storages;
    std::vector<AdjustableLoad> adjustable_loads;
    std::vector<double> nondispatchable;        // MW per hour, negative = generation
    std::vector<std::vector<double>> fixed_load;  // [load][hour] MW
    double voll = 10000.0;             // $/MWh on curtailed fixed load
    double tie_limit = 0.0;            // MW on the grid exchange
    double violation_penalty = 1000.0; // $/MWh on award deviations
    int horizon = 24;

    double total_fixed_load(int hour) const;
    void validate() const;
};

struct MicrogridSchedule {
    std::vector<std::vector<double>> der_power;         // [dispatchable][hour] MW
    std::vector<std::vector<unsigned char>> der_on;     // [dispatchable][hour]
    std::vector<std::vector<double>> storage_power;     // [storage][hour], +discharge -charge
    std::vector<std::vector<double>> soc;               // [storage][hour] MWh
    std::vector<std::vector<double>> adjustable_power;  // [adjustable][hour] MW
    std::vector<double> exchange;                       // MW per hour, +import -export
    std::vector<double> curtailment;                    // MW per hour
    std::vector<double> deviation_up, deviation_down;   // fixed-exchange runs only
    double total_cost = 0.0;
};

struct BidStep {
    double price = 0.0;     // $/MWh threshold
    double quantity = 0.0;  // MW; negative steps are export offers
};

/// Stepwise demand curve per hour, steps sorted by strictly descending price.
struct BidCurve {
    std::vector<std::vector<BidStep>> hours;
    double clipped_mw = 0.0;  // magnitude removed from non-monotone samples

    void validate(double tie_limit) const;
};

/// Price-based optimal scheduling: minimizes DER operation cost plus
/// curtailment at the value of lost load plus the priced grid exchange,
/// subject to hourly balance, DER limits, energy coupling, and the tie-line
/// bound. Throws SolveFailed when even full curtailment cannot balance.
MicrogridSchedule schedule(const MicrogridCase& mg, const std::vector<double>& price,
                           const milp::SolverOptions& opts = {});

/// The microgrid as the grid sees it: the hourly exchange series.
std::vector<double> net_load(const MicrogridSchedule& s);

/// Award-following mode: exchange is pinned to the award up to deviation
/// variables priced at the violation penalty; no energy price term.
MicrogridSchedule schedule_with_fixed_exchange(const MicrogridCase& mg,
                                               const std::vector<double>& award,
                                               const milp::SolverOptions& opts = {});

/// Samples schedule() across a flat price grid and differences the hourly
/// demand into monotone bid steps; negative differences are clipped and the
/// clipped magnitude recorded.
BidCurve build_demand_bid(const MicrogridCase& mg, const std::vector<double>& price_grid,
                          const milp::SolverOptions& opts = {});

/// Re-evaluates the scheduling objective from a finished schedule (startup
/// and shutdown events recovered from the commitment transitions).
double evaluate_cost(const MicrogridCase& mg, const MicrogridSchedule& s,
                     const std::vector<double>& price);

} // namespace mgsim::microgrid
