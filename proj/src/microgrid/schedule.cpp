#include "mgsim/errors.hpp"
#include "mgsim/microgrid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mgsim::microgrid {

double MicrogridCase::total_fixed_load(int hour) const {
    double sum = 0.0;
    for (const auto& d : fixed_load) sum += d[hour];
    return sum;
}

void MicrogridCase::validate() const {
    if (horizon <= 0) throw ValidationError("MicrogridCase " + id, "horizon must be positive");
    if (tie_limit < 0.0) throw ValidationError("MicrogridCase " + id, "negative tie limit");
    if (violation_penalty < 0.0)
        throw ValidationError("MicrogridCase " + id, "negative violation penalty");
    for (const DispatchableDer& der : dispatchables) {
        if (!(0.0 <= der.p_min && der.p_min <= der.p_max))
            throw ValidationError("DispatchableDer " + der.name, "requires 0 <= p_min <= p_max");
        if (der.marginal_cost < 0 || der.no_load_cost < 0 || der.startup_cost < 0 ||
            der.shutdown_cost < 0)
            throw ValidationError("DispatchableDer " + der.name, "negative cost");
        if (der.min_up < 1 || der.min_down < 1)
            throw ValidationError("DispatchableDer " + der.name, "min_up/min_down must be >= 1");
        if (!(voll > der.marginal_cost))
            throw ValidationError("MicrogridCase " + id,
                                  "voll must exceed every DER marginal cost");
    }
    for (const StorageDer& s : storages) {
        if (s.charge_max < 0 || s.discharge_max < 0)
            throw ValidationError("StorageDer " + s.name, "negative power limit");
        if (!(s.soc_min <= s.soc_initial && s.soc_initial <= s.soc_max &&
              s.soc_max <= s.energy_capacity))
            throw ValidationError("StorageDer " + s.name,
                                  "requires soc_min <= soc_initial <= soc_max <= capacity");
        if (!(s.charge_efficiency > 0.0 && s.charge_efficiency <= 1.0) ||
            !(s.discharge_efficiency > 0.0 && s.discharge_efficiency <= 1.0))
            throw ValidationError("StorageDer " + s.name, "efficiencies must lie in (0,1]");
        if (s.require_terminal_soc && (s.terminal_soc < s.soc_min || s.terminal_soc > s.soc_max))
            throw ValidationError("StorageDer " + s.name, "terminal soc outside soc range");
    }
    for (const AdjustableLoad& a : adjustable_loads) {
        if (!(0.0 <= a.p_min && a.p_min <= a.p_max))
            throw ValidationError("AdjustableLoad " + a.name, "requires 0 <= p_min <= p_max");
        if (a.window_start < 0 || a.window_end >= horizon || a.window_start > a.window_end)
            throw ValidationError("AdjustableLoad " + a.name, "window outside horizon");
        const int width = a.window_end - a.window_start + 1;
        if (a.required_energy < a.p_min * a.min_operating_time - 1e-9 ||
            a.required_energy > a.p_max * width + 1e-9)
            throw ValidationError("AdjustableLoad " + a.name,
                                  "required energy unreachable within the window");
        if (a.min_operating_time < 1)
            throw ValidationError("AdjustableLoad " + a.name, "min_operating_time must be >= 1");
    }
    if (static_cast<int>(nondispatchable.size()) != horizon && !nondispatchable.empty())
        throw ValidationError("MicrogridCase " + id, "nondispatchable length != horizon");
    for (const auto& d : fixed_load) {
        if (static_cast<int>(d.size()) != horizon)
            throw ValidationError("MicrogridCase " + id, "fixed load length != horizon");
        for (double v : d)
            if (v < 0.0) throw ValidationError("MicrogridCase " + id, "negative fixed load");
    }
}

namespace {

using milp::Constraint;
using milp::LinearProgram;
using milp::Relation;

struct MgProblem {
    LinearProgram lp;
    std::vector<std::vector<std::size_t>> p, on, su, sd;        // dispatchables
    std::vector<std::vector<std::size_t>> charge, discharge, mode, soc;  // storages
    std::vector<std::vector<std::size_t>> adj_p, adj_on, adj_su, adj_sd;
    std::vector<std::size_t> exchange, shed;
    std::vector<std::size_t> dev_up, dev_down;  // fixed-exchange mode only
};

// Shared MILP builder. In priced mode the exchange carries the hourly price;
// in award mode the exchange is tied to the award through deviation variables
// priced at the violation penalty.
MgProblem build_problem(const MicrogridCase& mg, const std::vector<double>& price,
                        const std::vector<double>* award) {
    mg.validate();
    const int T = mg.horizon;
    MgProblem prob;
    LinearProgram& lp = prob.lp;

    const std::size_t nd = mg.dispatchables.size();
    const std::size_t ns = mg.storages.size();
    const std::size_t na = mg.adjustable_loads.size();
    prob.p.assign(nd, std::vector<std::size_t>(T));
    prob.on.assign(nd, std::vector<std::size_t>(T));
    prob.su.assign(nd, std::vector<std::size_t>(T));
    prob.sd.assign(nd, std::vector<std::size_t>(T));
    prob.charge.assign(ns, std::vector<std::size_t>(T));
    prob.discharge.assign(ns, std::vector<std::size_t>(T));
    prob.mode.assign(ns, std::vector<std::size_t>(T));
    prob.soc.assign(ns, std::vector<std::size_t>(T));
    prob.adj_p.assign(na, std::vector<std::size_t>(T));
    prob.adj_on.assign(na, std::vector<std::size_t>(T));
    prob.adj_su.assign(na, std::vector<std::size_t>(T));
    prob.adj_sd.assign(na, std::vector<std::size_t>(T));
    prob.exchange.resize(T);
    prob.shed.resize(T);

    for (std::size_t i = 0; i < nd; ++i) {
        const DispatchableDer& der = mg.dispatchables[i];
        int force_on_until = 0, force_off_until = 0;
        if (der.initial_on && der.initial_up_time < der.min_up)
            force_on_until = der.min_up - der.initial_up_time;
        if (!der.initial_on && der.initial_down_time < der.min_down)
            force_off_until = der.min_down - der.initial_down_time;
        for (int t = 0; t < T; ++t) {
            prob.p[i][t] = lp.add_variable(0.0, der.p_max, der.marginal_cost);
            double lo = 0.0, hi = 1.0;
            if (t < force_on_until) lo = 1.0;
            if (t < force_off_until) hi = 0.0;
            prob.on[i][t] = lp.add_variable(lo, hi, der.no_load_cost, true);
            prob.su[i][t] = lp.add_variable(0.0, 1.0, der.startup_cost);
            prob.sd[i][t] = lp.add_variable(0.0, 1.0, der.shutdown_cost);
        }
    }
    for (std::size_t s = 0; s < ns; ++s) {
        const StorageDer& st = mg.storages[s];
        for (int t = 0; t < T; ++t) {
            prob.charge[s][t] = lp.add_variable(0.0, st.charge_max, 0.0);
            prob.discharge[s][t] = lp.add_variable(0.0, st.discharge_max, 0.0);
            prob.mode[s][t] = lp.add_variable(0.0, 1.0, 0.0, true);
            double lo = st.soc_min, hi = st.soc_max;
            if (st.require_terminal_soc && t == T - 1) lo = hi = st.terminal_soc;
            prob.soc[s][t] = lp.add_variable(lo, hi, 0.0);
        }
    }
    for (std::size_t a = 0; a < na; ++a) {
        const AdjustableLoad& al = mg.adjustable_loads[a];
        for (int t = 0; t < T; ++t) {
            const bool in_window = t >= al.window_start && t <= al.window_end;
            prob.adj_p[a][t] = lp.add_variable(0.0, in_window ? al.p_max : 0.0, 0.0);
            prob.adj_on[a][t] = lp.add_variable(0.0, in_window ? 1.0 : 0.0, 0.0, true);
            prob.adj_su[a][t] = lp.add_variable(0.0, in_window ? 1.0 : 0.0, 0.0);
            prob.adj_sd[a][t] = lp.add_variable(0.0, 1.0, 0.0);
        }
    }
    for (int t = 0; t < T; ++t) {
        const double rho = award ? 0.0 : price[t];
        prob.exchange[t] = lp.add_variable(-mg.tie_limit, mg.tie_limit, rho);
        prob.shed[t] = lp.add_variable(0.0, mg.total_fixed_load(t), mg.voll);
    }
    if (award) {
        prob.dev_up.resize(T);
        prob.dev_down.resize(T);
        const double cap = 2.0 * mg.tie_limit + 1.0;  // deviations live inside the tie range
        for (int t = 0; t < T; ++t) {
            prob.dev_up[t] = lp.add_variable(0.0, cap, mg.violation_penalty);
            prob.dev_down[t] = lp.add_variable(0.0, cap, mg.violation_penalty);
        }
    }

    const std::size_t n = lp.num_vars();
    auto fresh = [n](Relation rel, double rhs) {
        Constraint c;
        c.coeffs.assign(n, 0.0);
        c.rel = rel;
        c.rhs = rhs;
        return c;
    };

    // Dispatchable units: capacity, indicator logic, ramps, min-up/min-down.
    for (std::size_t i = 0; i < nd; ++i) {
        const DispatchableDer& der = mg.dispatchables[i];
        const double ru = der.ramp_up > 0.0 ? der.ramp_up : der.p_max;
        const double rd = der.ramp_down > 0.0 ? der.ramp_down : der.p_max;
        const double su_ramp = std::max(der.p_min, ru);
        const double sd_ramp = std::max(der.p_min, rd);
        for (int t = 0; t < T; ++t) {
            Constraint hi = fresh(Relation::LessEqual, 0.0);
            hi.coeffs[prob.p[i][t]] = 1.0;
            hi.coeffs[prob.on[i][t]] = -der.p_max;
            lp.add_constraint(std::move(hi));
            if (der.p_min > 0.0) {
                Constraint lo = fresh(Relation::GreaterEqual, 0.0);
                lo.coeffs[prob.p[i][t]] = 1.0;
                lo.coeffs[prob.on[i][t]] = -der.p_min;
                lp.add_constraint(std::move(lo));
            }
            Constraint logic = fresh(Relation::Equal, 0.0);
            logic.coeffs[prob.su[i][t]] = 1.0;
            logic.coeffs[prob.sd[i][t]] = -1.0;
            logic.coeffs[prob.on[i][t]] = -1.0;
            if (t > 0) logic.coeffs[prob.on[i][t - 1]] = 1.0;
            else logic.rhs = -(der.initial_on ? 1.0 : 0.0);
            lp.add_constraint(std::move(logic));

            // Commitment-only ramp rows (see the UC builder for the algebra).
            Constraint up = fresh(Relation::LessEqual, der.p_max);
            up.coeffs[prob.p[i][t]] = 1.0;
            up.coeffs[prob.on[i][t]] = der.p_max - su_ramp;
            if (t > 0) {
                up.coeffs[prob.p[i][t - 1]] = -1.0;
                up.coeffs[prob.on[i][t - 1]] = su_ramp - ru;
            } else {
                up.rhs += der.initial_power + (der.initial_on ? ru - su_ramp : 0.0);
            }
            lp.add_constraint(std::move(up));

            Constraint down = fresh(Relation::LessEqual, der.p_max);
            down.coeffs[prob.p[i][t]] = -1.0;
            down.coeffs[prob.on[i][t]] = sd_ramp - rd;
            if (t > 0) {
                down.coeffs[prob.p[i][t - 1]] = 1.0;
                down.coeffs[prob.on[i][t - 1]] = der.p_max - sd_ramp;
            } else {
                down.rhs += -der.initial_power +
                            (der.initial_on ? -(der.p_max - sd_ramp) : 0.0);
            }
            lp.add_constraint(std::move(down));

            if (der.min_up > 1) {
                Constraint mu = fresh(Relation::LessEqual, 0.0);
                for (int tau = std::max(0, t - der.min_up + 1); tau <= t; ++tau)
                    mu.coeffs[prob.su[i][tau]] = 1.0;
                mu.coeffs[prob.on[i][t]] = -1.0;
                lp.add_constraint(std::move(mu));
            }
            if (der.min_down > 1) {
                Constraint md = fresh(Relation::LessEqual, 1.0);
                for (int tau = std::max(0, t - der.min_down + 1); tau <= t; ++tau)
                    md.coeffs[prob.sd[i][tau]] = 1.0;
                md.coeffs[prob.on[i][t]] = 1.0;
                lp.add_constraint(std::move(md));
            }
        }
    }

    // Storage: mode exclusion and the state-of-charge recursion.
    for (std::size_t s = 0; s < ns; ++s) {
        const StorageDer& st = mg.storages[s];
        for (int t = 0; t < T; ++t) {
            Constraint ch = fresh(Relation::LessEqual, 0.0);
            ch.coeffs[prob.charge[s][t]] = 1.0;
            ch.coeffs[prob.mode[s][t]] = -st.charge_max;
            lp.add_constraint(std::move(ch));
            Constraint dis = fresh(Relation::LessEqual, st.discharge_max);
            dis.coeffs[prob.discharge[s][t]] = 1.0;
            dis.coeffs[prob.mode[s][t]] = st.discharge_max;
            lp.add_constraint(std::move(dis));

            Constraint soc = fresh(Relation::Equal, 0.0);
            soc.coeffs[prob.soc[s][t]] = 1.0;
            soc.coeffs[prob.charge[s][t]] = -st.charge_efficiency;
            soc.coeffs[prob.discharge[s][t]] = 1.0 / st.discharge_efficiency;
            if (t > 0) soc.coeffs[prob.soc[s][t - 1]] = -1.0;
            else soc.rhs = st.soc_initial;
            lp.add_constraint(std::move(soc));
        }
    }

    // Adjustable loads: window energy, run logic, pickup/drop rates.
    for (std::size_t a = 0; a < na; ++a) {
        const AdjustableLoad& al = mg.adjustable_loads[a];
        const double pickup = al.pickup_rate > 0.0 ? al.pickup_rate : al.p_max;
        const double drop = al.drop_rate > 0.0 ? al.drop_rate : al.p_max;
        const double su_rate = std::max(al.p_min, pickup);
        const double sd_rate = std::max(al.p_min, drop);
        Constraint energy = fresh(Relation::Equal, al.required_energy);
        for (int t = al.window_start; t <= al.window_end; ++t)
            energy.coeffs[prob.adj_p[a][t]] = 1.0;
        lp.add_constraint(std::move(energy));
        for (int t = al.window_start; t <= al.window_end; ++t) {
            Constraint hi = fresh(Relation::LessEqual, 0.0);
            hi.coeffs[prob.adj_p[a][t]] = 1.0;
            hi.coeffs[prob.adj_on[a][t]] = -al.p_max;
            lp.add_constraint(std::move(hi));
            if (al.p_min > 0.0) {
                Constraint lo = fresh(Relation::GreaterEqual, 0.0);
                lo.coeffs[prob.adj_p[a][t]] = 1.0;
                lo.coeffs[prob.adj_on[a][t]] = -al.p_min;
                lp.add_constraint(std::move(lo));
            }
            Constraint logic = fresh(Relation::Equal, 0.0);
            logic.coeffs[prob.adj_su[a][t]] = 1.0;
            logic.coeffs[prob.adj_sd[a][t]] = -1.0;
            logic.coeffs[prob.adj_on[a][t]] = -1.0;
            if (t > al.window_start) logic.coeffs[prob.adj_on[a][t - 1]] = 1.0;
            lp.add_constraint(std::move(logic));

            Constraint up = fresh(Relation::LessEqual, al.p_max);
            up.coeffs[prob.adj_p[a][t]] = 1.0;
            up.coeffs[prob.adj_on[a][t]] = al.p_max - su_rate;
            if (t > al.window_start) {
                up.coeffs[prob.adj_p[a][t - 1]] = -1.0;
                up.coeffs[prob.adj_on[a][t - 1]] = su_rate - pickup;
            }
            lp.add_constraint(std::move(up));

            Constraint dn = fresh(Relation::LessEqual, al.p_max);
            dn.coeffs[prob.adj_p[a][t]] = -1.0;
            dn.coeffs[prob.adj_on[a][t]] = sd_rate - drop;
            if (t > al.window_start) {
                dn.coeffs[prob.adj_p[a][t - 1]] = 1.0;
                dn.coeffs[prob.adj_on[a][t - 1]] = al.p_max - sd_rate;
            }
            lp.add_constraint(std::move(dn));

            if (al.min_operating_time > 1) {
                Constraint mu = fresh(Relation::LessEqual, 0.0);
                for (int tau = std::max(al.window_start, t - al.min_operating_time + 1);
                     tau <= t; ++tau)
                    mu.coeffs[prob.adj_su[a][tau]] = 1.0;
                mu.coeffs[prob.adj_on[a][t]] = -1.0;
                lp.add_constraint(std::move(mu));
            }
        }
    }

    // Hourly balance: exchange + generation + discharge - charge + shed
    // - adjustable consumption = fixed load + nondispatchable net load.
    for (int t = 0; t < T; ++t) {
        const double nondisp = mg.nondispatchable.empty() ? 0.0 : mg.nondispatchable[t];
        Constraint bal = fresh(Relation::Equal, mg.total_fixed_load(t) + nondisp);
        bal.coeffs[prob.exchange[t]] = 1.0;
        bal.coeffs[prob.shed[t]] = 1.0;
        for (std::size_t i = 0; i < nd; ++i) bal.coeffs[prob.p[i][t]] = 1.0;
        for (std::size_t s = 0; s < ns; ++s) {
            bal.coeffs[prob.discharge[s][t]] = 1.0;
            bal.coeffs[prob.charge[s][t]] = -1.0;
        }
        for (std::size_t a = 0; a < na; ++a) bal.coeffs[prob.adj_p[a][t]] = -1.0;
        lp.add_constraint(std::move(bal));
    }

    // Award following: exchange = award + dev_up - dev_down.
    if (award) {
        for (int t = 0; t < T; ++t) {
            Constraint tie = fresh(Relation::Equal, (*award)[t]);
            tie.coeffs[prob.exchange[t]] = 1.0;
            tie.coeffs[prob.dev_up[t]] = -1.0;
            tie.coeffs[prob.dev_down[t]] = 1.0;
            lp.add_constraint(std::move(tie));
        }
    }
    return prob;
}

MicrogridSchedule extract(const MicrogridCase& mg, const MgProblem& prob,
                          const milp::MilpSolution& sol, bool award_mode) {
    const int T = mg.horizon;
    MicrogridSchedule s;
    s.der_power.assign(mg.dispatchables.size(), std::vector<double>(T, 0.0));
    s.der_on.assign(mg.dispatchables.size(), std::vector<unsigned char>(T, 0));
    s.storage_power.assign(mg.storages.size(), std::vector<double>(T, 0.0));
    s.soc.assign(mg.storages.size(), std::vector<double>(T, 0.0));
    s.adjustable_power.assign(mg.adjustable_loads.size(), std::vector<double>(T, 0.0));
    s.exchange.assign(T, 0.0);
    s.curtailment.assign(T, 0.0);
    for (std::size_t i = 0; i < mg.dispatchables.size(); ++i)
        for (int t = 0; t < T; ++t) {
            s.der_power[i][t] = sol.primal[prob.p[i][t]];
            s.der_on[i][t] = sol.primal[prob.on[i][t]] > 0.5 ? 1 : 0;
        }
    for (std::size_t st = 0; st < mg.storages.size(); ++st)
        for (int t = 0; t < T; ++t) {
            s.storage_power[st][t] =
                sol.primal[prob.discharge[st][t]] - sol.primal[prob.charge[st][t]];
            s.soc[st][t] = sol.primal[prob.soc[st][t]];
        }
    for (std::size_t a = 0; a < mg.adjustable_loads.size(); ++a)
        for (int t = 0; t < T; ++t) s.adjustable_power[a][t] = sol.primal[prob.adj_p[a][t]];
    for (int t = 0; t < T; ++t) {
        s.exchange[t] = sol.primal[prob.exchange[t]];
        s.curtailment[t] = sol.primal[prob.shed[t]];
    }
    if (award_mode) {
        s.deviation_up.assign(T, 0.0);
        s.deviation_down.assign(T, 0.0);
        for (int t = 0; t < T; ++t) {
            s.deviation_up[t] = sol.primal[prob.dev_up[t]];
            s.deviation_down[t] = sol.primal[prob.dev_down[t]];
        }
    }
    s.total_cost = sol.objective;
    return s;
}

} // namespace

MicrogridSchedule schedule(const MicrogridCase& mg, const std::vector<double>& price,
                           const milp::SolverOptions& opts) {
    if (static_cast<int>(price.size()) != mg.horizon)
        throw ValidationError("schedule", "price series length != horizon");
    const MgProblem prob = build_problem(mg, price, nullptr);
    const milp::MilpSolution sol = milp::solve_milp(prob.lp, opts);
    if (sol.status != milp::SolveStatus::Optimal)
        throw SolveFailed("microgrid schedule ended with status " + milp::to_string(sol.status));
    return extract(mg, prob, sol, false);
}

std::vector<double> net_load(const MicrogridSchedule& s) { return s.exchange; }

MicrogridSchedule schedule_with_fixed_exchange(const MicrogridCase& mg,
                                               const std::vector<double>& award,
                                               const milp::SolverOptions& opts) {
    if (static_cast<int>(award.size()) != mg.horizon)
        throw ValidationError("schedule_with_fixed_exchange", "award length != horizon");
    for (double a : award)
        if (std::fabs(a) > mg.tie_limit + 1e-9)
            throw AwardExceedsTie("award " + std::to_string(a) + " exceeds tie limit " +
                                  std::to_string(mg.tie_limit));
    const std::vector<double> no_price;
    const MgProblem prob = build_problem(mg, no_price, &award);
    const milp::MilpSolution sol = milp::solve_milp(prob.lp, opts);
    if (sol.status != milp::SolveStatus::Optimal)
        throw SolveFailed("award-following schedule ended with status " +
                          milp::to_string(sol.status));
    return extract(mg, prob, sol, true);
}

BidCurve build_demand_bid(const MicrogridCase& mg, const std::vector<double>& price_grid,
                          const milp::SolverOptions& opts) {
    if (price_grid.empty()) throw ValidationError("build_demand_bid", "empty price grid");
    for (std::size_t k = 1; k < price_grid.size(); ++k)
        if (!(price_grid[k] > price_grid[k - 1]))
            throw ValidationError("build_demand_bid", "price grid must be strictly ascending");

    const int T = mg.horizon;
    const std::size_t K = price_grid.size();
    std::vector<std::vector<double>> demand(K);  // [sample][hour]
    for (std::size_t k = 0; k < K; ++k) {
        const std::vector<double> flat(T, price_grid[k]);
        demand[k] = schedule(mg, flat, opts).exchange;
    }

    BidCurve curve;
    curve.hours.assign(T, {});
    for (int t = 0; t < T; ++t) {
        // Highest sample first: the residual demand there is inelastic.
        for (std::size_t k = K; k-- > 0;) {
            double qty;
            if (k + 1 == K) qty = demand[k][t];
            else qty = demand[k][t] - demand[k + 1][t];
            if (k + 1 < K && qty < 0.0) {
                curve.clipped_mw += -qty;
                qty = 0.0;
            }
            if (std::fabs(qty) > 1e-9)
                curve.hours[t].push_back(BidStep{price_grid[k], qty});
        }
    }
    return curve;
}

void BidCurve::validate(double tie_limit) const {
    for (const auto& steps : hours) {
        double total = 0.0;
        for (std::size_t i = 0; i < steps.size(); ++i) {
            if (i > 0 && !(steps[i].price < steps[i - 1].price))
                throw ValidationError("BidCurve", "prices not strictly decreasing");
            if (steps[i].quantity > 0.0) total += steps[i].quantity;
        }
        if (total > tie_limit + 1e-6)
            throw ValidationError("BidCurve", "cumulative quantity exceeds tie limit");
    }
}

double evaluate_cost(const MicrogridCase& mg, const MicrogridSchedule& s,
                     const std::vector<double>& price) {
    double cost = 0.0;
    for (std::size_t i = 0; i < mg.dispatchables.size(); ++i) {
        const DispatchableDer& der = mg.dispatchables[i];
        int prev = der.initial_on ? 1 : 0;
        for (int t = 0; t < mg.horizon; ++t) {
            const int on = s.der_on[i][t];
            cost += der.marginal_cost * s.der_power[i][t] + der.no_load_cost * on;
            if (on == 1 && prev == 0) cost += der.startup_cost;
            if (on == 0 && prev == 1) cost += der.shutdown_cost;
            prev = on;
        }
    }
    for (int t = 0; t < mg.horizon; ++t) {
        cost += mg.voll * s.curtailment[t];
        if (!price.empty()) cost += price[t] * s.exchange[t];
    }
    if (!s.deviation_up.empty())
        for (int t = 0; t < mg.horizon; ++t)
            cost += mg.violation_penalty * (s.deviation_up[t] + s.deviation_down[t]);
    return cost;
}

} // namespace mgsim::microgrid
