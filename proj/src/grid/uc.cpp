#include "mgsim/errors.hpp"
#include "mgsim/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace mgsim::grid {

namespace {
constexpr double kAngleBound = 50.0;  // rad; generous under per-unit reactances
}

int NetworkCase::bus_index(int id) const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].id == id) return static_cast<int>(i);
    return -1;
}

int NetworkCase::reference_index() const {
    for (std::size_t i = 0; i < buses.size(); ++i)
        if (buses[i].is_reference) return static_cast<int>(i);
    return -1;
}

double NetworkCase::total_load(int hour) const {
    double sum = 0.0;
    for (const auto& series : bus_load) sum += series[hour];
    return sum;
}

void NetworkCase::validate() const {
    if (horizon <= 0) throw ValidationError("NetworkCase", "horizon must be positive");
    if (buses.empty()) throw ValidationError("NetworkCase", "no buses");
    int refs = 0;
    for (const Bus& b : buses) {
        if (b.is_reference) ++refs;
        int count = 0;
        for (const Bus& other : buses)
            if (other.id == b.id) ++count;
        if (count != 1)
            throw ValidationError("NetworkCase", "duplicate bus id " + std::to_string(b.id));
    }
    if (refs != 1) throw ValidationError("NetworkCase", "exactly one reference bus required");
    for (const Branch& br : branches) {
        if (bus_index(br.from_bus) < 0 || bus_index(br.to_bus) < 0)
            throw ValidationError("Branch", "references unknown bus " +
                                                std::to_string(bus_index(br.from_bus) < 0
                                                                   ? br.from_bus
                                                                   : br.to_bus));
        if (br.from_bus == br.to_bus) throw ValidationError("Branch", "from == to");
        if (!(br.reactance > 0.0)) throw ValidationError("Branch", "reactance must be positive");
        if (br.flow_limit < 0.0) throw ValidationError("Branch", "negative flow limit");
    }
    for (const ThermalUnit& u : units) {
        if (bus_index(u.bus) < 0)
            throw ValidationError("ThermalUnit " + u.name,
                                  "references unknown bus " + std::to_string(u.bus));
        if (!(0.0 <= u.p_min && u.p_min <= u.p_max))
            throw ValidationError("ThermalUnit " + u.name, "requires 0 <= p_min <= p_max");
        if (u.marginal_cost < 0 || u.no_load_cost < 0 || u.startup_cost < 0 || u.shutdown_cost < 0)
            throw ValidationError("ThermalUnit " + u.name, "negative cost");
        if (!(u.ramp_up > 0.0) || !(u.ramp_down > 0.0))
            throw ValidationError("ThermalUnit " + u.name, "ramps must be positive");
        if (u.min_up < 1 || u.min_down < 1)
            throw ValidationError("ThermalUnit " + u.name, "min_up/min_down must be >= 1");
    }
    if (bus_load.size() != buses.size())
        throw ValidationError("NetworkCase", "bus_load rows != bus count");
    for (const auto& series : bus_load) {
        if (static_cast<int>(series.size()) != horizon)
            throw ValidationError("NetworkCase", "bus_load columns != horizon");
        for (double v : series)
            if (v < 0.0) throw ValidationError("NetworkCase", "negative load");
    }
}

UcProblem build_uc_problem(const NetworkCase& net) {
    net.validate();
    using milp::Constraint;
    using milp::Relation;

    UcProblem prob;
    prob.horizon = net.horizon;
    milp::LinearProgram& lp = prob.lp;
    const int T = net.horizon;
    const std::size_t nu = net.units.size();
    const std::size_t nb = net.buses.size();
    const std::size_t nl = net.branches.size();

    prob.p.assign(nu, std::vector<std::size_t>(T));
    prob.on.assign(nu, std::vector<std::size_t>(T));
    prob.su.assign(nu, std::vector<std::size_t>(T));
    prob.sd.assign(nu, std::vector<std::size_t>(T));
    prob.theta.assign(nb, std::vector<std::size_t>(T));
    prob.flow.assign(nl, std::vector<std::size_t>(T));
    prob.balance_row.assign(nb, std::vector<std::size_t>(T));

    for (std::size_t u = 0; u < nu; ++u) {
        const ThermalUnit& unit = net.units[u];
        // Hours pinned by the initial min-up/min-down window.
        int force_on_until = 0, force_off_until = 0;
        if (unit.initial_on && unit.initial_up_time < unit.min_up)
            force_on_until = unit.min_up - unit.initial_up_time;
        if (!unit.initial_on && unit.initial_down_time < unit.min_down)
            force_off_until = unit.min_down - unit.initial_down_time;
        for (int t = 0; t < T; ++t) {
            prob.p[u][t] = lp.add_variable(0.0, unit.p_max, unit.marginal_cost);
            double lo = 0.0, hi = 1.0;
            if (t < force_on_until) lo = 1.0;
            if (t < force_off_until) hi = 0.0;
            prob.on[u][t] = lp.add_variable(lo, hi, unit.no_load_cost, true);
            prob.su[u][t] = lp.add_variable(0.0, 1.0, unit.startup_cost);
            prob.sd[u][t] = lp.add_variable(0.0, 1.0, unit.shutdown_cost);
        }
    }
    const int ref = net.reference_index();
    for (std::size_t b = 0; b < nb; ++b)
        for (int t = 0; t < T; ++t) {
            const double bound = static_cast<int>(b) == ref ? 0.0 : kAngleBound;
            prob.theta[b][t] = lp.add_variable(-bound, bound, 0.0);
        }
    for (std::size_t l = 0; l < nl; ++l)
        for (int t = 0; t < T; ++t)
            prob.flow[l][t] =
                lp.add_variable(-net.branches[l].flow_limit, net.branches[l].flow_limit, 0.0);

    const std::size_t n = lp.num_vars();
    auto fresh = [n](Relation rel, double rhs) {
        Constraint c;
        c.coeffs.assign(n, 0.0);
        c.rel = rel;
        c.rhs = rhs;
        return c;
    };

    for (std::size_t u = 0; u < nu; ++u) {
        const ThermalUnit& unit = net.units[u];
        const double su_ramp = std::max(unit.p_min, unit.ramp_up);
        const double sd_ramp = std::max(unit.p_min, unit.ramp_down);
        for (int t = 0; t < T; ++t) {
            // Capacity coupled to commitment.
            Constraint cap_hi = fresh(Relation::LessEqual, 0.0);
            cap_hi.coeffs[prob.p[u][t]] = 1.0;
            cap_hi.coeffs[prob.on[u][t]] = -unit.p_max;
            lp.add_constraint(std::move(cap_hi));
            if (unit.p_min > 0.0) {
                Constraint cap_lo = fresh(Relation::GreaterEqual, 0.0);
                cap_lo.coeffs[prob.p[u][t]] = 1.0;
                cap_lo.coeffs[prob.on[u][t]] = -unit.p_min;
                lp.add_constraint(std::move(cap_lo));
            }

            // Startup/shutdown indicator logic: su - sd = on_t - on_{t-1}.
            Constraint logic = fresh(Relation::Equal, 0.0);
            logic.coeffs[prob.su[u][t]] = 1.0;
            logic.coeffs[prob.sd[u][t]] = -1.0;
            logic.coeffs[prob.on[u][t]] = -1.0;
            if (t > 0) logic.coeffs[prob.on[u][t - 1]] = 1.0;
            else logic.rhs = -(unit.initial_on ? 1.0 : 0.0);
            lp.add_constraint(std::move(logic));

            // Ramps in commitment-only form (no startup variables, so relaxed
            // startup indicators cannot buy extra ramp allowance):
            //   p_t - p_{t-1} <= RU*on_{t-1} + SUR*(on_t - on_{t-1}) + Pmax*(1 - on_t)
            //   p_{t-1} - p_t <= RD*on_t + SDR*(on_{t-1} - on_t) + Pmax*(1 - on_{t-1})
            Constraint up = fresh(Relation::LessEqual, unit.p_max);
            up.coeffs[prob.p[u][t]] = 1.0;
            up.coeffs[prob.on[u][t]] = unit.p_max - su_ramp;
            if (t > 0) {
                up.coeffs[prob.p[u][t - 1]] = -1.0;
                up.coeffs[prob.on[u][t - 1]] = su_ramp - unit.ramp_up;
            } else {
                up.rhs += unit.initial_power +
                          (unit.initial_on ? unit.ramp_up - su_ramp : 0.0);
            }
            lp.add_constraint(std::move(up));

            Constraint down = fresh(Relation::LessEqual, unit.p_max);
            down.coeffs[prob.p[u][t]] = -1.0;
            down.coeffs[prob.on[u][t]] = sd_ramp - unit.ramp_down;
            if (t > 0) {
                down.coeffs[prob.p[u][t - 1]] = 1.0;
                down.coeffs[prob.on[u][t - 1]] = unit.p_max - sd_ramp;
            } else {
                down.rhs += -unit.initial_power +
                            (unit.initial_on ? -(unit.p_max - sd_ramp) : 0.0);
            }
            lp.add_constraint(std::move(down));

            // Min-up: startups within the trailing window hold the unit on.
            if (unit.min_up > 1) {
                Constraint mu = fresh(Relation::LessEqual, 0.0);
                for (int tau = std::max(0, t - unit.min_up + 1); tau <= t; ++tau)
                    mu.coeffs[prob.su[u][tau]] = 1.0;
                mu.coeffs[prob.on[u][t]] = -1.0;
                lp.add_constraint(std::move(mu));
            }
            // Min-down: shutdowns within the window keep it off.
            if (unit.min_down > 1) {
                Constraint md = fresh(Relation::LessEqual, 1.0);
                for (int tau = std::max(0, t - unit.min_down + 1); tau <= t; ++tau)
                    md.coeffs[prob.sd[u][tau]] = 1.0;
                md.coeffs[prob.on[u][t]] = 1.0;
                lp.add_constraint(std::move(md));
            }
        }
    }

    // DC flow definition: flow = base / x * (theta_from - theta_to).
    for (std::size_t l = 0; l < nl; ++l) {
        const Branch& br = net.branches[l];
        const double susceptance = kPowerBase / br.reactance;
        const int from = net.bus_index(br.from_bus);
        const int to = net.bus_index(br.to_bus);
        for (int t = 0; t < T; ++t) {
            Constraint def = fresh(Relation::Equal, 0.0);
            def.coeffs[prob.flow[l][t]] = 1.0;
            def.coeffs[prob.theta[from][t]] = -susceptance;
            def.coeffs[prob.theta[to][t]] = susceptance;
            lp.add_constraint(std::move(def));
        }
    }

    // Nodal balance; the dual of this row is the hourly LMP at the bus.
    for (std::size_t b = 0; b < nb; ++b) {
        for (int t = 0; t < T; ++t) {
            Constraint bal = fresh(Relation::Equal, net.bus_load[b][t]);
            for (std::size_t u = 0; u < nu; ++u)
                if (net.bus_index(net.units[u].bus) == static_cast<int>(b))
                    bal.coeffs[prob.p[u][t]] = 1.0;
            for (std::size_t l = 0; l < nl; ++l) {
                if (net.bus_index(net.branches[l].from_bus) == static_cast<int>(b))
                    bal.coeffs[prob.flow[l][t]] = -1.0;
                if (net.bus_index(net.branches[l].to_bus) == static_cast<int>(b))
                    bal.coeffs[prob.flow[l][t]] = 1.0;
            }
            prob.balance_row[b][t] = lp.add_constraint(std::move(bal));
        }
    }
    return prob;
}

UcResult extract_uc_primal(const NetworkCase& net, const UcProblem& prob,
                           const std::vector<double>& primal) {
    UcResult r;
    const int T = prob.horizon;
    const std::size_t nu = net.units.size();
    const std::size_t nb = net.buses.size();
    const std::size_t nl = net.branches.size();
    r.commitment.assign(nu, std::vector<unsigned char>(T, 0));
    r.dispatch.assign(nu, std::vector<double>(T, 0.0));
    r.angle.assign(nb, std::vector<double>(T, 0.0));
    r.flow.assign(nl, std::vector<double>(T, 0.0));
    r.lmp.assign(nb, std::vector<double>(T, 0.0));
    for (std::size_t u = 0; u < nu; ++u)
        for (int t = 0; t < T; ++t) {
            r.commitment[u][t] = primal[prob.on[u][t]] > 0.5 ? 1 : 0;
            r.dispatch[u][t] = primal[prob.p[u][t]];
        }
    for (std::size_t b = 0; b < nb; ++b)
        for (int t = 0; t < T; ++t) r.angle[b][t] = primal[prob.theta[b][t]];
    for (std::size_t l = 0; l < nl; ++l)
        for (int t = 0; t < T; ++t) r.flow[l][t] = primal[prob.flow[l][t]];
    return r;
}

namespace {

UcResult dispatch_with_commitment(const NetworkCase& net, const UcProblem& prob,
                                  const std::vector<std::vector<unsigned char>>& commitment,
                                  const milp::SolverOptions& opts) {
    const int T = prob.horizon;
    std::vector<double> assignment;
    for (std::size_t u = 0; u < net.units.size(); ++u)
        for (int t = 0; t < T; ++t) assignment.push_back(commitment[u][t] ? 1.0 : 0.0);

    const milp::LinearProgram fixed = milp::fix_binaries(prob.lp, assignment);
    const milp::LpSolution sol = milp::solve_lp(fixed, opts);
    if (sol.status == milp::SolveStatus::Infeasible)
        throw RedispatchInfeasible("no feasible dispatch under the fixed commitment");
    if (sol.status != milp::SolveStatus::Optimal)
        throw SolveFailed("dispatch LP ended with status " + milp::to_string(sol.status));

    UcResult r = extract_uc_primal(net, prob, sol.primal);
    r.total_cost = sol.objective;
    for (std::size_t u = 0; u < net.units.size(); ++u)
        for (int t = 0; t < T; ++t) r.commitment[u][t] = commitment[u][t];
    for (std::size_t b = 0; b < net.buses.size(); ++b)
        for (int t = 0; t < T; ++t) r.lmp[b][t] = sol.duals[prob.balance_row[b][t]];
    return r;
}

} // namespace

UcResult solve_dispatch_with_lmp(const NetworkCase& net,
                                 const std::vector<std::vector<unsigned char>>& commitment,
                                 const milp::SolverOptions& opts) {
    if (commitment.size() != net.units.size())
        throw ValidationError("commitment", "unit count mismatch");
    for (const auto& row : commitment)
        if (static_cast<int>(row.size()) != net.horizon)
            throw ValidationError("commitment", "horizon mismatch");
    const UcProblem prob = build_uc_problem(net);
    return dispatch_with_commitment(net, prob, commitment, opts);
}

UcResult solve_unit_commitment(const NetworkCase& net, const milp::SolverOptions& opts) {
    const UcProblem prob = build_uc_problem(net);
    const milp::MilpSolution milp_sol = milp::solve_milp(prob.lp, opts);
    if (milp_sol.status != milp::SolveStatus::Optimal)
        throw SolveFailed("unit commitment ended with status " + milp::to_string(milp_sol.status));

    std::vector<std::vector<unsigned char>> commitment(net.units.size(),
                                                       std::vector<unsigned char>(net.horizon, 0));
    for (std::size_t u = 0; u < net.units.size(); ++u)
        for (int t = 0; t < net.horizon; ++t)
            commitment[u][t] = milp_sol.primal[prob.on[u][t]] > 0.5 ? 1 : 0;

    // Price pass: fix the commitment and read balance duals from the LP.
    return dispatch_with_commitment(net, prob, commitment, opts);
}

double average_lmp(const UcResult& result, int hour) {
    if (result.lmp.empty()) return 0.0;
    double sum = 0.0;
    for (const auto& series : result.lmp) sum += series[hour];
    return sum / static_cast<double>(result.lmp.size());
}

} // namespace mgsim::grid
