#include "mgsim/errors.hpp"
#include "mgsim/paradigms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace mgsim::paradigms {

std::string to_string(Paradigm p) {
    switch (p) {
        case Paradigm::Baseline: return "baseline";
        case Paradigm::Redispatch: return "redispatch";
        case Paradigm::Iterative: return "iterative";
        case Paradigm::Dmo: return "dmo";
    }
    return "?";
}

Paradigm paradigm_from_string(const std::string& name) {
    if (name == "baseline") return Paradigm::Baseline;
    if (name == "redispatch") return Paradigm::Redispatch;
    if (name == "iterative") return Paradigm::Iterative;
    if (name == "dmo") return Paradigm::Dmo;
    throw ValidationError("paradigm", "unknown paradigm '" + name + "'");
}

std::string to_string(Termination t) {
    switch (t) {
        case Termination::FixedPoint: return "FixedPoint";
        case Termination::CycleDetected: return "CycleDetected";
        case Termination::MaxIterations: return "MaxIterations";
    }
    return "?";
}

double Scenario::effective_penetration(std::size_t mg_index) const {
    if (mg_index < penetration_override.size() && penetration_override[mg_index] >= 0.0)
        return penetration_override[mg_index];
    return penetration;
}

void Scenario::validate() const {
    network.validate();
    if (!(penetration >= 0.0 && penetration <= 1.0))
        throw ValidationError("Scenario", "penetration outside [0,1]");
    if (max_iter < 2) throw ValidationError("Scenario", "max_iter must be >= 2");
    if (!(load_tol > 0.0)) throw ValidationError("Scenario", "load_tol must be positive");
    std::map<int, double> per_bus;
    for (std::size_t k = 0; k < microgrids.size(); ++k) {
        const auto& mg = microgrids[k];
        if (network.bus_index(mg.attached_bus) < 0)
            throw ValidationError("Microgrid " + mg.id,
                                  "attached to unknown bus " + std::to_string(mg.attached_bus));
        if (mg.horizon != network.horizon)
            throw ValidationError("Microgrid " + mg.id, "horizon differs from the network");
        const double f = effective_penetration(k);
        if (!(f >= 0.0 && f <= 1.0))
            throw ValidationError("Microgrid " + mg.id, "penetration outside [0,1]");
        per_bus[mg.attached_bus] += f;
    }
    for (const auto& [bus, f_total] : per_bus)
        if (f_total > 1.0 + 1e-9)
            throw ValidationError("Scenario", "penetration at bus " + std::to_string(bus) +
                                                  " exceeds 1");
}

microgrid::MicrogridCase scale_microgrid(const microgrid::MicrogridCase& tpl, double f,
                                         const std::vector<double>& bus_forecast) {
    microgrid::MicrogridCase mg = tpl;
    // Fixed load is the assigned share of the bus forecast; power, energy,
    // and fixed dollar costs scale with the share so the response is exactly
    // proportional to f. Per-MWh rates and times stay put.
    mg.fixed_load.clear();
    std::vector<double> load(bus_forecast.size());
    for (std::size_t t = 0; t < bus_forecast.size(); ++t) load[t] = f * bus_forecast[t];
    mg.fixed_load.push_back(std::move(load));
    for (double& v : mg.nondispatchable) v *= f;
    mg.tie_limit *= f;
    for (auto& der : mg.dispatchables) {
        der.p_min *= f;
        der.p_max *= f;
        der.no_load_cost *= f;
        der.startup_cost *= f;
        der.shutdown_cost *= f;
        der.ramp_up *= f;
        der.ramp_down *= f;
        der.initial_power *= f;
    }
    for (auto& st : mg.storages) {
        st.charge_max *= f;
        st.discharge_max *= f;
        st.energy_capacity *= f;
        st.soc_min *= f;
        st.soc_max *= f;
        st.soc_initial *= f;
        st.terminal_soc *= f;
    }
    for (auto& al : mg.adjustable_loads) {
        al.p_min *= f;
        al.p_max *= f;
        al.required_energy *= f;
        al.pickup_rate *= f;
        al.drop_rate *= f;
    }
    return mg;
}

void ParadigmReport::compute_mismatch() {
    const std::size_t nb = forecast_load.size();
    const std::size_t T = nb ? forecast_load[0].size() : 0;
    hourly_delta_mw.assign(T, 0.0);
    max_abs_delta_mw = 0.0;
    sum_abs_delta_mwh = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
        for (std::size_t t = 0; t < T; ++t) {
            const double d = actual_load[b][t] - forecast_load[b][t];
            hourly_delta_mw[t] += d;
            max_abs_delta_mw = std::max(max_abs_delta_mw, std::fabs(d));
            sum_abs_delta_mwh += std::fabs(d);
        }
    }
}

namespace {

struct Response {
    std::vector<std::vector<double>> next_load;  // [bus][hour]
    std::vector<MicrogridOutcome> outcomes;
};

// Microgrids best-respond to their bus prices; the revised bus load is the
// unassigned share of the forecast plus the microgrid exchanges.
Response respond(const Scenario& scn, const std::vector<std::vector<double>>& forecast,
                 const std::vector<std::vector<double>>& lmp, const milp::SolverOptions& opts) {
    const grid::NetworkCase& net = scn.network;
    Response r;
    r.next_load = forecast;
    for (std::size_t k = 0; k < scn.microgrids.size(); ++k) {
        const double f = scn.effective_penetration(k);
        const int b = net.bus_index(scn.microgrids[k].attached_bus);
        const auto eff = scale_microgrid(scn.microgrids[k], f, forecast[b]);
        const auto sched = microgrid::schedule(eff, lmp[b], opts);
        for (int t = 0; t < net.horizon; ++t)
            r.next_load[b][t] += sched.exchange[t] - f * forecast[b][t];
        MicrogridOutcome out;
        out.id = scn.microgrids[k].id;
        out.bus = scn.microgrids[k].attached_bus;
        out.penetration = f;
        out.sched = sched;
        r.outcomes.push_back(std::move(out));
    }
    return r;
}

std::vector<std::int64_t> quantize(const std::vector<std::vector<double>>& load, double tol) {
    std::vector<std::int64_t> key;
    key.reserve(load.size() * (load.empty() ? 0 : load[0].size()));
    for (const auto& series : load)
        for (double v : series) key.push_back(std::llround(v / tol));
    return key;
}

double max_abs_diff(const std::vector<std::vector<double>>& a,
                    const std::vector<std::vector<double>>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t t = 0; t < a[i].size(); ++t)
            worst = std::max(worst, std::fabs(a[i][t] - b[i][t]));
    return worst;
}

} // namespace

ParadigmReport run_baseline(const Scenario& scn, const milp::SolverOptions& opts) {
    scn.validate();
    ParadigmReport rep;
    rep.paradigm = Paradigm::Baseline;
    rep.forecast_load = scn.network.bus_load;
    rep.base_uc = grid::solve_unit_commitment(scn.network, opts);
    Response r = respond(scn, rep.forecast_load, rep.base_uc.lmp, opts);
    rep.actual_load = std::move(r.next_load);
    rep.microgrids = std::move(r.outcomes);
    rep.compute_mismatch();
    return rep;
}

ParadigmReport run_redispatch(const Scenario& scn, const milp::SolverOptions& opts) {
    ParadigmReport rep = run_baseline(scn, opts);
    rep.paradigm = Paradigm::Redispatch;
    rep.redispatch_attempted = true;

    grid::NetworkCase revised = scn.network;
    revised.bus_load = rep.actual_load;
    try {
        rep.redispatch = grid::solve_dispatch_with_lmp(revised, rep.base_uc.commitment, opts);
        rep.redispatch_feasible = true;
    } catch (const RedispatchInfeasible&) {
        // The paper's caveat case: report the flag instead of failing.
        rep.redispatch_feasible = false;
        return rep;
    }

    const std::size_t nu = scn.network.units.size();
    const int T = scn.network.horizon;
    rep.dispatch_delta.assign(nu, std::vector<double>(T, 0.0));
    for (std::size_t u = 0; u < nu; ++u)
        for (int t = 0; t < T; ++t)
            rep.dispatch_delta[u][t] = rep.redispatch.dispatch[u][t] - rep.base_uc.dispatch[u][t];

    // Post-redispatch nodal residual, recomputed from the dispatch and flows.
    const grid::NetworkCase& net = scn.network;
    double worst = 0.0;
    for (std::size_t b = 0; b < net.buses.size(); ++b) {
        for (int t = 0; t < T; ++t) {
            double inj = -rep.actual_load[b][t];
            for (std::size_t u = 0; u < nu; ++u)
                if (net.bus_index(net.units[u].bus) == static_cast<int>(b))
                    inj += rep.redispatch.dispatch[u][t];
            for (std::size_t l = 0; l < net.branches.size(); ++l) {
                if (net.bus_index(net.branches[l].from_bus) == static_cast<int>(b))
                    inj -= rep.redispatch.flow[l][t];
                if (net.bus_index(net.branches[l].to_bus) == static_cast<int>(b))
                    inj += rep.redispatch.flow[l][t];
            }
            worst = std::max(worst, std::fabs(inj));
        }
    }
    rep.max_redispatch_residual_mw = worst;
    return rep;
}

ParadigmReport run_iterative(const Scenario& scn, const milp::SolverOptions& opts) {
    scn.validate();
    ParadigmReport rep;
    rep.paradigm = Paradigm::Iterative;
    rep.forecast_load = scn.network.bus_load;
    rep.trace.termination = Termination::MaxIterations;

    std::vector<std::vector<double>> current = scn.network.bus_load;
    std::vector<std::vector<std::int64_t>> seen;
    seen.push_back(quantize(current, scn.load_tol));

    for (int k = 0; k < scn.max_iter; ++k) {
        grid::NetworkCase net = scn.network;
        net.bus_load = current;
        const grid::UcResult uc = grid::solve_unit_commitment(net, opts);
        Response r = respond(scn, rep.forecast_load, uc.lmp, opts);

        IterationEntry entry;
        entry.bus_load = current;
        entry.lmp = uc.lmp;
        entry.total_cost = uc.total_cost;
        entry.avg_lmp.resize(net.horizon);
        for (int t = 0; t < net.horizon; ++t) entry.avg_lmp[t] = grid::average_lmp(uc, t);
        for (const auto& out : r.outcomes) entry.microgrid_cost.push_back(out.sched.total_cost);
        rep.trace.iterations.push_back(std::move(entry));
        if (k == 0) rep.base_uc = uc;
        rep.actual_load = r.next_load;
        rep.microgrids = std::move(r.outcomes);

        // A fixed point needs one confirming pass, so it is declared from
        // iteration 2 onward; earlier recurrences are cycles.
        if (k >= 1 && max_abs_diff(r.next_load, current) < scn.load_tol) {
            rep.trace.termination = Termination::FixedPoint;
            break;
        }
        const auto key = quantize(r.next_load, scn.load_tol);
        bool cycled = false;
        for (std::size_t j = 0; j + 1 < seen.size(); ++j) {
            if (seen[j] == key) {
                rep.trace.termination = Termination::CycleDetected;
                rep.trace.cycle_period = static_cast<int>(seen.size() - j);
                cycled = true;
                break;
            }
        }
        if (cycled) break;
        seen.push_back(key);
        current = std::move(r.next_load);
    }
    rep.compute_mismatch();
    return rep;
}

ParadigmReport run(const Scenario& scn, const milp::SolverOptions& opts) {
    switch (scn.paradigm) {
        case Paradigm::Baseline: return run_baseline(scn, opts);
        case Paradigm::Redispatch: return run_redispatch(scn, opts);
        case Paradigm::Iterative: return run_iterative(scn, opts);
        case Paradigm::Dmo: return run_dmo(scn, opts);
    }
    throw ValidationError("Scenario", "unknown paradigm");
}

} // namespace mgsim::paradigms
