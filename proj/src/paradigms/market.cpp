#include "mgsim/errors.hpp"
#include "mgsim/paradigms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>

namespace mgsim::paradigms {

microgrid::BidCurve aggregate_bids(const std::vector<microgrid::BidCurve>& curves) {
    microgrid::BidCurve out;
    if (curves.empty()) return out;
    const std::size_t T = curves[0].hours.size();
    out.hours.assign(T, {});
    for (std::size_t t = 0; t < T; ++t) {
        std::vector<microgrid::BidStep> steps;
        for (const auto& c : curves)
            for (const auto& s : c.hours[t]) steps.push_back(s);
        std::stable_sort(steps.begin(), steps.end(),
                         [](const auto& a, const auto& b) { return a.price > b.price; });
        for (const auto& s : steps) {
            if (!out.hours[t].empty() && out.hours[t].back().price == s.price)
                out.hours[t].back().quantity += s.quantity;
            else
                out.hours[t].push_back(s);
        }
    }
    return out;
}

MarketResult clear_market(const grid::NetworkCase& rigid_net,
                          const std::map<int, microgrid::BidCurve>& bids_per_bus,
                          const milp::SolverOptions& opts) {
    grid::UcProblem prob = grid::build_uc_problem(rigid_net);
    milp::LinearProgram& lp = prob.lp;
    const int T = rigid_net.horizon;

    // One elastic block per bid step: accepted quantity earns its threshold.
    struct Block {
        int bus_index;
        int hour;
        std::size_t var;
        double price;
    };
    std::vector<Block> blocks;
    for (const auto& [bus, curve] : bids_per_bus) {
        const int b = rigid_net.bus_index(bus);
        if (b < 0) throw ValidationError("clear_market", "bid at unknown bus " + std::to_string(bus));
        for (int t = 0; t < T; ++t) {
            for (const auto& step : curve.hours[t]) {
                const double lo = std::min(0.0, step.quantity);
                const double hi = std::max(0.0, step.quantity);
                const std::size_t var = lp.add_variable(lo, hi, -step.price);
                lp.constraints[prob.balance_row[b][t]].coeffs.resize(lp.num_vars(), 0.0);
                lp.constraints[prob.balance_row[b][t]].coeffs[var] = -1.0;
                blocks.push_back({b, t, var, step.price});
            }
        }
    }
    for (auto& c : lp.constraints) c.coeffs.resize(lp.num_vars(), 0.0);

    const milp::MilpSolution sol = milp::solve_milp(lp, opts);
    if (sol.status != milp::SolveStatus::Optimal)
        throw SolveFailed("market clearing ended with status " + milp::to_string(sol.status));

    MarketResult res;
    res.award.assign(rigid_net.buses.size(), std::vector<double>(T, 0.0));
    double bid_value = 0.0;
    for (const Block& blk : blocks) {
        const double q = sol.primal[blk.var];
        res.award[blk.bus_index][blk.hour] += q;
        bid_value += blk.price * q;
    }
    res.generation_cost = sol.objective + bid_value;
    res.welfare = -sol.objective;
    res.uc = grid::extract_uc_primal(rigid_net, prob, sol.primal);
    res.uc.total_cost = res.generation_cost;

    // Distribution-market prices: balance duals under the fixed commitment.
    std::vector<double> assignment;
    for (std::size_t j = 0; j < lp.num_vars(); ++j)
        if (lp.is_binary[j]) assignment.push_back(sol.primal[j] < 0.5 ? 0.0 : 1.0);
    const milp::LpSolution price_pass = milp::solve_lp(milp::fix_binaries(lp, assignment), opts);
    if (price_pass.status == milp::SolveStatus::Optimal)
        for (std::size_t b = 0; b < rigid_net.buses.size(); ++b)
            for (int t = 0; t < T; ++t)
                res.uc.lmp[b][t] = price_pass.duals[prob.balance_row[b][t]];
    return res;
}

std::vector<double> disaggregate_award(const std::vector<microgrid::BidCurve>& curves, int hour,
                                       double bus_award) {
    std::vector<double> out(curves.size(), 0.0);
    if (bus_award < 0.0) bus_award = 0.0;
    struct Item {
        double price;
        double qty;
        std::size_t mg;
    };
    std::vector<Item> items;
    double total = 0.0;
    for (std::size_t k = 0; k < curves.size(); ++k) {
        for (const auto& s : curves[k].hours[hour]) {
            if (s.quantity <= 0.0) continue;  // only the demand side is awarded
            items.push_back({s.price, s.quantity, k});
            total += s.quantity;
        }
    }
    if (bus_award > total + 1e-9)
        throw AwardExceedsBids("award " + std::to_string(bus_award) + " exceeds bid total " +
                               std::to_string(total));
    std::stable_sort(items.begin(), items.end(),
                     [](const Item& a, const Item& b) { return a.price > b.price; });

    const double grain = 1e-9;
    std::int64_t remaining = std::llround(std::min(bus_award, total) / grain);
    std::size_t i = 0;
    while (i < items.size() && remaining > 0) {
        // Group of equal-price steps shares pro-rata on ties.
        std::size_t j = i;
        double group_qty = 0.0;
        while (j < items.size() && items[j].price == items[i].price) group_qty += items[j++].qty;
        const std::int64_t group_units = std::llround(group_qty / grain);
        if (group_units <= remaining) {
            for (std::size_t g = i; g < j; ++g)
                out[items[g].mg] += static_cast<double>(std::llround(items[g].qty / grain)) * grain;
            remaining -= group_units;
        } else {
            // Largest-remainder split of the leftover award across the group.
            std::vector<std::int64_t> share(j - i, 0);
            std::vector<std::pair<double, std::size_t>> fracs;
            std::int64_t assigned = 0;
            for (std::size_t g = i; g < j; ++g) {
                const double exact = static_cast<double>(remaining) * (items[g].qty / group_qty);
                share[g - i] = static_cast<std::int64_t>(std::floor(exact));
                assigned += share[g - i];
                fracs.emplace_back(exact - std::floor(exact), g - i);
            }
            std::stable_sort(fracs.begin(), fracs.end(),
                             [](const auto& a, const auto& b) { return a.first > b.first; });
            for (std::size_t r = 0; r < fracs.size() && assigned < remaining; ++r, ++assigned)
                ++share[fracs[r].second];
            for (std::size_t g = i; g < j; ++g)
                out[items[g].mg] += static_cast<double>(share[g - i]) * grain;
            remaining = 0;
        }
        i = j;
    }

    // Settle floating-point residue onto the largest part so the plain
    // left-to-right sum reproduces the award bit for bit.
    for (int pass = 0; pass < 8; ++pass) {
        double sum = 0.0;
        for (double v : out) sum += v;
        const double residue = bus_award - sum;
        if (residue == 0.0) break;
        std::size_t target = 0;
        for (std::size_t k = 1; k < out.size(); ++k)
            if (out[k] > out[target]) target = k;
        out[target] += residue;
    }
    return out;
}

std::vector<double> default_price_grid(const Scenario& scn) {
    double min_der = std::numeric_limits<double>::infinity();
    double max_cost = 0.0;
    for (const auto& mg : scn.microgrids)
        for (const auto& der : mg.dispatchables) {
            min_der = std::min(min_der, der.marginal_cost);
            max_cost = std::max(max_cost, der.marginal_cost);
        }
    for (const auto& u : scn.network.units) max_cost = std::max(max_cost, u.marginal_cost);
    if (!std::isfinite(min_der)) min_der = max_cost > 0.0 ? max_cost : 1.0;
    if (max_cost <= 0.0) max_cost = 1.0;
    double lo = 0.5 * min_der;
    double hi = 2.0 * max_cost;
    if (hi <= lo) hi = lo + 1.0;
    std::vector<double> grid(20);
    for (int k = 0; k < 20; ++k) grid[k] = lo + (hi - lo) * k / 19.0;
    return grid;
}

ParadigmReport run_dmo(const Scenario& scn, const milp::SolverOptions& opts) {
    scn.validate();
    ParadigmReport rep;
    rep.paradigm = Paradigm::Dmo;
    const grid::NetworkCase& net = scn.network;
    const int T = net.horizon;

    const std::vector<double> grid_prices =
        scn.price_grid.empty() ? default_price_grid(scn) : scn.price_grid;

    // Rigid load: the share of the forecast not assigned to any microgrid.
    grid::NetworkCase rigid_net = net;
    std::vector<microgrid::MicrogridCase> effective;
    for (std::size_t k = 0; k < scn.microgrids.size(); ++k) {
        const double f = scn.effective_penetration(k);
        const int b = net.bus_index(scn.microgrids[k].attached_bus);
        effective.push_back(scale_microgrid(scn.microgrids[k], f, net.bus_load[b]));
        for (int t = 0; t < T; ++t) rigid_net.bus_load[b][t] -= f * net.bus_load[b][t];
    }
    for (auto& series : rigid_net.bus_load)
        for (double& v : series) v = std::max(0.0, v);  // guard -0 rounding

    // Bid construction, per microgrid, then per-bus aggregation. Market
    // participation is demand-side: the sampled net-load curve is clamped at
    // zero (export segments are not offered) and re-differenced so step
    // totals never exceed what the microgrid can actually absorb.
    std::vector<microgrid::BidCurve> curves;
    for (const auto& eff : effective) {
        microgrid::BidCurve c = microgrid::build_demand_bid(eff, grid_prices, opts);
        for (auto& hour : c.hours) {
            std::vector<microgrid::BidStep> clipped;
            double cum = 0.0;
            for (const auto& step : hour) {
                const double before = std::max(0.0, cum);
                cum += step.quantity;
                const double qty = std::max(0.0, cum) - before;
                if (qty > 1e-9) clipped.push_back({step.price, qty});
            }
            hour = std::move(clipped);
        }
        c.validate(eff.tie_limit);
        curves.push_back(std::move(c));
    }
    std::map<int, std::vector<std::size_t>> mg_at_bus;
    for (std::size_t k = 0; k < scn.microgrids.size(); ++k)
        mg_at_bus[scn.microgrids[k].attached_bus].push_back(k);
    std::map<int, microgrid::BidCurve> aggregated;
    for (const auto& [bus, members] : mg_at_bus) {
        std::vector<microgrid::BidCurve> local;
        for (std::size_t k : members) local.push_back(curves[k]);
        aggregated[bus] = aggregate_bids(local);
    }

    const MarketResult market = clear_market(rigid_net, aggregated, opts);
    rep.base_uc = market.uc;
    rep.award_mw = market.award;
    rep.welfare = market.welfare;
    rep.clearing_generation_cost = market.generation_cost;

    // Disaggregate and have every microgrid follow its award.
    rep.forecast_load = rigid_net.bus_load;  // cleared load filled in below
    rep.actual_load = rigid_net.bus_load;
    std::vector<std::vector<double>> mg_award(scn.microgrids.size(), std::vector<double>(T, 0.0));
    for (const auto& [bus, members] : mg_at_bus) {
        const int b = net.bus_index(bus);
        std::vector<microgrid::BidCurve> local;
        for (std::size_t k : members) local.push_back(curves[k]);
        for (int t = 0; t < T; ++t) {
            const std::vector<double> parts = disaggregate_award(local, t, market.award[b][t]);
            for (std::size_t m = 0; m < members.size(); ++m) mg_award[members[m]][t] = parts[m];
        }
    }
    for (std::size_t k = 0; k < scn.microgrids.size(); ++k) {
        const int b = net.bus_index(scn.microgrids[k].attached_bus);
        const auto sched = microgrid::schedule_with_fixed_exchange(effective[k], mg_award[k], opts);
        MicrogridOutcome out;
        out.id = scn.microgrids[k].id;
        out.bus = scn.microgrids[k].attached_bus;
        out.penetration = scn.effective_penetration(k);
        out.award = mg_award[k];
        out.sched = sched;
        for (int t = 0; t < T; ++t) {
            rep.forecast_load[b][t] += mg_award[k][t];
            rep.actual_load[b][t] += sched.exchange[t];
            rep.total_deviation_mwh += sched.deviation_up[t] + sched.deviation_down[t];
        }
        rep.microgrids.push_back(std::move(out));
    }

    rep.compute_mismatch();

    // Price-based run of the same scenario for the mismatch comparison.
    Scenario baseline = scn;
    baseline.paradigm = Paradigm::Baseline;
    rep.baseline_sum_abs_delta_mwh = run_baseline(baseline, opts).sum_abs_delta_mwh;
    return rep;
}

} // namespace mgsim::paradigms
