#pragma once

// Seeded random microgrid cases with import headroom so every case is
// feasible; shared by the unit tests and the acceptance invariant suite.

#include "mgsim/microgrid.hpp"

#include <algorithm>
#include <random>
#include <vector>

namespace testsupport {

inline mgsim::microgrid::MicrogridCase random_microgrid(unsigned seed) {
    using namespace mgsim::microgrid;
    std::mt19937 rng(seed);
    auto urand = [&](double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(rng);
    };
    auto irand = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };

    MicrogridCase mg;
    mg.id = "rand" + std::to_string(seed);
    mg.horizon = irand(3, 6);
    mg.voll = 10000.0;
    mg.violation_penalty = 1000.0;

    std::vector<double> load(mg.horizon);
    for (double& v : load) v = urand(0.0, 15.0);
    mg.fixed_load.push_back(load);

    if (irand(0, 3) > 0) {
        mg.nondispatchable.resize(mg.horizon);
        for (int t = 0; t < mg.horizon; ++t)
            mg.nondispatchable[t] = urand(-0.5, 0.5) * load[t];
    }

    const int n_disp = irand(0, 2);
    for (int i = 0; i < n_disp; ++i) {
        DispatchableDer der;
        der.name = "dg" + std::to_string(i);
        der.p_min = irand(0, 1) ? 0.0 : urand(0.5, 2.0);
        der.p_max = der.p_min + urand(2.0, 12.0);
        der.marginal_cost = urand(10.0, 60.0);
        der.no_load_cost = irand(0, 1) ? 0.0 : urand(0.0, 5.0);
        der.startup_cost = irand(0, 1) ? 0.0 : urand(0.0, 20.0);
        der.ramp_up = der.ramp_down = urand(0.5, 1.0) * der.p_max;
        der.min_up = irand(1, 2);
        der.min_down = irand(1, 2);
        der.initial_on = irand(0, 1) == 1;
        if (der.initial_on) {
            der.initial_power = std::min(der.p_max, std::max(der.p_min, urand(0.0, der.p_max)));
            der.initial_up_time = irand(1, 4);
        } else {
            der.initial_down_time = irand(1, 4);
        }
        mg.dispatchables.push_back(der);
    }

    if (irand(0, 1) == 1) {
        StorageDer st;
        st.name = "es";
        st.charge_max = urand(1.0, 5.0);
        st.discharge_max = urand(1.0, 5.0);
        st.energy_capacity = urand(4.0, 12.0);
        st.soc_max = st.energy_capacity * urand(0.8, 1.0);
        st.soc_min = st.soc_max * urand(0.0, 0.3);
        st.soc_initial = urand(st.soc_min, st.soc_max);
        st.charge_efficiency = urand(0.85, 1.0);
        st.discharge_efficiency = urand(0.85, 1.0);
        st.require_terminal_soc = irand(0, 1) == 1;
        st.terminal_soc = st.soc_initial;
        mg.storages.push_back(st);
    }

    if (irand(0, 2) == 0) {
        AdjustableLoad al;
        al.name = "flex";
        al.window_start = irand(0, mg.horizon - 2);
        al.window_end = irand(al.window_start + 1, mg.horizon - 1);
        const int width = al.window_end - al.window_start + 1;
        al.p_min = urand(0.0, 1.0);
        al.p_max = al.p_min + urand(1.0, 4.0);
        al.min_operating_time = irand(1, std::min(2, width));
        const double emin = al.p_min * al.min_operating_time;
        const double emax = al.p_max * width;
        al.required_energy = urand(emin + 0.1 * (emax - emin), 0.9 * emax);
        al.pickup_rate = al.p_max;
        al.drop_rate = al.p_max;
        mg.adjustable_loads.push_back(al);
    }

    // Import headroom keeps every draw feasible even at adverse prices.
    double need = 0.0;
    for (int t = 0; t < mg.horizon; ++t) {
        double worst = load[t];
        if (!mg.nondispatchable.empty()) worst += std::max(0.0, mg.nondispatchable[t]);
        need = std::max(need, worst);
    }
    for (const auto& st : mg.storages) need += st.charge_max;
    for (const auto& al : mg.adjustable_loads) need += al.p_max;
    mg.tie_limit = need * urand(1.2, 2.0) + 1.0;
    return mg;
}

inline std::vector<double> random_price_series(unsigned seed, int horizon, double lo = 5.0,
                                               double hi = 80.0) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(lo, hi);
    std::vector<double> p(horizon);
    for (double& v : p) v = dist(rng);
    return p;
}

} // namespace testsupport
