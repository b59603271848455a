#include "mgsim/caseio.hpp"
#include "mgsim/errors.hpp"

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <sstream>

namespace mgsim::io {

namespace {

std::string fixed6(double v) {
    if (v == 0.0) v = 0.0;  // fold -0 so reruns are byte-identical
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    out << content;
    if (!out) throw IoError("write failed for " + path.string());
}

} // namespace

void write_report(const paradigms::ParadigmReport& rep, const paradigms::Scenario& scn,
                  const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    const grid::NetworkCase& net = scn.network;
    const int T = net.horizon;

    // netload.csv
    {
        std::ostringstream csv;
        csv << "hour,bus,forecast_mw,actual_mw\n";
        for (int t = 0; t < T; ++t)
            for (std::size_t b = 0; b < net.buses.size(); ++b)
                csv << (t + 1) << "," << net.buses[b].id << "," << fixed6(rep.forecast_load[b][t])
                    << "," << fixed6(rep.actual_load[b][t]) << "\n";
        write_file(dir / "netload.csv", csv.str());
    }

    // lmp.csv: prices of the operative dispatch for the paradigm.
    {
        const grid::UcResult& priced =
            rep.paradigm == paradigms::Paradigm::Redispatch && rep.redispatch_feasible
                ? rep.redispatch
                : rep.base_uc;
        std::ostringstream csv;
        csv << "hour,bus,price\n";
        if (!priced.lmp.empty())
            for (int t = 0; t < T; ++t)
                for (std::size_t b = 0; b < net.buses.size(); ++b)
                    csv << (t + 1) << "," << net.buses[b].id << "," << fixed6(priced.lmp[b][t])
                        << "\n";
        write_file(dir / "lmp.csv", csv.str());
    }

    // dispatch.csv
    {
        const grid::UcResult& op =
            rep.paradigm == paradigms::Paradigm::Redispatch && rep.redispatch_feasible
                ? rep.redispatch
                : rep.base_uc;
        std::ostringstream csv;
        csv << "hour,unit,committed,mw\n";
        if (!op.dispatch.empty())
            for (int t = 0; t < T; ++t)
                for (std::size_t u = 0; u < net.units.size(); ++u)
                    csv << (t + 1) << "," << net.units[u].name << ","
                        << int(op.commitment[u][t]) << "," << fixed6(op.dispatch[u][t]) << "\n";
        write_file(dir / "dispatch.csv", csv.str());
    }

    // trace.csv
    {
        std::ostringstream csv;
        csv << "iteration,hour,total_load_mw,avg_lmp\n";
        for (std::size_t k = 0; k < rep.trace.iterations.size(); ++k) {
            const auto& entry = rep.trace.iterations[k];
            for (int t = 0; t < T; ++t) {
                double total = 0.0;
                for (const auto& series : entry.bus_load) total += series[t];
                csv << (k + 1) << "," << (t + 1) << "," << fixed6(total) << ","
                    << fixed6(entry.avg_lmp[t]) << "\n";
            }
        }
        write_file(dir / "trace.csv", csv.str());
    }

    // awards.csv
    {
        std::ostringstream csv;
        csv << "hour,bus,microgrid,award_mw,deviation_mw\n";
        if (rep.paradigm == paradigms::Paradigm::Dmo)
            for (int t = 0; t < T; ++t)
                for (const auto& out : rep.microgrids) {
                    const double dev = out.sched.deviation_up.empty()
                                           ? 0.0
                                           : out.sched.deviation_up[t] - out.sched.deviation_down[t];
                    csv << (t + 1) << "," << out.bus << "," << out.id << ","
                        << fixed6(out.award[t]) << "," << fixed6(dev) << "\n";
                }
        write_file(dir / "awards.csv", csv.str());
    }

    // summary.txt
    {
        std::ostringstream s;
        s << "paradigm: " << paradigms::to_string(rep.paradigm) << "\n";
        s << "penetration: " << fixed6(scn.penetration) << "\n";
        s << "buses: " << net.buses.size() << "\n";
        s << "units: " << net.units.size() << "\n";
        s << "microgrids: " << scn.microgrids.size() << "\n";
        s << "horizon_hours: " << T << "\n";
        s << "uc_total_cost: " << fixed6(rep.base_uc.total_cost) << "\n";
        s << "max_abs_delta_mw: " << fixed6(rep.max_abs_delta_mw) << "\n";
        s << "sum_abs_delta_mwh: " << fixed6(rep.sum_abs_delta_mwh) << "\n";
        if (rep.paradigm == paradigms::Paradigm::Redispatch) {
            s << "redispatch_feasible: " << (rep.redispatch_feasible ? "yes" : "no") << "\n";
            if (rep.redispatch_feasible) {
                s << "redispatch_cost: " << fixed6(rep.redispatch.total_cost) << "\n";
                s << "max_redispatch_residual_mw: " << fixed6(rep.max_redispatch_residual_mw)
                  << "\n";
            }
        }
        if (rep.paradigm == paradigms::Paradigm::Iterative) {
            s << "iterations: " << rep.trace.iterations.size() << "\n";
            s << "termination: " << paradigms::to_string(rep.trace.termination);
            if (rep.trace.termination == paradigms::Termination::CycleDetected)
                s << " period " << rep.trace.cycle_period;
            s << "\n";
        }
        if (rep.paradigm == paradigms::Paradigm::Dmo) {
            s << "welfare: " << fixed6(rep.welfare) << "\n";
            s << "clearing_generation_cost: " << fixed6(rep.clearing_generation_cost) << "\n";
            s << "total_deviation_mwh: " << fixed6(rep.total_deviation_mwh) << "\n";
            s << "baseline_sum_abs_delta_mwh: " << fixed6(rep.baseline_sum_abs_delta_mwh) << "\n";
        }
        write_file(dir / "summary.txt", s.str());
    }
}

} // namespace mgsim::io
