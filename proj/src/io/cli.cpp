#include "mgsim/caseio.hpp"
#include "mgsim/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

namespace mgsim::io {

namespace {

struct SweepRange {
    double from = 0.0, to = 0.0, step = 0.0;
};

SweepRange parse_sweep_range(const std::string& text) {
    SweepRange r;
    char c1 = 0, c2 = 0;
    std::istringstream in(text);
    if (!(in >> r.from >> c1 >> r.to >> c2 >> r.step) || c1 != ':' || c2 != ':')
        throw ValidationError("sweep", "penetration range must be A:B:STEP");
    if (!(r.step > 0.0) || r.to < r.from)
        throw ValidationError("sweep", "need A <= B and STEP > 0");
    return r;
}

void print_outcome(const paradigms::ParadigmReport& rep) {
    std::cout << "paradigm " << paradigms::to_string(rep.paradigm) << ": max |delta| "
              << rep.max_abs_delta_mw << " MW, sum |delta| " << rep.sum_abs_delta_mwh << " MWh";
    if (rep.paradigm == paradigms::Paradigm::Redispatch)
        std::cout << (rep.redispatch_feasible ? ", redispatch feasible" : ", redispatch INFEASIBLE");
    if (rep.paradigm == paradigms::Paradigm::Iterative) {
        std::cout << ", " << rep.trace.iterations.size() << " iterations, "
                  << paradigms::to_string(rep.trace.termination);
        if (rep.trace.termination == paradigms::Termination::CycleDetected)
            std::cout << "(period " << rep.trace.cycle_period << ")";
    }
    if (rep.paradigm == paradigms::Paradigm::Dmo)
        std::cout << ", total deviation " << rep.total_deviation_mwh << " MWh";
    std::cout << "\n";
}

int run_command(const std::string& case_path, const std::string& paradigm_name,
                double penetration, int max_iter, const std::string& out_dir) {
    paradigms::Scenario scn = parse_case(case_path);
    if (!paradigm_name.empty()) scn.paradigm = paradigms::paradigm_from_string(paradigm_name);
    if (penetration >= 0.0) scn.penetration = penetration;
    if (max_iter > 0) scn.max_iter = max_iter;
    scn.validate();
    const paradigms::ParadigmReport rep = paradigms::run(scn);
    if (!out_dir.empty()) write_report(rep, scn, out_dir);
    print_outcome(rep);
    return 0;
}

int sweep_command(const std::string& case_path, const std::string& range_text,
                  const std::string& paradigm_name, const std::string& out_dir) {
    const SweepRange range = parse_sweep_range(range_text);
    paradigms::Scenario scn = parse_case(case_path);
    if (!paradigm_name.empty()) scn.paradigm = paradigms::paradigm_from_string(paradigm_name);

    std::ostringstream summary;
    summary << "penetration,max_abs_delta_mw,sum_abs_delta_mwh\n";
    for (double f = range.from; f <= range.to + 1e-9; f += range.step) {
        paradigms::Scenario point = scn;
        point.penetration = std::min(f, 1.0);
        point.validate();
        const paradigms::ParadigmReport rep = paradigms::run(point);
        char label[64];
        std::snprintf(label, sizeof label, "f_%.6f", point.penetration);
        write_report(rep, point, std::filesystem::path(out_dir) / label);
        char row[160];
        std::snprintf(row, sizeof row, "%.6f,%.6f,%.6f\n", point.penetration,
                      rep.max_abs_delta_mw, rep.sum_abs_delta_mwh);
        summary << row;
        std::cout << label << ": sum |delta| " << rep.sum_abs_delta_mwh << " MWh\n";
    }
    std::filesystem::create_directories(out_dir);
    std::ofstream out(std::filesystem::path(out_dir) / "sweep_summary.csv", std::ios::binary);
    if (!out) throw IoError("cannot write sweep_summary.csv");
    out << summary.str();
    return 0;
}

} // namespace

int cli_run(const std::vector<std::string>& args) {
    CLI::App app{"price-based microgrid scheduling and coordination simulator"};
    app.require_subcommand(1);

    std::string case_path, paradigm_name, out_dir, range_text;
    double penetration = -1.0;
    int max_iter = 0;

    CLI::App* validate = app.add_subcommand("validate", "parse and validate a case file");
    validate->add_option("case", case_path, "case file")->required();

    CLI::App* runcmd = app.add_subcommand("run", "run one coordination paradigm");
    runcmd->add_option("--case", case_path, "case file")->required();
    runcmd->add_option("--paradigm", paradigm_name,
                       "baseline|redispatch|iterative|dmo (default: from the case file)");
    runcmd->add_option("--penetration", penetration, "override the global penetration fraction");
    runcmd->add_option("--max-iter", max_iter, "override the iteration cap");
    runcmd->add_option("--out", out_dir, "report output directory");

    CLI::App* sweep = app.add_subcommand("sweep", "run a penetration sweep");
    sweep->add_option("--case", case_path, "case file")->required();
    sweep->add_option("--penetration", range_text, "range A:B:STEP")->required();
    sweep->add_option("--paradigm", paradigm_name, "paradigm to sweep");
    sweep->add_option("--out", out_dir, "output directory")->required();

    std::vector<const char*> argv;
    argv.push_back("mgsim");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (validate->parsed()) {
            const paradigms::Scenario scn = parse_case(case_path);
            std::cout << "ok: " << scn.network.buses.size() << " buses, "
                      << scn.network.branches.size() << " branches, " << scn.network.units.size()
                      << " units, " << scn.microgrids.size() << " microgrids, horizon "
                      << scn.network.horizon << "\n";
            return 0;
        }
        if (runcmd->parsed())
            return run_command(case_path, paradigm_name, penetration, max_iter, out_dir);
        if (sweep->parsed()) return sweep_command(case_path, range_text, paradigm_name, out_dir);
        return 1;
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return 2;
    } catch (const SolveFailed& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const RedispatchInfeasible& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace mgsim::io
