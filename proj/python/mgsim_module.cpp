#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "mgsim/caseio.hpp"
#include "mgsim/errors.hpp"
#include "mgsim/microgrid.hpp"
#include "mgsim/milp.hpp"
#include "mgsim/paradigms.hpp"

namespace py = pybind11;
using namespace mgsim;

namespace {

milp::Relation relation_from(const std::string& s) {
    if (s == "<=") return milp::Relation::LessEqual;
    if (s == "=" || s == "==") return milp::Relation::Equal;
    if (s == ">=") return milp::Relation::GreaterEqual;
    throw ValidationError("relation", "expected one of <=, =, >=");
}

} // namespace

PYBIND11_MODULE(mgsim, m) {
    m.doc() = "price-based microgrid scheduling and coordination simulator";

    py::register_exception<Error>(m, "MgsimError");

    py::class_<milp::SolverOptions>(m, "SolverOptions")
        .def(py::init<>())
        .def_readwrite("feas_tol", &milp::SolverOptions::feas_tol)
        .def_readwrite("dual_tol", &milp::SolverOptions::dual_tol)
        .def_readwrite("int_tol", &milp::SolverOptions::int_tol)
        .def_readwrite("node_limit", &milp::SolverOptions::node_limit)
        .def_readwrite("pivot_limit", &milp::SolverOptions::pivot_limit);

    py::class_<milp::LinearProgram>(m, "LinearProgram")
        .def(py::init<>())
        .def("add_variable", &milp::LinearProgram::add_variable, py::arg("lower"),
             py::arg("upper"), py::arg("cost"), py::arg("binary") = false)
        .def("add_constraint",
             [](milp::LinearProgram& lp, const std::vector<double>& coeffs,
                const std::string& rel, double rhs) {
                 return lp.add_constraint({coeffs, relation_from(rel), rhs});
             },
             py::arg("coeffs"), py::arg("relation"), py::arg("rhs"))
        .def_property_readonly("num_vars", &milp::LinearProgram::num_vars)
        .def("dump", &milp::LinearProgram::dump);

    py::class_<milp::LpSolution>(m, "LpSolution")
        .def_property_readonly("status",
                               [](const milp::LpSolution& s) { return milp::to_string(s.status); })
        .def_readonly("primal", &milp::LpSolution::primal)
        .def_readonly("duals", &milp::LpSolution::duals)
        .def_readonly("objective", &milp::LpSolution::objective);

    py::class_<milp::MilpSolution>(m, "MilpSolution")
        .def_property_readonly(
            "status", [](const milp::MilpSolution& s) { return milp::to_string(s.status); })
        .def_readonly("primal", &milp::MilpSolution::primal)
        .def_readonly("objective", &milp::MilpSolution::objective)
        .def_readonly("node_count", &milp::MilpSolution::node_count)
        .def_readonly("incumbent_bound_gap", &milp::MilpSolution::incumbent_bound_gap);

    m.def("solve_lp", &milp::solve_lp, py::arg("lp"),
          py::arg("options") = milp::SolverOptions{});
    m.def("solve_milp", &milp::solve_milp, py::arg("lp"),
          py::arg("options") = milp::SolverOptions{});
    m.def("fix_binaries", &milp::fix_binaries, py::arg("lp"), py::arg("assignment"));

    py::class_<microgrid::MicrogridSchedule>(m, "MicrogridSchedule")
        .def_readonly("exchange", &microgrid::MicrogridSchedule::exchange)
        .def_readonly("curtailment", &microgrid::MicrogridSchedule::curtailment)
        .def_readonly("total_cost", &microgrid::MicrogridSchedule::total_cost);

    py::class_<paradigms::Scenario>(m, "Scenario")
        .def_readwrite("penetration", &paradigms::Scenario::penetration)
        .def_readwrite("max_iter", &paradigms::Scenario::max_iter)
        .def_property(
            "paradigm",
            [](const paradigms::Scenario& s) { return paradigms::to_string(s.paradigm); },
            [](paradigms::Scenario& s, const std::string& name) {
                s.paradigm = paradigms::paradigm_from_string(name);
            })
        .def_property_readonly("horizon",
                               [](const paradigms::Scenario& s) { return s.network.horizon; })
        .def_property_readonly(
            "num_buses", [](const paradigms::Scenario& s) { return s.network.buses.size(); })
        .def_property_readonly(
            "num_units", [](const paradigms::Scenario& s) { return s.network.units.size(); })
        .def_property_readonly(
            "num_microgrids",
            [](const paradigms::Scenario& s) { return s.microgrids.size(); });

    py::class_<paradigms::ParadigmReport>(m, "ParadigmReport")
        .def_property_readonly(
            "paradigm",
            [](const paradigms::ParadigmReport& r) { return paradigms::to_string(r.paradigm); })
        .def_readonly("forecast_load", &paradigms::ParadigmReport::forecast_load)
        .def_readonly("actual_load", &paradigms::ParadigmReport::actual_load)
        .def_readonly("max_abs_delta_mw", &paradigms::ParadigmReport::max_abs_delta_mw)
        .def_readonly("sum_abs_delta_mwh", &paradigms::ParadigmReport::sum_abs_delta_mwh)
        .def_readonly("hourly_delta_mw", &paradigms::ParadigmReport::hourly_delta_mw)
        .def_readonly("redispatch_feasible", &paradigms::ParadigmReport::redispatch_feasible)
        .def_readonly("welfare", &paradigms::ParadigmReport::welfare)
        .def_readonly("total_deviation_mwh", &paradigms::ParadigmReport::total_deviation_mwh)
        .def_readonly("award_mw", &paradigms::ParadigmReport::award_mw)
        .def_property_readonly("iterations",
                               [](const paradigms::ParadigmReport& r) {
                                   return r.trace.iterations.size();
                               })
        .def_property_readonly("termination",
                               [](const paradigms::ParadigmReport& r) {
                                   return paradigms::to_string(r.trace.termination);
                               })
        .def_property_readonly("cycle_period", [](const paradigms::ParadigmReport& r) {
            return r.trace.cycle_period;
        });

    m.def("parse_case",
          [](const std::string& path) { return io::parse_case(path); }, py::arg("path"));
    m.def("parse_case_text", &io::parse_case_text, py::arg("text"));
    m.def("serialize_case", &io::serialize_case, py::arg("scenario"));
    m.def("run", &paradigms::run, py::arg("scenario"),
          py::arg("options") = milp::SolverOptions{});
    m.def("write_report",
          [](const paradigms::ParadigmReport& rep, const paradigms::Scenario& scn,
             const std::string& dir) { io::write_report(rep, scn, dir); },
          py::arg("report"), py::arg("scenario"), py::arg("directory"));
}
