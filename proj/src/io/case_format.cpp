#include "mgsim/caseio.hpp"
#include "mgsim/errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace mgsim::io {

namespace {

struct Line {
    int number;
    std::vector<std::string> tokens;
};

struct Section {
    std::string name;   // "scenario", "buses", ..., "microgrid"
    std::string label;  // microgrid id
    int line;
    std::vector<Line> lines;
};

std::vector<Section> split_sections(const std::string& text) {
    std::vector<Section> sections;
    std::istringstream in(text);
    std::string raw;
    int number = 0;
    while (std::getline(in, raw)) {
        ++number;
        const std::size_t hash = raw.find('#');
        if (hash != std::string::npos) raw.erase(hash);
        std::istringstream ls(raw);
        std::vector<std::string> tokens;
        std::string tok;
        while (ls >> tok) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (tokens[0].front() == '[') {
            std::string joined = tokens[0];
            for (std::size_t i = 1; i < tokens.size(); ++i) joined += " " + tokens[i];
            if (joined.back() != ']') throw ParseError(number, "unterminated section header");
            joined = joined.substr(1, joined.size() - 2);
            std::istringstream hs(joined);
            std::string name, label;
            hs >> name >> label;
            sections.push_back({name, label, number, {}});
            continue;
        }
        if (sections.empty()) throw ParseError(number, "data before any [section]");
        sections.back().lines.push_back({number, std::move(tokens)});
    }
    return sections;
}

double parse_double(const Line& ln, std::size_t idx) {
    if (idx >= ln.tokens.size()) throw ParseError(ln.number, "missing column");
    const std::string& s = ln.tokens[idx];
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw ParseError(ln.number, "bad number '" + s + "'");
    return v;
}

int parse_int(const Line& ln, std::size_t idx) {
    const double v = parse_double(ln, idx);
    if (v != std::floor(v)) throw ParseError(ln.number, "expected integer");
    return static_cast<int>(v);
}

void expect_columns(const Line& ln, std::size_t n, const char* what) {
    if (ln.tokens.size() != n)
        throw ParseError(ln.number, std::string(what) + ": expected " + std::to_string(n) +
                                        " columns, got " + std::to_string(ln.tokens.size()));
}

std::vector<double> parse_series(const Line& ln, std::size_t from, int horizon) {
    if (ln.tokens.size() != from + static_cast<std::size_t>(horizon))
        throw ParseError(ln.number, "expected " + std::to_string(horizon) + " hourly values");
    std::vector<double> out(horizon);
    for (int t = 0; t < horizon; ++t) out[t] = parse_double(ln, from + t);
    return out;
}

std::string fmt(double v) {
    if (v == 0.0) v = 0.0;  // fold -0
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

paradigms::Scenario parse_case_text(const std::string& text) {
    const std::vector<Section> sections = split_sections(text);
    paradigms::Scenario scn;
    bool saw_buses = false;

    // Scenario settings first: later sections need the horizon.
    for (const Section& sec : sections) {
        if (sec.name != "scenario") continue;
        for (const Line& ln : sec.lines) {
            const std::string& key = ln.tokens[0];
            if (key == "horizon") scn.network.horizon = parse_int(ln, 1);
            else if (key == "penetration") scn.penetration = parse_double(ln, 1);
            else if (key == "paradigm") scn.paradigm = paradigms::paradigm_from_string(ln.tokens.at(1));
            else if (key == "max_iter") scn.max_iter = parse_int(ln, 1);
            else if (key == "load_tol") scn.load_tol = parse_double(ln, 1);
            else if (key == "price_grid") {
                scn.price_grid.clear();
                for (std::size_t i = 1; i < ln.tokens.size(); ++i)
                    scn.price_grid.push_back(parse_double(ln, i));
            } else {
                throw ParseError(ln.number, "unknown scenario key '" + key + "'");
            }
        }
    }
    const int T = scn.network.horizon;
    if (T <= 0) throw ParseError(1, "horizon must be positive");

    for (const Section& sec : sections) {
        if (sec.name == "scenario") continue;
        if (sec.name == "buses") {
            saw_buses = true;
            for (const Line& ln : sec.lines) {
                expect_columns(ln, 2, "bus");
                scn.network.buses.push_back({parse_int(ln, 0), parse_int(ln, 1) != 0});
            }
        } else if (sec.name == "branches") {
            for (const Line& ln : sec.lines) {
                expect_columns(ln, 4, "branch");
                scn.network.branches.push_back(
                    {parse_int(ln, 0), parse_int(ln, 1), parse_double(ln, 2), parse_double(ln, 3)});
            }
        } else if (sec.name == "units") {
            for (const Line& ln : sec.lines) {
                expect_columns(ln, 16, "unit");
                grid::ThermalUnit u;
                u.name = ln.tokens[0];
                u.bus = parse_int(ln, 1);
                u.p_min = parse_double(ln, 2);
                u.p_max = parse_double(ln, 3);
                u.marginal_cost = parse_double(ln, 4);
                u.no_load_cost = parse_double(ln, 5);
                u.startup_cost = parse_double(ln, 6);
                u.shutdown_cost = parse_double(ln, 7);
                u.ramp_up = parse_double(ln, 8);
                u.ramp_down = parse_double(ln, 9);
                u.min_up = parse_int(ln, 10);
                u.min_down = parse_int(ln, 11);
                u.initial_on = parse_int(ln, 12) != 0;
                u.initial_power = parse_double(ln, 13);
                u.initial_up_time = parse_int(ln, 14);
                u.initial_down_time = parse_int(ln, 15);
                scn.network.units.push_back(std::move(u));
            }
        } else if (sec.name == "loads") {
            // handled below, after buses exist
        } else if (sec.name == "microgrid") {
            if (sec.label.empty()) throw ParseError(sec.line, "[microgrid] needs an id");
            microgrid::MicrogridCase mg;
            mg.id = sec.label;
            mg.horizon = T;
            double override_f = -1.0;
            for (const Line& ln : sec.lines) {
                const std::string& key = ln.tokens[0];
                if (key == "bus") mg.attached_bus = parse_int(ln, 1);
                else if (key == "penetration") override_f = parse_double(ln, 1);
                else if (key == "voll") mg.voll = parse_double(ln, 1);
                else if (key == "tie_limit") mg.tie_limit = parse_double(ln, 1);
                else if (key == "violation_penalty") mg.violation_penalty = parse_double(ln, 1);
                else if (key == "dispatchable") {
                    expect_columns(ln, 15, "dispatchable");
                    microgrid::DispatchableDer d;
                    d.name = ln.tokens[1];
                    d.p_min = parse_double(ln, 2);
                    d.p_max = parse_double(ln, 3);
                    d.marginal_cost = parse_double(ln, 4);
                    d.no_load_cost = parse_double(ln, 5);
                    d.startup_cost = parse_double(ln, 6);
                    d.shutdown_cost = parse_double(ln, 7);
                    d.ramp_up = parse_double(ln, 8);
                    d.ramp_down = parse_double(ln, 9);
                    d.min_up = parse_int(ln, 10);
                    d.min_down = parse_int(ln, 11);
                    d.initial_on = parse_int(ln, 12) != 0;
                    d.initial_power = parse_double(ln, 13);
                    if (d.initial_on) d.initial_up_time = parse_int(ln, 14);
                    else d.initial_down_time = parse_int(ln, 14);
                    mg.dispatchables.push_back(std::move(d));
                } else if (key == "storage") {
                    expect_columns(ln, 12, "storage");
                    microgrid::StorageDer s;
                    s.name = ln.tokens[1];
                    s.charge_max = parse_double(ln, 2);
                    s.discharge_max = parse_double(ln, 3);
                    s.energy_capacity = parse_double(ln, 4);
                    s.soc_min = parse_double(ln, 5);
                    s.soc_max = parse_double(ln, 6);
                    s.charge_efficiency = parse_double(ln, 7);
                    s.discharge_efficiency = parse_double(ln, 8);
                    s.soc_initial = parse_double(ln, 9);
                    s.require_terminal_soc = parse_int(ln, 10) != 0;
                    s.terminal_soc = parse_double(ln, 11);
                    mg.storages.push_back(std::move(s));
                } else if (key == "adjustable") {
                    expect_columns(ln, 10, "adjustable");
                    microgrid::AdjustableLoad a;
                    a.name = ln.tokens[1];
                    a.p_min = parse_double(ln, 2);
                    a.p_max = parse_double(ln, 3);
                    a.required_energy = parse_double(ln, 4);
                    a.window_start = parse_int(ln, 5) - 1;  // file hours are 1-based
                    a.window_end = parse_int(ln, 6) - 1;
                    a.min_operating_time = parse_int(ln, 7);
                    a.pickup_rate = parse_double(ln, 8);
                    a.drop_rate = parse_double(ln, 9);
                    mg.adjustable_loads.push_back(std::move(a));
                } else if (key == "nondispatch") {
                    mg.nondispatchable = parse_series(ln, 1, T);
                } else if (key == "load") {
                    mg.fixed_load.push_back(parse_series(ln, 1, T));
                } else {
                    throw ParseError(ln.number, "unknown microgrid key '" + key + "'");
                }
            }
            scn.microgrids.push_back(std::move(mg));
            scn.penetration_override.push_back(override_f);
        } else {
            throw ParseError(sec.line, "unknown section [" + sec.name + "]");
        }
    }
    if (!saw_buses) throw ParseError(1, "missing [buses] section");

    scn.network.bus_load.assign(scn.network.buses.size(), std::vector<double>(T, 0.0));
    for (const Section& sec : sections) {
        if (sec.name != "loads") continue;
        std::map<int, bool> seen;
        for (const Line& ln : sec.lines) {
            const int bus = parse_int(ln, 0);
            const int b = scn.network.bus_index(bus);
            if (b < 0) throw ParseError(ln.number, "load at unknown bus " + std::to_string(bus));
            if (seen[bus]) throw ParseError(ln.number, "duplicate load row for bus " + std::to_string(bus));
            seen[bus] = true;
            scn.network.bus_load[b] = parse_series(ln, 1, T);
        }
    }

    scn.validate();
    for (const auto& mg : scn.microgrids) mg.validate();
    return scn;
}

paradigms::Scenario parse_case(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_case_text(buf.str());
}

std::string serialize_case(const paradigms::Scenario& scn) {
    std::ostringstream out;
    out << "[scenario]\n";
    out << "horizon " << scn.network.horizon << "\n";
    out << "penetration " << fmt(scn.penetration) << "\n";
    out << "paradigm " << paradigms::to_string(scn.paradigm) << "\n";
    out << "max_iter " << scn.max_iter << "\n";
    out << "load_tol " << fmt(scn.load_tol) << "\n";
    if (!scn.price_grid.empty()) {
        out << "price_grid";
        for (double v : scn.price_grid) out << " " << fmt(v);
        out << "\n";
    }
    out << "\n[buses]\n";
    for (const auto& b : scn.network.buses)
        out << b.id << " " << (b.is_reference ? 1 : 0) << "\n";
    out << "\n[branches]\n";
    for (const auto& br : scn.network.branches)
        out << br.from_bus << " " << br.to_bus << " " << fmt(br.reactance) << " "
            << fmt(br.flow_limit) << "\n";
    out << "\n[units]\n";
    for (const auto& u : scn.network.units) {
        out << u.name << " " << u.bus << " " << fmt(u.p_min) << " " << fmt(u.p_max) << " "
            << fmt(u.marginal_cost) << " " << fmt(u.no_load_cost) << " " << fmt(u.startup_cost)
            << " " << fmt(u.shutdown_cost) << " " << fmt(u.ramp_up) << " " << fmt(u.ramp_down)
            << " " << u.min_up << " " << u.min_down << " " << (u.initial_on ? 1 : 0) << " "
            << fmt(u.initial_power) << " " << u.initial_up_time << " " << u.initial_down_time
            << "\n";
    }
    out << "\n[loads]\n";
    for (std::size_t b = 0; b < scn.network.buses.size(); ++b) {
        bool all_zero = true;
        for (double v : scn.network.bus_load[b]) all_zero = all_zero && v == 0.0;
        if (all_zero) continue;
        out << scn.network.buses[b].id;
        for (double v : scn.network.bus_load[b]) out << " " << fmt(v);
        out << "\n";
    }
    for (std::size_t k = 0; k < scn.microgrids.size(); ++k) {
        const auto& mg = scn.microgrids[k];
        out << "\n[microgrid " << mg.id << "]\n";
        out << "bus " << mg.attached_bus << "\n";
        if (k < scn.penetration_override.size() && scn.penetration_override[k] >= 0.0)
            out << "penetration " << fmt(scn.penetration_override[k]) << "\n";
        out << "voll " << fmt(mg.voll) << "\n";
        out << "tie_limit " << fmt(mg.tie_limit) << "\n";
        out << "violation_penalty " << fmt(mg.violation_penalty) << "\n";
        for (const auto& d : mg.dispatchables) {
            out << "dispatchable " << d.name << " " << fmt(d.p_min) << " " << fmt(d.p_max) << " "
                << fmt(d.marginal_cost) << " " << fmt(d.no_load_cost) << " " << fmt(d.startup_cost)
                << " " << fmt(d.shutdown_cost) << " " << fmt(d.ramp_up) << " " << fmt(d.ramp_down)
                << " " << d.min_up << " " << d.min_down << " " << (d.initial_on ? 1 : 0) << " "
                << fmt(d.initial_power) << " "
                << (d.initial_on ? d.initial_up_time : d.initial_down_time) << "\n";
        }
        for (const auto& s : mg.storages) {
            out << "storage " << s.name << " " << fmt(s.charge_max) << " " << fmt(s.discharge_max)
                << " " << fmt(s.energy_capacity) << " " << fmt(s.soc_min) << " " << fmt(s.soc_max)
                << " " << fmt(s.charge_efficiency) << " " << fmt(s.discharge_efficiency) << " "
                << fmt(s.soc_initial) << " " << (s.require_terminal_soc ? 1 : 0) << " "
                << fmt(s.terminal_soc) << "\n";
        }
        for (const auto& a : mg.adjustable_loads) {
            out << "adjustable " << a.name << " " << fmt(a.p_min) << " " << fmt(a.p_max) << " "
                << fmt(a.required_energy) << " " << (a.window_start + 1) << " "
                << (a.window_end + 1) << " " << a.min_operating_time << " " << fmt(a.pickup_rate)
                << " " << fmt(a.drop_rate) << "\n";
        }
        if (!mg.nondispatchable.empty()) {
            out << "nondispatch";
            for (double v : mg.nondispatchable) out << " " << fmt(v);
            out << "\n";
        }
        for (const auto& row : mg.fixed_load) {
            out << "load";
            for (double v : row) out << " " << fmt(v);
            out << "\n";
        }
    }
    return out.str();
}

} // namespace mgsim::io
