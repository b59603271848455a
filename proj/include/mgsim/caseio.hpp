#pragma once

#include "mgsim/paradigms.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace mgsim::io {

/// Parses a sectioned plain-text case file into a fully validated Scenario.
/// Sections: [scenario], [buses], [branches], [units], [loads],
/// [microgrid <id>]; whitespace-separated columns, '#' comments. Throws
/// ParseError (with a line number) or ValidationError.
paradigms::Scenario parse_case(const std::filesystem::path& path);
paradigms::Scenario parse_case_text(const std::string& text);

/// Canonical text form; parse(serialize(scn)) reproduces scn.
std::string serialize_case(const paradigms::Scenario& scn);

/// Writes summary.txt plus netload/lmp/dispatch/trace/awards CSVs. Numeric
/// cells use 6 decimal places and rows are fully sorted, so identical reports
/// serialize byte-identically. Throws IoError on filesystem failures.
void write_report(const paradigms::ParadigmReport& report, const paradigms::Scenario& scn,
                  const std::filesystem::path& dir);

/// The command-line entry point (exposed for tests). Exit codes: 0 success,
/// 1 usage error, 2 parse/validation error, 3 solver failure.
int cli_run(const std::vector<std::string>& args);

} // namespace mgsim::io
