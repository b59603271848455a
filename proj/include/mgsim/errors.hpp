#pragma once

#include <stdexcept>
#include <string>

namespace mgsim {

// Base class for all errors raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// A case, problem, or scenario failed structural validation.
class ValidationError : public Error {
public:
    ValidationError(std::string entity, std::string rule)
        : Error(entity + ": " + rule), entity_(std::move(entity)), rule_(std::move(rule)) {}
    const std::string& entity() const { return entity_; }
    const std::string& rule() const { return rule_; }

private:
    std::string entity_;
    std::string rule_;
};

// Malformed case file; carries the 1-based line number.
class ParseError : public Error {
public:
    ParseError(int line, const std::string& message)
        : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
    int line() const { return line_; }

private:
    int line_;
};

// fix_binaries: assignment does not match the binary variable set.
class AssignmentMismatch : public Error {
public:
    explicit AssignmentMismatch(const std::string& what) : Error(what) {}
};

// No feasible dispatch exists under a fixed commitment.
class RedispatchInfeasible : public Error {
public:
    explicit RedispatchInfeasible(const std::string& what) : Error(what) {}
};

// An award violates the tie-line limit of the microgrid it targets.
class AwardExceedsTie : public Error {
public:
    explicit AwardExceedsTie(const std::string& what) : Error(what) {}
};

// A bus award exceeds the total quantity of the bids behind it.
class AwardExceedsBids : public Error {
public:
    explicit AwardExceedsBids(const std::string& what) : Error(what) {}
};

// A solve ended in a state the caller cannot use (infeasible, limit hit).
class SolveFailed : public Error {
public:
    explicit SolveFailed(const std::string& what) : Error(what) {}
};

// Filesystem failure while writing a report bundle.
class IoError : public Error {
public:
    explicit IoError(const std::string& what) : Error(what) {}
};

} // namespace mgsim
