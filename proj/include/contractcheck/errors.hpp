#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "contractcheck/diagnostic.hpp"

namespace contractcheck {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class UnknownPlace : public Error {
public:
    explicit UnknownPlace(const std::string& place)
        : Error("unknown place '" + place + "'"), place_(place) {}
    const std::string& place() const noexcept { return place_; }

private:
    std::string place_;
};

class NotEnabled : public Error {
public:
    explicit NotEnabled(const std::string& transition)
        : Error("transition '" + transition + "' is not enabled"), transition_(transition) {}
    const std::string& transition() const noexcept { return transition_; }

private:
    std::string transition_;
};

class UnknownTransition : public Error {
public:
    explicit UnknownTransition(const std::string& transition)
        : Error("unknown transition '" + transition + "'") {}
};

/// Raised where well-formed input is a precondition; carries every finding.
class ValidationFailed : public Error {
public:
    ValidationFailed(const std::string& what, std::vector<Diagnostic> diagnostics)
        : Error(what), diagnostics_(std::move(diagnostics)) {}
    const std::vector<Diagnostic>& diagnostics() const noexcept { return diagnostics_; }

private:
    std::vector<Diagnostic> diagnostics_;
};

class StateExplosion : public Error {
public:
    StateExplosion(std::string net, std::size_t limit)
        : Error("net '" + net + "': state space exceeds max_states=" + std::to_string(limit)),
          net_(std::move(net)), count_(limit + 1) {}
    const std::string& net() const noexcept { return net_; }
    std::size_t count() const noexcept { return count_; }

private:
    std::string net_;
    std::size_t count_;
};

class PathExplosion : public Error {
public:
    PathExplosion(std::string net, std::size_t limit)
        : Error("net '" + net + "': behavior count exceeds max_paths=" + std::to_string(limit)),
          net_(std::move(net)), count_(limit + 1) {}
    const std::string& net() const noexcept { return net_; }
    std::size_t count() const noexcept { return count_; }

private:
    std::string net_;
    std::size_t count_;
};

class NoTerminalMarkings : public Error {
public:
    explicit NoTerminalMarkings(std::string net)
        : Error("net '" + net +
                "': reachability graph has no terminal markings; self-looping transitions may "
                "need loop-control places (try --lcp-auto / insert_loop_controls)"),
          net_(std::move(net)) {}
    const std::string& net() const noexcept { return net_; }

private:
    std::string net_;
};

class EmptyGroundSet : public Error {
public:
    EmptyGroundSet() : Error("ground behavior set is empty") {}
};

class EmptyCandidateSet : public Error {
public:
    EmptyCandidateSet() : Error("candidate behavior set is empty") {}
};

class ParseError : public Error {
public:
    ParseError(std::string code, std::string message, std::size_t line, std::size_t column)
        : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + code + ": " + message),
          code_(std::move(code)), line_(line), column_(column) {}
    const std::string& code() const noexcept { return code_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string code_;
    std::size_t line_;
    std::size_t column_;
};

class UnknownFixture : public Error {
public:
    explicit UnknownFixture(const std::string& name, const std::string& detail = "not in manifest")
        : Error("fixture '" + name + "': " + detail) {}
};

class EmptyContract : public Error {
public:
    EmptyContract() : Error("contract text is empty") {}
};

class EndpointError : public Error {
public:
    using Error::Error;
};

class NoCodeProduced : public Error {
public:
    explicit NoCodeProduced(int attempts)
        : Error("no fenced code block produced after " + std::to_string(attempts) + " attempt(s)") {}
};

}  // namespace contractcheck
