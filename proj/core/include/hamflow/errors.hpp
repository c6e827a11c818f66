#pragma once

#include <stdexcept>
#include <string>

namespace hamflow {

/// Failure categories. Each maps to a documented CLI exit code:
/// config/io -> 1, flow failures -> 2, inadmissible extension -> 3,
/// mass inequality violation -> 4.
enum class ErrorKind {
    config,
    io,
    invalid_metric,
    inconsistent_source,
    domain,
    step_positivity,
    flow_divergence,
    cannot_extrapolate,
    inadmissible,
    blow_up,
    no_limit,
    horizon,
    inequality_violation,
};

class Error : public std::runtime_error {
  public:
    Error(ErrorKind kind, const std::string& msg)
        : std::runtime_error(msg), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

  private:
    ErrorKind kind_;
};

inline int cli_exit_code(ErrorKind k) {
    switch (k) {
        case ErrorKind::step_positivity:
        case ErrorKind::flow_divergence:
        case ErrorKind::cannot_extrapolate:
        case ErrorKind::no_limit:
            return 2;
        case ErrorKind::inadmissible:
        case ErrorKind::blow_up:
            return 3;
        case ErrorKind::inequality_violation:
            return 4;
        default:
            return 1;
    }
}

[[noreturn]] inline void throw_error(ErrorKind k, const std::string& msg) {
    throw Error(k, msg);
}

}  // namespace hamflow
