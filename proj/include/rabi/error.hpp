// error.hpp: Error kinds raised across the simulator.
#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rabi {

enum class ErrorKind {
    invalid_dimension,
    numeric,
    composition,
    out_of_range,
    degenerate_projection,
    invalid_order,
    leakage_guard,
    norm_drift,
    step_underflow,
    trace_drift,
    integrator_accuracy,
    trotter_regime,
    degenerate_superposition,
    bracket,
    grid,
    usage,
    validation,
    lamb_dicke,
    unknown_kind,
};

std::string_view to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

inline std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
        case ErrorKind::invalid_dimension: return "invalid-dimension";
        case ErrorKind::numeric: return "numeric";
        case ErrorKind::composition: return "composition";
        case ErrorKind::out_of_range: return "out-of-range";
        case ErrorKind::degenerate_projection: return "degenerate-projection";
        case ErrorKind::invalid_order: return "invalid-order";
        case ErrorKind::leakage_guard: return "leakage-guard";
        case ErrorKind::norm_drift: return "norm-drift";
        case ErrorKind::step_underflow: return "step-underflow";
        case ErrorKind::trace_drift: return "trace-drift";
        case ErrorKind::integrator_accuracy: return "integrator-accuracy";
        case ErrorKind::trotter_regime: return "trotter-regime";
        case ErrorKind::degenerate_superposition: return "degenerate-superposition";
        case ErrorKind::bracket: return "bracket";
        case ErrorKind::grid: return "grid";
        case ErrorKind::usage: return "usage";
        case ErrorKind::validation: return "validation";
        case ErrorKind::lamb_dicke: return "lamb-dicke";
        case ErrorKind::unknown_kind: return "unknown-kind";
    }
    return "unknown";
}

}  // namespace rabi
