#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sqz {

/// Base class for all library errors.
struct error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct invalid_dimension_error : error {
    using error::error;
};

/// A requested state or operator cannot be represented at the given
/// truncation dimension (predicted occupation too large).
struct truncation_infeasible_error : error {
    using error::error;
};

/// Runtime tail-mass guard tripped during integration.
struct truncation_error : error {
    using error::error;
};

struct dimension_mismatch_error : error {
    using error::error;
};

struct invalid_bath_error : error {
    using error::error;
};

struct no_steady_state_error : error {
    using error::error;
};

/// Schedule / cycle validation failure.
struct validation_error : error {
    using error::error;
};

/// Quadrature or iteration failed to reach its tolerance.
struct convergence_error : error {
    using error::error;
};

/// NaN / divergence detected in the integrator.
struct divergence_error : error {
    using error::error;
};

/// Config file schema violation.
struct config_error : error {
    using error::error;
};

struct io_error : error {
    using error::error;
};

/// Coarse grid for the nbar optimizer was not unimodal; carries the grid.
struct ambiguous_bracket_error : error {
    ambiguous_bracket_error(const std::string& msg,
                            std::vector<std::pair<double, double>> g)
        : error(msg), grid(std::move(g)) {}
    std::vector<std::pair<double, double>> grid;
};

}  // namespace sqz
