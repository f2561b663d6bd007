#pragma once

#include <stdexcept>
#include <string>

namespace samdisc {

// Grid too coarse to resolve the polynomial/norm being computed.
struct under_resolved_grid : std::runtime_error {
    explicit under_resolved_grid(const std::string& what) : std::runtime_error(what) {}
};

// Random draw collapsed to (numerically) zero and cannot be normalized.
struct degenerate_draw : std::runtime_error {
    explicit degenerate_draw(const std::string& what) : std::runtime_error(what) {}
};

// Input function does not satisfy a required normalization.
struct normalization_error : std::runtime_error {
    explicit normalization_error(const std::string& what) : std::runtime_error(what) {}
};

// Requested resolution is finer than the finite ball surrogate can support.
struct surrogate_too_coarse : std::runtime_error {
    explicit surrogate_too_coarse(const std::string& what) : std::runtime_error(what) {}
};

// A modeling constraint (e.g. an L1/sup bound on a sampled family) is violated.
struct constraint_violation : std::runtime_error {
    explicit constraint_violation(const std::string& what) : std::runtime_error(what) {}
};

// Malformed or unreadable on-disk data.
struct io_error : std::runtime_error {
    explicit io_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace samdisc
