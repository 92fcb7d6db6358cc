#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace lgde {

// Named failure categories. The CLI prints the category name on its
// diagnostic line, so these strings are part of the command-line surface.
enum class ErrorKind {
    io,
    parse,
    dimension_mismatch,
    zero_norm,
    duplicate_token,
    duplicate_vector,
    degenerate_space,
    invalid_argument,
    unresolved_seeds,
    zero_kth_distance,
    disconnected_members,
    component_too_large,
    duplicate_id,
    invalid_label,
    missing_label_class,
    empty_input,
    no_admissible_point,
};

constexpr std::string_view to_string(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::io: return "io error";
    case ErrorKind::parse: return "malformed input";
    case ErrorKind::dimension_mismatch: return "dimension mismatch";
    case ErrorKind::zero_norm: return "zero-norm vector";
    case ErrorKind::duplicate_token: return "duplicate token";
    case ErrorKind::duplicate_vector: return "duplicate vector";
    case ErrorKind::degenerate_space: return "degenerate space";
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::unresolved_seeds: return "no seeds resolved";
    case ErrorKind::zero_kth_distance: return "zero k-th neighbour distance";
    case ErrorKind::disconnected_members: return "disconnected members";
    case ErrorKind::component_too_large: return "component too large";
    case ErrorKind::duplicate_id: return "duplicate id";
    case ErrorKind::invalid_label: return "invalid label";
    case ErrorKind::missing_label_class: return "missing label class";
    case ErrorKind::empty_input: return "empty input";
    case ErrorKind::no_admissible_point: return "no admissible point";
    }
    return "error";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& message)
        : std::runtime_error(std::string(to_string(kind)) + ": " + message), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace lgde
