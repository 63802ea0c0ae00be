#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sumlab {

enum class Errc {
    missing_local_data,
    omega_out_of_range,
    pole_at_nonpositive_integer,
    domain_error,
    max_depth_exceeded,
    pole_at_one,
    accuracy_window_exceeded,
    gamma_pole,
    division_near_zero,
    parameter_out_of_domain,
    grid_resolution_insufficient,
    table_too_small,
    integer_abscissa,
    config_parse_error,
    imaginary_residue,
    io_error,
};

std::string_view errc_name(Errc code) noexcept;

/// Every failure raised by the library carries one of the codes above so the
/// CLI can report it with the coordinates it was evaluating.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

inline void require_omega(double omega) {
    if (!(omega > 0.0 && omega < 0.5))
        throw Error(Errc::omega_out_of_range,
                    "omega = " + std::to_string(omega) + " must lie in (0, 1/2)");
}

} // namespace sumlab
