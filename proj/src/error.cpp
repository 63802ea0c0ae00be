#include "sumlab/error.hpp"

namespace sumlab {

std::string_view errc_name(Errc code) noexcept {
    switch (code) {
    case Errc::missing_local_data: return "MissingLocalData";
    case Errc::omega_out_of_range: return "OmegaOutOfRange";
    case Errc::pole_at_nonpositive_integer: return "PoleAtNonpositiveInteger";
    case Errc::domain_error: return "DomainError";
    case Errc::max_depth_exceeded: return "MaxDepthExceeded";
    case Errc::pole_at_one: return "PoleAtOne";
    case Errc::accuracy_window_exceeded: return "AccuracyWindowExceeded";
    case Errc::gamma_pole: return "GammaPole";
    case Errc::division_near_zero: return "DivisionNearZero";
    case Errc::parameter_out_of_domain: return "ParameterOutOfDomain";
    case Errc::grid_resolution_insufficient: return "GridResolutionInsufficient";
    case Errc::table_too_small: return "TableTooSmall";
    case Errc::integer_abscissa: return "IntegerAbscissa";
    case Errc::config_parse_error: return "ConfigParseError";
    case Errc::imaginary_residue: return "ImaginaryResidue";
    case Errc::io_error: return "IoError";
    }
    return "Unknown";
}

} // namespace sumlab
