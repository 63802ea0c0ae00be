#pragma once

namespace sumlab::special::detail {

// Upper incomplete beta with the complement 1 - z passed in exactly, for
// arguments so close to 1 that forming 1 - z would lose digits.
double beta_upper_split(double z, double one_minus_z, double p, double q);

} // namespace sumlab::special::detail
