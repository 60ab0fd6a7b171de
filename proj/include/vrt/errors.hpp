#pragma once

#include <stdexcept>
#include <string>

namespace vrt {

/// Base class for modeled infeasibility outcomes. Precondition violations
/// (non-positive voltages, angles out of range, malformed parameter sets)
/// throw std::domain_error instead.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Requested active power exceeds what the source voltage can deliver at the
/// stability limit (p * x > vs * vl): no angle in [0, 90 deg] exists.
struct InfeasiblePower : Error {
    using Error::Error;
};

/// Demanded load power exceeds the substation apparent-power ceiling.
struct InfeasibleLoad : Error {
    using Error::Error;
};

/// The uncompensated power balance has no real solution: the operating point
/// has fallen off the nose curve.
struct VoltageCollapse : Error {
    using Error::Error;
};

/// A sampled curve request produced no feasible samples at all.
struct EmptyCurve : Error {
    using Error::Error;
};

}  // namespace vrt
