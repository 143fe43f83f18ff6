#pragma once

// Error taxonomy shared by all modules. Every failure a caller can reasonably
// branch on gets its own type; messages carry the offending entity.

#include <stdexcept>
#include <string>

namespace hfw {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// diagram
struct ParseError : Error { using Error::Error; };
struct UndeclaredReference : Error { using Error::Error; };
struct DuplicateId : Error { using Error::Error; };

// topology
struct NotPeriodic : Error { using Error::Error; };
struct Infeasible : Error { using Error::Error; };
struct PathInvalid : Error { using Error::Error; };

// whitney
struct MalformedDomain : Error { using Error::Error; };
struct EndpointMismatch : Error { using Error::Error; };

// groupring
struct NotNilpotent : Error { using Error::Error; };
struct PairingNotIdentityLike : Error { using Error::Error; };
struct MultivariateUnsupported : Error { using Error::Error; };

// floer
struct UnknownDiskCount : Error { using Error::Error; };
struct NotAdmissible : Error { using Error::Error; };
struct DecompositionFailed : Error { using Error::Error; };

// replicate
struct ParameterOutOfRange : Error { using Error::Error; };
struct GoldenDataMissing : Error { using Error::Error; };

}  // namespace hfw
