#pragma once

#include <stdexcept>
#include <string>

namespace frozen {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Argument outside the chart or model domain.
struct DomainError : Error { using Error::Error; };
struct ModelError : Error { using Error::Error; };
struct UnitsError : Error { using Error::Error; };
struct ConstraintError : Error { using Error::Error; };
// g is undefined at the two cusps of the lemon.
struct AngleUndefined : Error { using Error::Error; };
// s+ or s- requested too close to a zero of f.
struct PoleError : Error { using Error::Error; };
struct DegenerateTangency : Error { using Error::Error; };
struct AuditFailure : Error { using Error::Error; };
struct OrderUnsupported : Error { using Error::Error; };
struct StepFailure : Error { using Error::Error; };
struct ChartExit : Error { using Error::Error; };
struct DegenerateLinearization : Error { using Error::Error; };
struct IoError : Error { using Error::Error; };

}  // namespace frozen
