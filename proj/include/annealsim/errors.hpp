#pragma once

#include <stdexcept>
#include <string>

namespace annealsim {

struct AnnealError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FormatError : AnnealError { using AnnealError::AnnealError; };
struct SchedulingError : AnnealError { using AnnealError::AnnealError; };
struct RangeError : AnnealError { using AnnealError::AnnealError; };
struct DomainError : AnnealError { using AnnealError::AnnealError; };
struct CapacityError : AnnealError { using AnnealError::AnnealError; };
struct InsufficientData : AnnealError { using AnnealError::AnnealError; };
struct AlignmentError : AnnealError { using AnnealError::AnnealError; };
struct StiffnessError : AnnealError { using AnnealError::AnnealError; };
struct IntegrationError : AnnealError { using AnnealError::AnnealError; };
struct PhysicalityError : AnnealError { using AnnealError::AnnealError; };
struct QuadratureError : AnnealError { using AnnealError::AnnealError; };
struct ConfigError : AnnealError { using AnnealError::AnnealError; };

}  // namespace annealsim
