#pragma once

#include <stdexcept>
#include <string>

namespace nav2d {

/// Base class for all domain errors thrown by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InvalidGeometry : Error {
  using Error::Error;
};
struct DegenerateHull : Error {
  using Error::Error;
};
struct KernelSelectionFailed : Error {
  using Error::Error;
};
struct HullFailed : Error {
  using Error::Error;
};
struct RobotInCollision : Error {
  using Error::Error;
};
struct OutsideFreeSpace : Error {
  using Error::Error;
};
struct IntegrationEscape : Error {
  using Error::Error;
};
struct FitTooCoarse : Error {
  using Error::Error;
};
struct OutOfRange : Error {
  using Error::Error;
};
struct InvalidProblem : Error {
  using Error::Error;
};
struct PathFullyBlocked : Error {
  using Error::Error;
};
struct SupervisorLost : Error {
  using Error::Error;
};
struct IoError : Error {
  using Error::Error;
};

}  // namespace nav2d
