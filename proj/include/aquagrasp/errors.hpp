#pragma once

#include <stdexcept>
#include <string>

namespace aqua {

// Base for all library errors. CLI maps subtypes to exit codes.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(msg) {}
};

// camera_geometry
struct NonConvergent : Error {
    explicit NonConvergent(const std::string& msg) : Error(msg) {}
};
struct InvalidDepth : Error {
    explicit InvalidDepth(const std::string& msg) : Error(msg) {}
};
struct BehindCamera : Error {
    explicit BehindCamera(const std::string& msg) : Error(msg) {}
};
struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error(msg) {}
};

// pool_sim
struct PlacementFailure : Error {
    explicit PlacementFailure(const std::string& msg) : Error(msg) {}
};
struct SimFault : Error {
    explicit SimFault(const std::string& msg) : Error(msg) {}
};

// staged_controller
struct NoVisibleTarget : Error {
    explicit NoVisibleTarget(const std::string& msg) : Error(msg) {}
};
struct TargetDepthUnavailable : Error {
    explicit TargetDepthUnavailable(const std::string& msg) : Error(msg) {}
};

// affordance_labeling
struct NoClosureFound : Error {
    explicit NoClosureFound(const std::string& msg) : Error(msg) {}
};
struct SeedOutOfFrame : Error {
    explicit SeedOutOfFrame(const std::string& msg) : Error(msg) {}
};
struct DegenerateAnchors : Error {
    explicit DegenerateAnchors(const std::string& msg) : Error(msg) {}
};

// collection_harness
struct MissingFrameData : Error {
    explicit MissingFrameData(const std::string& msg) : Error(msg) {}
};
struct UnknownSuite : Error {
    explicit UnknownSuite(const std::string& msg) : Error(msg) {}
};

}  // namespace aqua
