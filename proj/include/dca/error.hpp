#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dca {

enum class ErrorCode {
    // lattice construction
    IndexOutOfRange,
    DegenerateFace,
    NotBipartite,
    NonManifoldEdge,
    NonManifoldVertex,
    OverlappingFaces,
    MultipleBoundaryComponents,
    EmptyLattice,
    // geometry / operators
    NotOrthogonal,
    DegenerateDiagonal,
    NonFiniteValue,
    DisconnectedDiagonalGraph,
    InvalidPath,
    EmptyPolyline,
    SizeMismatch,
    // solver
    DisconnectedInteriorComponent,
    // generators
    EmptyDomain,
    InvalidArgument,
    CycleLengthMismatch,
    NonSphericalResult,
    NoConvergence,
    InvalidBoundaryRadii,
    ClippedToEmpty,
    ValidationFailed,
    // harness
    SquareTooSmall,
    SquareNotInterior,
    BallOutOfRange,
    // io
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace dca
