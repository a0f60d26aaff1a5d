#pragma once

#include <stdexcept>
#include <string>

namespace erwg {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ZeroInDegree : Error {
    explicit ZeroInDegree(int v)
        : Error("vertex " + std::to_string(v) + " has no in-neighbour"), vertex(v) {}
    int vertex;
};
struct DuplicateEdge : Error {
    DuplicateEdge(int u, int v)
        : Error("duplicate edge (" + std::to_string(u) + "," + std::to_string(v) + ")") {}
};
struct InvalidConfig : Error {
    using Error::Error;
};
struct NotDiagonalizable : Error {
    NotDiagonalizable() : Error("matrix is not (numerically) diagonalizable") {}
};
struct NotRealDiagonalizable : Error {
    NotRealDiagonalizable() : Error("matrix is not diagonalizable over the reals") {}
};
struct NotDiffusive : Error {
    NotDiffusive() : Error("spectral radius bound eta >= 1/2: not a diffusive configuration") {}
};
struct NotCritical : Error {
    NotCritical() : Error("eta != 1/2: not a critical configuration") {}
};
struct NotSuperdiffusive : Error {
    NotSuperdiffusive() : Error("no eigenvalue with real part > 1/2") {}
};
struct NoSubCriticalProjections : Error {
    NoSubCriticalProjections() : Error("no projection with Re(lambda) <= 1/2") {}
};
struct ProbabilityOutOfRange : Error {
    explicit ProbabilityOutOfRange(double p)
        : Error("conditional step probability " + std::to_string(p) + " outside [0,1]") {}
};
struct TooLarge : Error {
    using Error::Error;
    TooLarge() : Error("exact enumeration limited to n <= 8 and k <= 3") {}
};
struct Singular : Error {
    Singular() : Error("matrix is singular") {}
};
struct RegimeMismatch : Error {
    using Error::Error;
    RegimeMismatch() : Error("configuration regime does not match the requested check") {}
};
struct NotStronglyConnected : Error {
    NotStronglyConnected() : Error("graph is not strongly connected") {}
};
struct MemoryNotOne : Error {
    MemoryNotOne() : Error("synchronization check requires all memory parameters equal to 1") {}
};
struct Unsupported : Error {
    using Error::Error;
};

} // namespace erwg
