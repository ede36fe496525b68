#pragma once

#include <stdexcept>
#include <string>

namespace topomd {

/// Base error for all failures raised by the library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

/// Two beads closer than the force field can evaluate (r == 0 in practice).
class OverlapError : public Error {
public:
    OverlapError(const std::string& msg, int bead_i, int bead_j)
        : Error(msg), i(bead_i), j(bead_j) {}
    int i;
    int j;
};

/// A FENE bond stretched to or beyond its maximum extension R0.
class OverstretchError : public Error {
public:
    OverstretchError(const std::string& msg, int bead_i, int bead_j)
        : Error(msg), i(bead_i), j(bead_j) {}
    int i;
    int j;
};

} // namespace topomd
