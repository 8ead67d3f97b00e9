#pragma once

#include <stdexcept>
#include <string>

namespace agraph {

// Error categories map 1:1 onto CLI exit codes (2, 3, 4).

/// Caller violated an operation's contract (bad arguments, wrong call order).
class UsageError : public std::runtime_error {
public:
    explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Input data is malformed (truncated files, invalid vectors, corrupt index).
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Operating-system level I/O failure.
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace agraph
