#pragma once

#include <stdexcept>
#include <string>

namespace pcreg {

// I/O failures (unreadable file, malformed container, short read/write).
class IoError : public std::runtime_error {
public:
    explicit IoError(const std::string& msg) : std::runtime_error(msg) {}
};

// Rank-deficient correspondence geometry (collinear / coincident points).
class DegenerateGeometryError : public std::runtime_error {
public:
    explicit DegenerateGeometryError(const std::string& msg) : std::runtime_error(msg) {}
};

// Synthetic pair generation could not hit the overlap target within bounded retries.
class GenerationFailedError : public std::runtime_error {
public:
    explicit GenerationFailedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Seed proposal stage produced no candidate correspondences.
class EmptySeedError : public std::runtime_error {
public:
    explicit EmptySeedError(const std::string& msg) : std::runtime_error(msg) {}
};

// Anchor computation asked for the mean of an empty class.
class MissingClassError : public std::runtime_error {
public:
    explicit MissingClassError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class MiningFailureKind {
    EmptySeeds,
    EstimatorFailed,
    DegenerateGeometry,
    TooFewInliers,
};

// Two-pass mining failed for a pair (empty seeds or estimator failure in pass 2).
class MiningFailedError : public std::runtime_error {
public:
    MiningFailedError(MiningFailureKind k, const std::string& msg)
        : std::runtime_error(msg), kind(k) {}
    MiningFailureKind kind;
};

// A loss batch had nothing classifiable; callers skip and count these.
class RejectedBatchError : public std::runtime_error {
public:
    explicit RejectedBatchError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace pcreg
