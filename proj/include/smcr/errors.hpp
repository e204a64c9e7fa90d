#pragma once
/**
 * @file    errors.hpp
 * @brief   Exception types shared by every smcr module.
 *
 * Input problems derive from std::invalid_argument, broken internal
 * invariants from std::logic_error, and search outcomes (no path with
 * non-zero success probability) from std::runtime_error so callers can
 * classify them without string matching.
 */

#include <stdexcept>
#include <string>

namespace smcr
{
    /// Malformed or out-of-range input (dimension mismatch, bad level, ...).
    class InvalidInput : public std::invalid_argument
    {
      public:
        using std::invalid_argument::invalid_argument;
    };

    /// An invariant that upstream code should have guaranteed was violated.
    class InvariantViolation : public std::logic_error
    {
      public:
        using std::logic_error::logic_error;
    };

    /// A planner exhausted its frontier without a usable goal.
    class NoSolution : public std::runtime_error
    {
      public:
        explicit NoSolution (const std::string &what = "no solution") : std::runtime_error (what) {}
    };

    /// The roadmap has no goal configuration for any target hypothesis.
    class UnsolvableInstance : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };

    /// Rejection sampling ran out of its retry budget.
    class SamplingFailure : public std::runtime_error
    {
      public:
        using std::runtime_error::runtime_error;
    };
} // namespace smcr
