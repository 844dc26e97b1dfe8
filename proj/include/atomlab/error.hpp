#pragma once

#include <stdexcept>
#include <string>

namespace atomlab
{
    /// Base of every exception thrown by the library.
    class Error : public std::runtime_error
    {
    public:
        using std::runtime_error::runtime_error;
    };

    /// Malformed input: out-of-range ids, non-total maps, bad documents.
    class StructuralError : public Error
    {
    public:
        using Error::Error;
    };

    /// A configured enumeration or search budget would be exceeded.
    class BudgetExceeded : public Error
    {
    public:
        BudgetExceeded(const std::string & what, unsigned long long reached) :
            Error(what + " (size reached: " + std::to_string(reached) + ")"),
            reached_(reached)
        {
        }

        auto reached() const -> unsigned long long { return reached_; }

    private:
        unsigned long long reached_;
    };

    /// Invalid parameters to a builder or command.
    class UsageError : public Error
    {
    public:
        using Error::Error;
    };

    /// An internal cross-check failed. Always indicates a bug.
    class VerificationError : public Error
    {
    public:
        using Error::Error;
    };
}

namespace atomlab
{
    /// Symbolic blur composition disagreed with the truncated brute force.
    class TruncationMismatch : public VerificationError
    {
    public:
        using VerificationError::VerificationError;
    };
}
