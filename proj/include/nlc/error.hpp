#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

namespace nlc {

using Vertex = std::uint32_t;
using EdgeId = std::uint32_t;
using Colour = std::uint32_t;

enum class ErrorCode {
    invalid_argument,
    missing_edge,
    unlabelled_edge,
    invalid_step,
    uniformity_mismatch,
    not_tranquil,
    supplier_failure,
    malformed_cycle,
    parse_error,
};

inline const char* to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::invalid_argument: return "INVALID_ARGUMENT";
    case ErrorCode::missing_edge: return "MISSING_EDGE";
    case ErrorCode::unlabelled_edge: return "UNLABELLED_EDGE";
    case ErrorCode::invalid_step: return "INVALID_STEP";
    case ErrorCode::uniformity_mismatch: return "UNIFORMITY_MISMATCH";
    case ErrorCode::not_tranquil: return "NOT_TRANQUIL";
    case ErrorCode::supplier_failure: return "SUPPLIER_FAILURE";
    case ErrorCode::malformed_cycle: return "MALFORMED_CYCLE";
    case ErrorCode::parse_error: return "PARSE_ERROR";
    }
    return "UNKNOWN";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

/// A non-negative count extended by an explicit infinity (girth of a forest,
/// chromatic number of a hypergraph with a singleton edge).
class Extended {
public:
    constexpr Extended(std::size_t value) noexcept : value_(value) {}

    static constexpr Extended infinity() noexcept
    {
        Extended e(0);
        e.infinite_ = true;
        return e;
    }

    constexpr bool is_infinite() const noexcept { return infinite_; }
    constexpr bool is_finite() const noexcept { return !infinite_; }

    constexpr std::size_t value() const
    {
        if (infinite_)
            throw Error(ErrorCode::invalid_argument, "value() of infinite count");
        return value_;
    }

    constexpr Extended times(std::size_t factor) const noexcept
    {
        if (infinite_)
            return factor == 0 ? Extended(0) : infinity();
        return Extended(value_ * factor);
    }

    friend constexpr auto operator<=>(const Extended&, const Extended&) = default;

    friend std::ostream& operator<<(std::ostream& os, const Extended& e)
    {
        if (e.infinite_)
            return os << "INFINITY";
        return os << e.value_;
    }

    std::string str() const { return infinite_ ? "INFINITY" : std::to_string(value_); }

private:
    // Member order matters: finite values compare below infinity.
    bool infinite_ = false;
    std::size_t value_ = 0;
};

} // namespace nlc
