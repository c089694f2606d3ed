#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace tmech {

using AgentId    = std::string;
using ContractId = std::string;
using SchoolId   = std::string;
using Height     = std::uint64_t;
using Bytes      = std::vector<std::uint8_t>;

// Exact arithmetic for click-through rates, utilities and revenue.
using Rational = boost::rational<std::int64_t>;

// Bad input or configuration. The CLI maps it to exit code 1.
class ValidationError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

// A property the simulator guarantees did not hold. The CLI maps it to exit code 2.
class InvariantViolation : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

// Exact decimal rendering when the denominator has only factors 2 and 5
// ("7.2", "1.0"), otherwise "n/d".
std::string to_string(Rational const &value);

// Parses "7", "-3/4", "0.8" into an exact rational.
Rational parse_rational(std::string const &text);

void append_u64_be(Bytes &out, std::uint64_t value);
std::uint64_t read_u64_be(std::uint8_t const *data);

}  // namespace tmech
