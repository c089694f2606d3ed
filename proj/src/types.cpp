#include "tmech/types.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>

namespace tmech {

std::string to_string(Rational const &value)
{
  std::int64_t const num = value.numerator();
  std::int64_t const den = value.denominator();

  std::int64_t rest  = den;
  int          twos  = 0;
  int          fives = 0;
  while (rest % 2 == 0)
  {
    rest /= 2;
    ++twos;
  }
  while (rest % 5 == 0)
  {
    rest /= 5;
    ++fives;
  }
  if (rest != 1)
  {
    return std::to_string(num) + "/" + std::to_string(den);
  }

  int const    digits = std::max({twos, fives, 1});
  std::int64_t scale  = 1;
  for (int i = 0; i < digits; ++i)
  {
    scale *= 10;
  }
  // num/den == scaled/scale exactly
  std::int64_t const scaled   = num * (scale / den);
  std::int64_t const absolute = scaled < 0 ? -scaled : scaled;

  std::string frac = std::to_string(absolute % scale);
  frac.insert(frac.begin(), static_cast<std::size_t>(digits) - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0')
  {
    frac.pop_back();
  }
  return (scaled < 0 ? "-" : "") + std::to_string(absolute / scale) + "." + frac;
}

namespace {

std::int64_t parse_int(std::string_view text, std::string const &whole)
{
  std::int64_t value = 0;
  auto const [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty())
  {
    throw ValidationError{"not a rational number: '" + whole + "'"};
  }
  return value;
}

}  // namespace

Rational parse_rational(std::string const &text)
{
  std::string_view const view{text};
  if (auto slash = view.find('/'); slash != std::string_view::npos)
  {
    std::int64_t const den = parse_int(view.substr(slash + 1), text);
    if (den == 0)
    {
      throw ValidationError{"zero denominator in '" + text + "'"};
    }
    return {parse_int(view.substr(0, slash), text), den};
  }
  if (auto dot = view.find('.'); dot != std::string_view::npos)
  {
    auto const int_part  = view.substr(0, dot);
    auto const frac_part = view.substr(dot + 1);
    if (frac_part.empty() || frac_part.size() > 12 || frac_part.front() == '-' ||
        frac_part.front() == '+')
    {
      throw ValidationError{"not a rational number: '" + text + "'"};
    }
    bool const   negative = !int_part.empty() && int_part.front() == '-';
    std::int64_t whole    = int_part.empty() || int_part == "-" ? 0 : parse_int(int_part, text);
    std::int64_t scale    = 1;
    for (std::size_t i = 0; i < frac_part.size(); ++i)
    {
      scale *= 10;
    }
    std::int64_t const frac = parse_int(frac_part, text);
    std::int64_t const magnitude = (whole < 0 ? -whole : whole) * scale + frac;
    return {negative ? -magnitude : magnitude, scale};
  }
  return {parse_int(view, text), 1};
}

void append_u64_be(Bytes &out, std::uint64_t value)
{
  for (int shift = 56; shift >= 0; shift -= 8)
  {
    out.push_back(static_cast<std::uint8_t>(value >> shift));
  }
}

std::uint64_t read_u64_be(std::uint8_t const *data)
{
  std::uint64_t value = 0;
  for (int i = 0; i < 8; ++i)
  {
    value = (value << 8) | data[i];
  }
  return value;
}

}  // namespace tmech
