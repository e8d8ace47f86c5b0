#include "netfrac/number_format.hpp"

#include <charconv>

#include "netfrac/errors.hpp"

namespace netfrac {

std::string format_double(double value) {
  char buffer[64];
  auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
  return std::string(buffer, ptr);
}

double parse_double(std::string_view text) {
  // from_chars rejects a leading '+', which config files sometimes carry.
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw ContractError("invalid number '" + std::string(text) + "'");
  }
  return value;
}

}  // namespace netfrac
