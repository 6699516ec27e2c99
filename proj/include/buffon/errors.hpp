#pragma once

#include <stdexcept>
#include <string>

namespace buffon {

enum class ConfigErrc {
  too_few_needles,
  nonpositive_length,
  nonpositive_spacing,
  angle_out_of_range,
  not_admissible,
  unsupported_even_n,
};

inline const char *to_string(ConfigErrc code) {
  switch (code) {
  case ConfigErrc::too_few_needles: return "too_few_needles";
  case ConfigErrc::nonpositive_length: return "nonpositive_length";
  case ConfigErrc::nonpositive_spacing: return "nonpositive_spacing";
  case ConfigErrc::angle_out_of_range: return "angle_out_of_range";
  case ConfigErrc::not_admissible: return "not_admissible";
  case ConfigErrc::unsupported_even_n: return "unsupported_even_n";
  }
  return "unknown";
}

// Raised for any star/lattice parameter set outside the model's domain.
class ConfigError : public std::invalid_argument {
public:
  ConfigError(ConfigErrc code, const std::string &what)
      : std::invalid_argument(what), code_(code) {}

  ConfigErrc code() const noexcept { return code_; }

private:
  ConfigErrc code_;
};

// Adaptive quadrature failed to reach the requested accuracy.
class QuadratureError : public std::runtime_error {
public:
  QuadratureError(const std::string &what, double estimate)
      : std::runtime_error(what), error_estimate_(estimate) {}

  double error_estimate() const noexcept { return error_estimate_; }

private:
  double error_estimate_;
};

} // namespace buffon
