#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ntnsim {

namespace constants {
inline constexpr double earth_radius_km = 6378.14;
inline constexpr double earth_mu_km3_s2 = 3.986004418e5;
inline constexpr double earth_rotation_rad_s = 7.2921159e-5;
inline constexpr double speed_of_light_km_s = 299792.458;
/// -10·log10(k), Boltzmann's constant in dBW/K/Hz.
inline constexpr double boltzmann_db = 228.6;
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

inline constexpr double deg2rad(double deg) { return deg * constants::pi / 180.0; }
inline constexpr double rad2deg(double rad) { return rad * 180.0 / constants::pi; }

enum class Band { S, Ku, Ka };
enum class LinkDirection { Uplink, Downlink };

std::string_view to_string(Band band);
std::string_view to_string(LinkDirection direction);

/// Base of every configuration problem: malformed files, bad values, broken references.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// An invariant was violated; `field()` names the offending key path.
class ValidationError : public ConfigError {
 public:
  ValidationError(std::string field, const std::string& what)
      : ConfigError(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

class ReferenceError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// Input outside a function's mathematical domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class SimulationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ntnsim
