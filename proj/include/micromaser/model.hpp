#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "micromaser/errors.hpp"

namespace micromaser {

enum class Variant {
  dicke_pair,          // two atoms injected together, resonant
  one_atom,            // standard Jaynes-Cummings micromaser
  two_photon_detuned,  // one three-level atom with one-photon detuning
};

inline std::string_view to_string(Variant v) {
  switch (v) {
    case Variant::dicke_pair: return "dicke";
    case Variant::one_atom: return "one-atom";
    case Variant::two_photon_detuned: return "two-photon";
  }
  return "unknown";
}

inline std::optional<Variant> parse_variant(std::string_view s) {
  if (s == "dicke") return Variant::dicke_pair;
  if (s == "one-atom") return Variant::one_atom;
  if (s == "two-photon") return Variant::two_photon_detuned;
  return std::nullopt;
}

// Rates are per photon lifetime (2*kappa = 1). `pump` counts injection
// events (atom pairs for dicke, single atoms otherwise) per lifetime.
struct ModelSpec {
  Variant variant = Variant::dicke_pair;
  double pump = 0.0;
  double nbar_th = 0.0;
  double gtau = 0.0;
  double delta = 0.0;

  // D = sqrt(N) * g * tau
  double pump_parameter() const { return std::sqrt(pump) * gtau; }

  void validate() const {
    if (!(pump >= 0.0) || !std::isfinite(pump)) {
      throw ConfigError("pump rate must be finite and >= 0");
    }
    if (!(nbar_th >= 0.0) || !std::isfinite(nbar_th)) {
      throw ConfigError("thermal photon number must be finite and >= 0");
    }
    if (!(gtau >= 0.0) || !std::isfinite(gtau)) {
      throw ConfigError("interaction time must be finite and >= 0");
    }
    if (!(delta >= 0.0) || !std::isfinite(delta)) {
      throw ConfigError("detuning must be finite and >= 0");
    }
    if (variant != Variant::two_photon_detuned && delta != 0.0) {
      throw ConfigError("detuning is only meaningful for the two-photon model");
    }
  }
};

// Spec with gtau chosen so that sqrt(N)*gtau == D.
inline ModelSpec at_pump_parameter(ModelSpec spec, double D) {
  if (!(spec.pump > 0.0)) {
    throw ConfigError("pump parameter D requires a positive pump rate");
  }
  if (!(D >= 0.0)) {
    throw ConfigError("pump parameter D must be >= 0");
  }
  spec.gtau = D / std::sqrt(spec.pump);
  return spec;
}

}  // namespace micromaser
