#pragma once

#include <json.hpp>

#include "slitqa/bath.hpp"
#include "slitqa/schedule_io.hpp"

namespace slitqa::bath {

/// JSON bath block. Either "eta_g2" (g = 1, η = ηg²) or "eta" with "g".
struct BathSpec {
    double eta{2e-4};
    double g{1.0};
    double omega_c{4.0};
    double temperature_mK{20.0};

    double eta_g2() const { return eta * g * g; }
    OhmicBath build() const { return OhmicBath::from_temperature_mK(eta, omega_c, temperature_mK); }
};

BathSpec bath_spec_from_json(const nlohmann::json& j, const std::string& path = "bath");
nlohmann::json to_json(const BathSpec& spec);

} // namespace slitqa::bath
