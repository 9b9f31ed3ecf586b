#include "slitqa/bath_io.hpp"

namespace slitqa::bath {

using namespace json_util;

BathSpec bath_spec_from_json(const nlohmann::json& j, const std::string& path) {
    if (!j.is_object()) throw ConfigError(path, "expected an object");
    BathSpec b;
    const bool product = j.contains("eta_g2");
    const bool split = j.contains("eta") || j.contains("g");
    if (product && split) throw ConfigError(path, "give either eta_g2 or eta and g, not both");
    if (product) {
        b.eta = number(j, "eta_g2", path);
        b.g = 1.0;
    } else {
        b.eta = number(j, "eta", path);
        b.g = number_or(j, "g", path, 1.0);
    }
    if (!(b.eta >= 0.0)) throw ConfigError(path + (product ? ".eta_g2" : ".eta"), "must be >= 0");
    b.omega_c = number_or(j, "omega_c", path, b.omega_c);
    if (!(b.omega_c > 0.0)) throw ConfigError(path + ".omega_c", "must be > 0");
    b.temperature_mK = number(j, "temperature_mK", path);
    if (!(b.temperature_mK > 0.0)) throw ConfigError(path + ".temperature_mK", "must be > 0");
    return b;
}

nlohmann::json to_json(const BathSpec& spec) {
    return {{"eta", spec.eta}, {"g", spec.g}, {"omega_c", spec.omega_c},
            {"temperature_mK", spec.temperature_mK}};
}

} // namespace slitqa::bath
