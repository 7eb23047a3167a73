#pragma once
// Flat key=value configuration with dotted section prefixes. Every key is
// optional; the defaults reproduce the reference display (16x16 taxels,
// 12 V nominal drive).

#include "taxsim/circuit.hpp"
#include "taxsim/firmware.hpp"
#include "taxsim/taxels.hpp"

#include <stdexcept>
#include <string>
#include <string_view>

namespace taxsim {

struct Config {
    GridDims dims = kReferenceDims;
    PowerParams power{};
    Timing timing{};
    ThermalParams thermal{};
    SolenoidSpec solenoid{};
    bool strict_hazards = false;
    bool skip_reset_if_clear = false;

    void validate() const;
};

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Parse config text. Blank lines and '#' comments are ignored; unknown
// keys and malformed values are errors. Throws ConfigError.
Config parse_config(std::string_view text);

Config load_config_file(const std::string& path);

// Environment variable consulted for a default config path.
inline constexpr const char* kConfigEnvVar = "TAXSIM_CONFIG";

}  // namespace taxsim
