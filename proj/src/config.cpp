#include "taxsim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace taxsim {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

double parse_double(std::string_view key, std::string_view value) {
    // std::from_chars(double) is incomplete on some toolchains; strtod via
    // a bounded copy keeps parsing locale-independent enough for "C".
    const std::string buf(value);
    char* end = nullptr;
    const double out = std::strtod(buf.c_str(), &end);
    if (end != buf.c_str() + buf.size() || buf.empty()) {
        throw ConfigError("config key '" + std::string(key) + "' has malformed number '" +
                          buf + "'");
    }
    return out;
}

uint16_t parse_u16(std::string_view key, std::string_view value) {
    uint32_t out = 0;
    const auto* first = value.data();
    const auto* last = value.data() + value.size();
    const auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc{} || ptr != last || out > 0xFFFF) {
        throw ConfigError("config key '" + std::string(key) + "' has malformed count '" +
                          std::string(value) + "'");
    }
    return uint16_t(out);
}

bool parse_bool(std::string_view key, std::string_view value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("config key '" + std::string(key) + "' must be true/false, got '" +
                      std::string(value) + "'");
}

void apply(Config& cfg, std::string_view key, std::string_view value) {
    if (key == "dims.rows") cfg.dims.rows = parse_u16(key, value);
    else if (key == "dims.cols") cfg.dims.cols = parse_u16(key, value);
    else if (key == "power.u_dc_v") cfg.power.u_dc_v = parse_double(key, value);
    else if (key == "power.duty") cfg.power.duty = parse_double(key, value);
    else if (key == "power.pulse_width_s") cfg.power.pulse_width_s = parse_double(key, value);
    else if (key == "power.coil_resistance_ohm")
        cfg.power.coil_resistance_ohm = parse_double(key, value);
    else if (key == "timing.pulse_width_s") cfg.timing.pulse_width_s = parse_double(key, value);
    else if (key == "timing.settle_s") cfg.timing.settle_s = parse_double(key, value);
    else if (key == "thermal.c_per_joule") cfg.thermal.c_per_joule = parse_double(key, value);
    else if (key == "thermal.cooling_rate_per_s")
        cfg.thermal.cooling_rate_per_s = parse_double(key, value);
    else if (key == "thermal.ambient_c") cfg.thermal.ambient_c = parse_double(key, value);
    else if (key == "solenoid.width_mm") cfg.solenoid.width_mm = parse_double(key, value);
    else if (key == "solenoid.depth_mm") cfg.solenoid.depth_mm = parse_double(key, value);
    else if (key == "solenoid.height_mm") cfg.solenoid.height_mm = parse_double(key, value);
    else if (key == "solenoid.mass_g") cfg.solenoid.mass_g = parse_double(key, value);
    else if (key == "solenoid.holding_force_g")
        cfg.solenoid.holding_force_g = parse_double(key, value);
    else if (key == "solenoid.coil_resistance_ohm")
        cfg.solenoid.coil_resistance_ohm = parse_double(key, value);
    else if (key == "solenoid.nominal_dc_voltage_v")
        cfg.solenoid.nominal_dc_voltage_v = parse_double(key, value);
    else if (key == "run.strict_hazards") cfg.strict_hazards = parse_bool(key, value);
    else if (key == "run.skip_reset_if_clear") cfg.skip_reset_if_clear = parse_bool(key, value);
    else throw ConfigError("unknown config key '" + std::string(key) + "'");
}

}  // namespace

void Config::validate() const {
    dims.validate();
    if (dims.rows > 16 || dims.cols > 16) {
        throw ConfigError("the display interface supports at most 16x16 taxels");
    }
    power.validate();
    timing.validate();
    solenoid.validate();
    if (!(thermal.c_per_joule >= 0) || !(thermal.cooling_rate_per_s >= 0)) {
        throw ConfigError("thermal coefficients must be nonnegative");
    }
}

Config parse_config(std::string_view text) {
    Config cfg;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        const std::size_t end = text.find('\n', start);
        std::string_view line = text.substr(
            start, end == std::string_view::npos ? std::string_view::npos : end - start);
        ++line_no;
        start = end == std::string_view::npos ? text.size() + 1 : end + 1;

        line = trim(line);
        if (line.empty() || line.front() == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw ConfigError("config line " + std::to_string(line_no) + " is not key=value");
        }
        apply(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    }
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return cfg;
}

Config load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace taxsim
