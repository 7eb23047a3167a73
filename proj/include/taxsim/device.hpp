#pragma once
// A complete simulated display behind the wire protocol: controller,
// solenoid grid, power and thermal state. Encoded frames in, encoded
// frames out, the same byte path a serial host would use.

#include "taxsim/config.hpp"
#include "taxsim/firmware.hpp"
#include "taxsim/protocol.hpp"

#include <span>
#include <vector>

namespace taxsim {

class SimulatedDevice {
public:
    explicit SimulatedDevice(const Config& config, GateFn gate = column_gate);

    // Feed raw host bytes; returns the encoded response frames (one per
    // complete command decoded, a Nak per decode error).
    std::vector<uint8_t> handle_bytes(std::span<const uint8_t> bytes);

    // Decoded-command entry point used by handle_bytes.
    Response execute(const Command& cmd);

    const Config& config() const { return config_; }
    const GridState& grid() const { return grid_; }
    const Controller& controller() const { return controller_; }
    const EnergyLedger& ledger() const { return ledger_; }

    // Accumulated over all scheduled runs since boot.
    const std::vector<TraceRecord>& trace() const { return trace_; }
    const std::vector<Hazard>& hazards() const { return hazards_; }
    std::size_t steps_run() const { return trace_.size(); }
    double simulated_time_s() const { return simulated_time_s_; }
    double max_temperature_c() const { return max_temperature_c_; }
    bool last_run_aborted() const { return last_run_aborted_; }

private:
    Config config_;
    GateFn gate_;
    Controller controller_;
    GridState grid_;
    EnergyLedger ledger_;
    FrameDecoder decoder_;

    std::vector<TraceRecord> trace_;
    std::vector<Hazard> hazards_;
    double simulated_time_s_ = 0.0;
    double max_temperature_c_;
    bool last_run_aborted_ = false;
};

// Host side of the in-memory loopback: encode the command, push the bytes
// through the device, decode the single response frame. Throws
// ProtocolError if either direction fails to decode.
Response loopback_send(SimulatedDevice& device, const Command& cmd);

}  // namespace taxsim
