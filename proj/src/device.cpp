#include "taxsim/device.hpp"

#include <algorithm>
#include <iterator>

namespace taxsim {

SimulatedDevice::SimulatedDevice(const Config& config, GateFn gate)
    : config_(config),
      gate_(gate),
      controller_(Controller::boot(config.dims, config.timing, config.skip_reset_if_clear)),
      grid_(new_grid(config.dims, config.thermal.ambient_c)),
      decoder_(config.dims),
      max_temperature_c_(config.thermal.ambient_c) {
    config_.validate();
}

Response SimulatedDevice::execute(const Command& cmd) {
    Controller::Action action = controller_.handle_command(cmd, ledger_);
    if (action.schedule.empty()) {
        return action.response;  // observer, Busy or Nak: nothing to run
    }

    RunOptions options;
    options.strict_hazards = config_.strict_hazards;
    options.gate = gate_;
    options.observer = [this](std::size_t index, const WaveformStep& step) {
        controller_.note_step(index, step);
    };

    RunResult run = run_schedule(action.schedule, grid_, config_.power, ledger_,
                                 config_.thermal, options);

    trace_.insert(trace_.end(), std::make_move_iterator(run.trace.begin()),
                  std::make_move_iterator(run.trace.end()));
    hazards_.insert(hazards_.end(), run.hazards.begin(), run.hazards.end());
    simulated_time_s_ += run.simulated_time_s;
    max_temperature_c_ = std::max(max_temperature_c_, run.max_temperature_c);
    last_run_aborted_ = run.aborted;

    if (run.aborted) {
        return NakResp{static_cast<uint8_t>(NakReason::HazardAbort)};
    }
    controller_.finish_schedule();
    return action.response;
}

std::vector<uint8_t> SimulatedDevice::handle_bytes(std::span<const uint8_t> bytes) {
    decoder_.feed(bytes);
    std::vector<uint8_t> out;
    while (auto item = decoder_.poll()) {
        Response resp{AckResp{}};
        if (std::holds_alternative<DecodeError>(*item)) {
            const auto err = std::get<DecodeError>(*item);
            resp = NakResp{static_cast<uint8_t>([err] {
                switch (err) {
                    case DecodeError::BadSof: return NakReason::BadSof;
                    case DecodeError::BadChecksum: return NakReason::BadChecksum;
                    case DecodeError::UnknownCommand: return NakReason::UnknownCommand;
                    case DecodeError::LengthMismatch: return NakReason::LengthMismatch;
                    case DecodeError::BadDims: return NakReason::BadDims;
                }
                return NakReason::UnknownCommand;
            }())};
        } else {
            const Message& msg = std::get<Message>(*item);
            if (std::holds_alternative<Command>(msg)) {
                resp = execute(std::get<Command>(msg));
            } else {
                // A response frame is not something the display acts on.
                resp = NakResp{static_cast<uint8_t>(NakReason::UnknownCommand)};
            }
        }
        const auto encoded = encode(resp);
        out.insert(out.end(), encoded.begin(), encoded.end());
    }
    return out;
}

Response loopback_send(SimulatedDevice& device, const Command& cmd) {
    const std::vector<uint8_t> reply = device.handle_bytes(encode(cmd));
    const DecodeOutcome outcome = decode(reply, device.config().dims);
    if (!outcome.ok() || !std::holds_alternative<Response>(outcome.message())) {
        throw ProtocolError("loopback reply did not decode to a response frame");
    }
    return std::get<Response>(outcome.message());
}

}  // namespace taxsim
