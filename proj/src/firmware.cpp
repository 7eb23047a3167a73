#include "taxsim/firmware.hpp"

#include <algorithm>
#include <stdexcept>

namespace taxsim {

namespace {

template <class... Ts>
struct Overload : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overload(Ts...) -> Overload<Ts...>;

uint16_t all_columns_mask(uint16_t cols) {
    return cols >= 16 ? uint16_t(0xFFFF) : uint16_t((1u << cols) - 1u);
}

PinState quiet_pins() {
    return PinState{.row_addr = 0, .row_enable = false, .mode = false, .col = 0};
}

void require_addressable(GridDims dims) {
    dims.validate();
    if (dims.rows > 16 || dims.cols > 16) {
        throw std::invalid_argument("the scan interface addresses at most 16x16 taxels");
    }
}

}  // namespace

const char* to_string(WavePhase phase) {
    switch (phase) {
        case WavePhase::RowReset: return "RowReset";
        case WavePhase::RowSet: return "RowSet";
        case WavePhase::Settle: return "Settle";
        case WavePhase::Idle: return "Idle";
    }
    return "?";
}

const char* to_string(Phase phase) {
    switch (phase) {
        case Phase::Ready: return "Ready";
        case Phase::ScanningSet: return "ScanningSet";
        case Phase::Displayed: return "Displayed";
        case Phase::ScanningReset: return "ScanningReset";
    }
    return "?";
}

void Timing::validate() const {
    if (!(pulse_width_s > 0) || !(settle_s > 0)) {
        throw std::invalid_argument("timing durations must be positive");
    }
}

Schedule plan_show(const Bitmap& frame, const Timing& timing, bool skip_reset_if_clear,
                   const Bitmap& shadow) {
    if (frame.dims() != shadow.dims()) {
        throw std::invalid_argument("frame and shadow dimensions differ");
    }
    require_addressable(frame.dims());
    timing.validate();

    const GridDims dims = frame.dims();
    const uint16_t all_cols = all_columns_mask(dims.cols);
    Schedule plan;
    for (uint16_t r = 0; r < dims.rows; ++r) {
        const auto row = uint8_t(r);
        if (!(skip_reset_if_clear && !shadow.row_any(r))) {
            plan.push_back({{.row_addr = row, .row_enable = true, .mode = true, .col = all_cols},
                            timing.pulse_width_s,
                            WavePhase::RowReset});
            plan.push_back({quiet_pins(), timing.settle_s, WavePhase::Settle});
        }
        if (frame.row_any(r)) {
            plan.push_back(
                {{.row_addr = row, .row_enable = true, .mode = false, .col = frame.row_mask(r)},
                 timing.pulse_width_s,
                 WavePhase::RowSet});
            plan.push_back({quiet_pins(), timing.settle_s, WavePhase::Settle});
        }
        plan.push_back({quiet_pins(), timing.settle_s, WavePhase::Idle});
    }
    return plan;
}

Schedule plan_clear(GridDims dims, const Timing& timing) {
    require_addressable(dims);
    timing.validate();

    const uint16_t all_cols = all_columns_mask(dims.cols);
    Schedule plan;
    for (uint16_t r = 0; r < dims.rows; ++r) {
        plan.push_back({{.row_addr = uint8_t(r), .row_enable = true, .mode = true, .col = all_cols},
                        timing.pulse_width_s,
                        WavePhase::RowReset});
        plan.push_back({quiet_pins(), timing.settle_s, WavePhase::Settle});
    }
    plan.push_back({quiet_pins(), timing.settle_s, WavePhase::Idle});
    return plan;
}

RunResult run_schedule(std::span<const WaveformStep> schedule, GridState& grid,
                       const PowerParams& power, EnergyLedger& ledger,
                       const ThermalParams& thermal, const RunOptions& options) {
    RunResult result;
    for (const SolenoidState& cell : grid.cells) {
        result.max_temperature_c = std::max(result.max_temperature_c, cell.temperature_c);
    }
    const double per_pulse = schedule.empty() ? 0.0 : pulse_energy(power);

    for (std::size_t i = 0; i < schedule.size(); ++i) {
        const WaveformStep& step = schedule[i];
        if (!(step.duration_s > 0)) {
            throw std::invalid_argument("waveform step duration must be positive");
        }

        const DriveMatrix drives = drive_matrix(step.pins, grid.dims, options.gate);
        const CoilExcitation excitation = to_excitation(drives);
        std::vector<Hazard> hazards = scan_hazards(step.pins, drives, i);

        const double joules_before = ledger.total_joules;
        apply_pulse(grid, excitation, power, ledger);
        const double step_joules = ledger.total_joules - joules_before;

        TraceRecord rec{i, step.pins, step.phase, step.duration_s, {}, {}, step_joules, hazards};
        for (uint16_t r = 0; r < grid.dims.rows; ++r) {
            for (uint16_t c = 0; c < grid.dims.cols; ++c) {
                const Excite e = excitation.at(r, c);
                double joules_in = 0.0;
                if (e == Excite::Set) {
                    rec.set_coords.push_back({r, c});
                    joules_in = per_pulse;
                } else if (e == Excite::Reset) {
                    rec.reset_coords.push_back({r, c});
                    joules_in = per_pulse;
                }
                SolenoidState& cell = grid.cell(r, c);
                thermal_step(cell, joules_in, step.duration_s, thermal);
                result.max_temperature_c = std::max(result.max_temperature_c, cell.temperature_c);
            }
        }

        result.simulated_time_s += step.duration_s;
        result.joules_added += step_joules;
        result.hazards.insert(result.hazards.end(), hazards.begin(), hazards.end());
        result.trace.push_back(std::move(rec));

        if (options.observer) options.observer(i, step);

        if (options.strict_hazards && !hazards.empty()) {
            result.aborted = true;
            break;
        }
    }
    return result;
}

Controller::Controller(GridDims dims, Timing timing, bool skip)
    : dims_(dims),
      timing_(timing),
      skip_reset_if_clear_(skip),
      shadow_(dims),
      pending_(dims) {}

Controller Controller::boot(GridDims dims, Timing timing, bool skip_reset_if_clear) {
    require_addressable(dims);
    timing.validate();
    return Controller(dims, timing, skip_reset_if_clear);
}

Controller::Action Controller::handle_command(const Command& cmd, const EnergyLedger& ledger) {
    return std::visit(
        Overload{
            [&](const StatusCmd&) -> Action {
                StatusResp status;
                status.state_code = static_cast<uint8_t>(phase_);
                status.set_pulses = uint16_t(ledger.set_pulses & 0xFFFFu);
                status.reset_pulses = uint16_t(ledger.reset_pulses & 0xFFFFu);
                status.shadow = shadow_;
                return {Response{std::move(status)}, {}};
            },
            [&](const PingCmd&) -> Action { return {Response{PongResp{}}, {}}; },
            [&](const ShowCmd& show) -> Action {
                if (scanning()) return {Response{BusyResp{}}, {}};
                if (show.frame.dims() != dims_) {
                    return {Response{NakResp{static_cast<uint8_t>(NakReason::BadDims)}}, {}};
                }
                Schedule plan;
                if (phase_ == Phase::Displayed) {
                    // Clear-then-show: the scan-in plan runs against an
                    // all-clear display.
                    plan = plan_clear(dims_, timing_);
                    Schedule scan_in =
                        plan_show(show.frame, timing_, skip_reset_if_clear_, Bitmap(dims_));
                    plan.insert(plan.end(), scan_in.begin(), scan_in.end());
                    phase_ = Phase::ScanningReset;
                } else {
                    plan = plan_show(show.frame, timing_, skip_reset_if_clear_, shadow_);
                    phase_ = Phase::ScanningSet;
                }
                pending_ = show.frame;
                pending_show_ = true;
                row_cursor_ = 0;
                return {Response{AckResp{}}, std::move(plan)};
            },
            [&](const ClearCmd&) -> Action {
                if (scanning()) return {Response{BusyResp{}}, {}};
                phase_ = Phase::ScanningReset;
                pending_show_ = false;
                row_cursor_ = 0;
                return {Response{AckResp{}}, plan_clear(dims_, timing_)};
            },
        },
        cmd);
}

void Controller::note_step(std::size_t /*index*/, const WaveformStep& step) {
    if (step.phase == WavePhase::RowReset || step.phase == WavePhase::RowSet) {
        row_cursor_ = uint16_t(step.pins.row_addr + 1);  // next row to scan
    }
    if (phase_ == Phase::ScanningReset && pending_show_ && step.phase == WavePhase::RowSet) {
        phase_ = Phase::ScanningSet;  // the chained clear has finished
    }
}

void Controller::finish_schedule() {
    if (pending_show_) {
        phase_ = Phase::Displayed;
        shadow_ = pending_;
        pending_show_ = false;
    } else {
        phase_ = Phase::Ready;
        shadow_ = Bitmap(dims_);
    }
    row_cursor_ = dims_.rows;
}

}  // namespace taxsim
