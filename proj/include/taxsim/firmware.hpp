#pragma once
// Controller firmware model: the power-on state machine and the row-scan
// sequencer that turn SHOW/CLEAR commands into pin waveforms, plus the
// executor that drives those waveforms through the circuit model.

#include "taxsim/circuit.hpp"
#include "taxsim/protocol.hpp"

#include <functional>
#include <span>
#include <vector>

namespace taxsim {

enum class WavePhase : uint8_t { RowReset, RowSet, Settle, Idle };

const char* to_string(WavePhase phase);

// One pin state held for a duration; a scan is a sequence of these.
struct WaveformStep {
    PinState pins{};
    double duration_s = 0.0;
    WavePhase phase = WavePhase::Idle;
};

using Schedule = std::vector<WaveformStep>;

struct Timing {
    double pulse_width_s = 0.010;
    double settle_s = 0.005;

    void validate() const;
};

// Row-scan plan for one frame, ascending rows. Per row: a full-row reset
// pulse (skipped when the skip flag is on and the shadow row is already
// clear), then a set pulse carrying the frame's column bits if the row has
// any, each followed by a settle; an idle step closes every row. The plan
// never selects a row in reset mode with a column bit low.
Schedule plan_show(const Bitmap& frame, const Timing& timing, bool skip_reset_if_clear,
                   const Bitmap& shadow);

// Full-display reset: one all-columns reset pulse per row, ascending,
// settle after each, idle at the end.
Schedule plan_clear(GridDims dims, const Timing& timing);

enum class Phase : uint8_t {
    Ready = 0,
    ScanningSet = 1,
    Displayed = 2,
    ScanningReset = 3,
};

const char* to_string(Phase phase);

// Per-step execution record. The trace file the CLI emits is built from
// these.
struct TraceRecord {
    std::size_t step = 0;
    PinState pins{};
    WavePhase phase = WavePhase::Idle;
    double duration_s = 0.0;
    std::vector<TaxelCoord> set_coords;
    std::vector<TaxelCoord> reset_coords;
    double joules = 0.0;
    std::vector<Hazard> hazards;
};

using StepObserver = std::function<void(std::size_t index, const WaveformStep& step)>;

struct RunOptions {
    bool strict_hazards = false;  // abort on the first hazardous step
    GateFn gate = column_gate;
    StepObserver observer;  // called after each applied step
};

struct RunResult {
    std::vector<TraceRecord> trace;
    std::vector<Hazard> hazards;
    bool aborted = false;
    double simulated_time_s = 0.0;
    double joules_added = 0.0;
    double max_temperature_c = 0.0;
};

// Apply a schedule to the grid: per step, excite the coils from the pins,
// pulse the latches, then run the lumped thermal update over the step's
// duration. Strict mode stops after recording the first hazardous step.
RunResult run_schedule(std::span<const WaveformStep> schedule, GridState& grid,
                       const PowerParams& power, EnergyLedger& ledger,
                       const ThermalParams& thermal, const RunOptions& options = {});

// The microcontroller loop: available as soon as power is on, scans rows
// on SHOW, waits for CLEAR, scans rows back to the initial state. One
// command at a time; scans run to completion.
class Controller {
public:
    // Power-on: Ready, all-clear shadow, nothing emitted. Rows and columns
    // are limited to 16 by the 4-bit row address and the 16-bit column port.
    static Controller boot(GridDims dims, Timing timing = {}, bool skip_reset_if_clear = false);

    struct Action {
        Response response;   // answered over the wire once the schedule ran
        Schedule schedule;   // empty for pure observers and rejections
    };

    // SHOW/CLEAR produce a schedule and enter a scanning phase; STATUS and
    // PING answer immediately and touch nothing. SHOW/CLEAR while scanning
    // are rejected as Busy. SHOW onto a displayed image chains a full clear
    // ahead of the new scan: the gating offers no safe partial reset, so
    // the firmware never attempts one.
    Action handle_command(const Command& cmd, const EnergyLedger& ledger);

    // Executor callbacks: cursor/phase bookkeeping while a schedule runs,
    // then the Scanning -> Displayed/Ready transition on completion.
    void note_step(std::size_t index, const WaveformStep& step);
    void finish_schedule();

    Phase phase() const { return phase_; }
    GridDims dims() const { return dims_; }
    const Bitmap& shadow() const { return shadow_; }
    uint16_t row_cursor() const { return row_cursor_; }
    const Timing& timing() const { return timing_; }
    bool skip_reset_if_clear() const { return skip_reset_if_clear_; }

private:
    Controller(GridDims dims, Timing timing, bool skip);

    bool scanning() const {
        return phase_ == Phase::ScanningSet || phase_ == Phase::ScanningReset;
    }

    GridDims dims_{};
    Timing timing_{};
    bool skip_reset_if_clear_ = false;
    Phase phase_ = Phase::Ready;
    Bitmap shadow_;        // belief of what the grid currently shows
    Bitmap pending_;       // frame being scanned in
    bool pending_show_ = false;
    uint16_t row_cursor_ = 0;
};

}  // namespace taxsim
