#pragma once
// Gate- and switch-level model of the row/column addressing network: the
// one-of-16 row decoder, the XOR/AND column gate pairs, coil excitation,
// the latching pulse response, the energy/thermal ledger and the hazard
// monitor that watches the reset-phase corner of the gating.

#include "taxsim/taxels.hpp"

#include <cstdint>
#include <vector>

namespace taxsim {

// Controller outputs as seen by the circuit. PA0-PA3 carry the row
// address, the enable line gates the decoder, PA4 selects the phase
// (low = set, high = reset) and the 16-bit column port drives one gate
// pair per column. Column port bit c = column c.
struct PinState {
    uint8_t row_addr = 0;     // [0,15]
    bool row_enable = false;  // false = no row line active
    bool mode = false;        // false = set phase, true = reset phase
    uint16_t col = 0;         // PB0..PB15

    bool col_bit(uint16_t c) const { return (col >> c) & 1u; }
    bool operator==(const PinState&) const = default;
};

// Transistor-gate levels for one column: the even (set) and odd (reset)
// driver of that column's coil pair.
struct GatePair {
    bool set_gate = false;
    bool reset_gate = false;
};

// Reference column gating: set = XOR(mode, col_bit), reset = AND(mode, col_bit).
//
//   mode col_bit | set reset
//    0     1     |  1   0     activate taxel
//    1     1     |  0   1     deactivate taxel
//    0     0     |  0   0     idle column
//    1     0     |  1   0     set transistor opens during reset phase --
//                             the ghosting pattern the planner must avoid
GatePair column_gate(bool mode, bool col_bit);

// Fault-injection variant with the set gate wired as AND instead of XOR.
// Exists so the verification oracle can prove it detects broken gating;
// never used by the reference circuit.
GatePair column_gate_set_and(bool mode, bool col_bit);

using GateFn = GatePair (*)(bool mode, bool col_bit);

// One-of-16 row decoder: bit r of the result = row line r active. With
// enable low no line is active. Only the low 4 address bits exist on the
// port; higher bits are ignored.
uint16_t decode_row(uint8_t row_addr, bool enable);

enum class Excite : uint8_t { None = 0, Set = 1, Reset = 2 };

// Per-taxel coil excitation for one waveform step.
struct CoilExcitation {
    GridDims dims{};
    std::vector<Excite> cells;  // row-major

    Excite at(uint16_t r, uint16_t c) const { return cells[std::size_t{r} * dims.cols + c]; }
};

// Raw per-taxel drive pair before mapping to an excitation. Both lines
// true is unreachable with the reference gates but representable so the
// hazard monitor can observe faulty logic.
struct CoilDrive {
    bool set = false;
    bool reset = false;
};

struct DriveMatrix {
    GridDims dims{};
    std::vector<CoilDrive> cells;  // row-major

    const CoilDrive& at(uint16_t r, uint16_t c) const {
        return cells[std::size_t{r} * dims.cols + c];
    }
};

// Evaluate the full gate network for one pin state. Taxels in rows whose
// line is not decoded get no drive at all. Requires cols <= 16.
DriveMatrix drive_matrix(const PinState& pins, GridDims dims, GateFn gate = column_gate);

// Map raw drives to excitations. A double-driven coil pair (broken gate
// logic only) resolves to Reset; the hazard monitor reports it.
CoilExcitation to_excitation(const DriveMatrix& drives);

// drive_matrix followed by to_excitation.
CoilExcitation excite(const PinState& pins, GridDims dims, GateFn gate = column_gate);

enum class HazardKind : uint8_t {
    UnintendedSetDuringReset,  // mode high, row selected, some column bit low
    MultipleRowsSelected,      // more than one decoder line active
    DoubleCoilDrive,           // set and reset transistor open on one taxel
};

const char* to_string(HazardKind kind);

struct Hazard {
    std::size_t step = 0;
    HazardKind kind{};
    std::vector<TaxelCoord> coords;  // affected taxels; for MultipleRowsSelected
                                     // one (r,0) entry per active row line
};

// Observational monitor: reports the hazards present in one step. The
// physics still follows the gates; reporting does not alter excitation.
std::vector<Hazard> scan_hazards(const PinState& pins, const DriveMatrix& drives,
                                 std::size_t step);

// Pulse-drive parameters: nominal DC voltage, filling coefficient and the
// per-coil resistive load.
struct PowerParams {
    double u_dc_v = 12.0;
    double duty = 1.0;           // filling coefficient, (0,1]
    double pulse_width_s = 0.01;
    double coil_resistance_ohm = 24.0;

    void validate() const;
};

struct EnergyLedger {
    uint64_t set_pulses = 0;
    uint64_t reset_pulses = 0;
    double total_joules = 0.0;
    double static_joules = 0.0;  // holding cost of a latched grid; stays 0

    bool operator==(const EnergyLedger&) const = default;
};

// Pulsed-drive voltage U_DC / duty. Rejects duty outside (0,1].
double pulse_voltage(const PowerParams& power);

// Resistive energy of one pulse: pulse_voltage^2 / R * pulse_width.
double pulse_energy(const PowerParams& power);

// Apply one excitation step: Set raises, Reset lowers, None leaves the
// latch alone. Every driven coil charges one pulse of energy and bumps the
// matching counter, whether or not the plunger moves.
void apply_pulse(GridState& grid, const CoilExcitation& excitation, const PowerParams& power,
                 EnergyLedger& ledger);

struct ThermalParams {
    double c_per_joule = 5.0;          // degC of cell heating per joule in
    double cooling_rate_per_s = 0.1;   // exponential decay toward ambient
    double ambient_c = 20.0;
};

// One lumped thermal update over dt: heat by joules_in, decay toward ambient.
void thermal_step(SolenoidState& cell, double joules_in, double dt_s,
                  const ThermalParams& thermal);

// Mechanical press on one taxel. A raised plunger drops when the force
// reaches the holding threshold; no energy or counters are involved.
void apply_press(SolenoidState& cell, double force_g, const SolenoidSpec& spec);

struct ResourceBudget {
    uint32_t column_transistors = 0;
    uint32_t row_transistors = 0;
    uint32_t controller_pins = 0;
    uint32_t naive_half_bridge = 0;
    uint32_t naive_full_bridge = 0;

    bool operator==(const ResourceBudget&) const = default;
};

// Active-element accounting for the row-scan scheme vs per-taxel bridges:
// 2 transistors per column + 1 per row, against 2 (half bridge) or
// 4 (full bridge) per taxel; controller pins = 4 address + 1 mode + cols.
ResourceBudget resource_budget(GridDims dims);

}  // namespace taxsim
