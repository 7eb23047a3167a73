#include "taxsim/circuit.hpp"

#include <bit>
#include <stdexcept>
#include <string>

namespace taxsim {

GatePair column_gate(bool mode, bool col_bit) {
    return {.set_gate = mode != col_bit, .reset_gate = mode && col_bit};
}

GatePair column_gate_set_and(bool mode, bool col_bit) {
    return {.set_gate = mode && col_bit, .reset_gate = mode && col_bit};
}

uint16_t decode_row(uint8_t row_addr, bool enable) {
    if (!enable) return 0;
    return uint16_t(1u << (row_addr & 0x0Fu));
}

DriveMatrix drive_matrix(const PinState& pins, GridDims dims, GateFn gate) {
    dims.validate();
    if (dims.cols > 16) {
        throw std::invalid_argument("the column port drives at most 16 columns");
    }
    DriveMatrix m{dims, std::vector<CoilDrive>(dims.cell_count())};
    const uint16_t lines = decode_row(pins.row_addr, pins.row_enable);
    for (uint16_t r = 0; r < dims.rows && r < 16; ++r) {
        if (!((lines >> r) & 1u)) continue;  // unselected rows stay undriven
        for (uint16_t c = 0; c < dims.cols; ++c) {
            const GatePair g = gate(pins.mode, pins.col_bit(c));
            m.cells[std::size_t{r} * dims.cols + c] = {g.set_gate, g.reset_gate};
        }
    }
    return m;
}

CoilExcitation to_excitation(const DriveMatrix& drives) {
    CoilExcitation out{drives.dims, std::vector<Excite>(drives.cells.size(), Excite::None)};
    for (std::size_t i = 0; i < drives.cells.size(); ++i) {
        const CoilDrive& d = drives.cells[i];
        if (d.reset) {
            out.cells[i] = Excite::Reset;  // double drive resolves to Reset
        } else if (d.set) {
            out.cells[i] = Excite::Set;
        }
    }
    return out;
}

CoilExcitation excite(const PinState& pins, GridDims dims, GateFn gate) {
    return to_excitation(drive_matrix(pins, dims, gate));
}

const char* to_string(HazardKind kind) {
    switch (kind) {
        case HazardKind::UnintendedSetDuringReset: return "UnintendedSetDuringReset";
        case HazardKind::MultipleRowsSelected: return "MultipleRowsSelected";
        case HazardKind::DoubleCoilDrive: return "DoubleCoilDrive";
    }
    return "?";
}

std::vector<Hazard> scan_hazards(const PinState& pins, const DriveMatrix& drives,
                                 std::size_t step) {
    std::vector<Hazard> out;
    const GridDims dims = drives.dims;
    const uint16_t lines = decode_row(pins.row_addr, pins.row_enable);

    if (std::popcount(lines) > 1) {
        Hazard h{step, HazardKind::MultipleRowsSelected, {}};
        for (uint16_t r = 0; r < dims.rows && r < 16; ++r) {
            if ((lines >> r) & 1u) h.coords.push_back({r, 0});
        }
        out.push_back(std::move(h));
    }

    if (pins.mode) {
        // During the reset phase any low column bit opens that column's set
        // transistor on the selected row.
        Hazard h{step, HazardKind::UnintendedSetDuringReset, {}};
        for (uint16_t r = 0; r < dims.rows && r < 16; ++r) {
            if (!((lines >> r) & 1u)) continue;
            for (uint16_t c = 0; c < dims.cols; ++c) {
                if (!pins.col_bit(c)) h.coords.push_back({r, c});
            }
        }
        if (!h.coords.empty()) out.push_back(std::move(h));
    }

    {
        Hazard h{step, HazardKind::DoubleCoilDrive, {}};
        for (uint16_t r = 0; r < dims.rows; ++r) {
            for (uint16_t c = 0; c < dims.cols; ++c) {
                const CoilDrive& d = drives.at(r, c);
                if (d.set && d.reset) h.coords.push_back({r, c});
            }
        }
        if (!h.coords.empty()) out.push_back(std::move(h));
    }

    return out;
}

void PowerParams::validate() const {
    if (!(u_dc_v > 0)) throw std::invalid_argument("u_dc_v must be positive");
    if (!(duty > 0.0) || duty > 1.0) {
        throw std::invalid_argument("filling coefficient must lie in (0,1], got " +
                                    std::to_string(duty));
    }
    if (!(pulse_width_s > 0)) throw std::invalid_argument("pulse_width_s must be positive");
    if (!(coil_resistance_ohm > 0)) {
        throw std::invalid_argument("coil_resistance_ohm must be positive");
    }
}

double pulse_voltage(const PowerParams& power) {
    power.validate();
    return power.u_dc_v / power.duty;
}

double pulse_energy(const PowerParams& power) {
    const double up = pulse_voltage(power);
    return up * up / power.coil_resistance_ohm * power.pulse_width_s;
}

void apply_pulse(GridState& grid, const CoilExcitation& excitation, const PowerParams& power,
                 EnergyLedger& ledger) {
    if (excitation.dims != grid.dims) {
        throw std::invalid_argument("excitation dimensions do not match the grid");
    }
    const double joules = pulse_energy(power);
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        SolenoidState& cell = grid.cells[i];
        switch (excitation.cells[i]) {
            case Excite::None:
                break;  // latched, no current path, no energy
            case Excite::Set:
                cell.plunger = Plunger::Up;
                cell.set_pulse_count += 1;
                ledger.set_pulses += 1;
                ledger.total_joules += joules;
                break;
            case Excite::Reset:
                cell.plunger = Plunger::Down;
                cell.reset_pulse_count += 1;
                ledger.reset_pulses += 1;
                ledger.total_joules += joules;
                break;
        }
    }
}

void thermal_step(SolenoidState& cell, double joules_in, double dt_s,
                  const ThermalParams& thermal) {
    if (!(dt_s > 0)) throw std::invalid_argument("thermal_step requires dt > 0");
    cell.temperature_c += thermal.c_per_joule * joules_in -
                          thermal.cooling_rate_per_s * (cell.temperature_c - thermal.ambient_c) * dt_s;
}

void apply_press(SolenoidState& cell, double force_g, const SolenoidSpec& spec) {
    if (force_g < 0) throw std::invalid_argument("press force must be nonnegative");
    if (cell.plunger == Plunger::Up && force_g >= spec.holding_force_g) {
        cell.plunger = Plunger::Down;  // mechanical reset; the latch is overcome
    }
}

ResourceBudget resource_budget(GridDims dims) {
    dims.validate();
    const uint32_t taxels = uint32_t{dims.rows} * dims.cols;
    return {
        .column_transistors = 2u * dims.cols,
        .row_transistors = dims.rows,
        .controller_pins = 4u + 1u + dims.cols,
        .naive_half_bridge = 2u * taxels,
        .naive_full_bridge = 4u * taxels,
    };
}

}  // namespace taxsim
