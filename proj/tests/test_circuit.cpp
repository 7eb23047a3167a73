#include "taxsim/circuit.hpp"

#include "doctest.h"

#include <bit>
#include <cmath>
#include <random>
#include <stdexcept>

using namespace taxsim;

namespace {

PinState random_pins(std::mt19937& rng) {
    return PinState{
        .row_addr = uint8_t(rng() % 16),
        .row_enable = (rng() & 1) != 0,
        .mode = (rng() & 1) != 0,
        .col = uint16_t(rng()),
    };
}

}  // namespace

TEST_CASE("decode_row matches the binary-to-one-hot truth table") {
    for (uint8_t addr = 0; addr < 16; ++addr) {
        const uint16_t lines = decode_row(addr, true);
        // Independent check: line r active iff r equals the address.
        for (uint16_t r = 0; r < 16; ++r) {
            CHECK(((lines >> r) & 1u) == (r == addr ? 1u : 0u));
        }
    }
    CHECK(decode_row(0b0000, true) == 0x0001);
    CHECK(decode_row(0b0101, true) == 0x0020);
    CHECK(decode_row(0b1111, false) == 0);
}

TEST_CASE("decode_row is one-hot over all 32 address/enable cases") {
    for (uint8_t addr = 0; addr < 16; ++addr) {
        CHECK(std::popcount(decode_row(addr, true)) == 1);
        CHECK(std::popcount(decode_row(addr, false)) == 0);
    }
}

TEST_CASE("column gates follow the XOR/AND truth table") {
    // (mode, col) -> (set, reset)
    CHECK(column_gate(false, true).set_gate);
    CHECK_FALSE(column_gate(false, true).reset_gate);

    CHECK_FALSE(column_gate(true, true).set_gate);
    CHECK(column_gate(true, true).reset_gate);

    CHECK_FALSE(column_gate(false, false).set_gate);
    CHECK_FALSE(column_gate(false, false).reset_gate);

    // The hazardous corner: the set transistor opens during reset mode.
    CHECK(column_gate(true, false).set_gate);
    CHECK_FALSE(column_gate(true, false).reset_gate);
}

TEST_CASE("set and reset gates are never both open") {
    for (const bool mode : {false, true}) {
        for (const bool col : {false, true}) {
            const GatePair g = column_gate(mode, col);
            CHECK_FALSE((g.set_gate && g.reset_gate));
        }
    }
}

TEST_CASE("excite drives exactly the selected row and column") {
    const GridDims dims{16, 16};
    const PinState pins{.row_addr = 3, .row_enable = true, .mode = false, .col = 1u << 7};
    const CoilExcitation exc = excite(pins, dims);

    // Brute-force oracle over every cell.
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) {
            const Excite expected = (r == 3 && c == 7) ? Excite::Set : Excite::None;
            CHECK(exc.at(r, c) == expected);
        }
    }
}

TEST_CASE("excite with the decoder disabled drives nothing") {
    std::mt19937 rng(23);
    const GridDims dims{16, 16};
    for (int i = 0; i < 100; ++i) {
        PinState pins = random_pins(rng);
        pins.row_enable = false;
        const CoilExcitation exc = excite(pins, dims);
        for (const Excite e : exc.cells) CHECK(e == Excite::None);
    }
}

TEST_CASE("reset phase with all columns high resets the whole selected row") {
    const GridDims dims{16, 16};
    const PinState pins{.row_addr = 0, .row_enable = true, .mode = true, .col = 0xFFFF};
    const CoilExcitation exc = excite(pins, dims);
    for (uint16_t c = 0; c < 16; ++c) CHECK(exc.at(0, c) == Excite::Reset);
    for (uint16_t r = 1; r < 16; ++r) {
        for (uint16_t c = 0; c < 16; ++c) CHECK(exc.at(r, c) == Excite::None);
    }
}

TEST_CASE("row isolation: taxels outside the decoded row are never driven") {
    std::mt19937 rng(29);
    const GridDims dims{16, 16};
    for (int i = 0; i < 500; ++i) {
        const PinState pins = random_pins(rng);
        const uint16_t lines = decode_row(pins.row_addr, pins.row_enable);
        const CoilExcitation exc = excite(pins, dims);
        for (uint16_t r = 0; r < dims.rows; ++r) {
            if ((lines >> r) & 1u) continue;
            for (uint16_t c = 0; c < dims.cols; ++c) {
                CHECK(exc.at(r, c) == Excite::None);
            }
        }
    }
}

TEST_CASE("double coil drive is unreachable with the reference gates") {
    std::mt19937 rng(31);
    const GridDims dims{16, 16};
    for (int i = 0; i < 500; ++i) {
        const PinState pins = random_pins(rng);
        const DriveMatrix drives = drive_matrix(pins, dims);
        for (const CoilDrive& d : drives.cells) CHECK_FALSE((d.set && d.reset));
        for (const Hazard& h : scan_hazards(pins, drives, 0)) {
            CHECK(h.kind != HazardKind::DoubleCoilDrive);
            CHECK(h.kind != HazardKind::MultipleRowsSelected);
        }
    }
}

TEST_CASE("the mutated set gate does produce double drive, and the monitor sees it") {
    const GridDims dims{4, 4};
    const PinState pins{.row_addr = 1, .row_enable = true, .mode = true, .col = 0x000F};
    const DriveMatrix drives = drive_matrix(pins, dims, column_gate_set_and);
    const auto hazards = scan_hazards(pins, drives, 9);
    bool saw_double = false;
    for (const Hazard& h : hazards) {
        if (h.kind == HazardKind::DoubleCoilDrive) {
            saw_double = true;
            CHECK(h.step == 9);
            CHECK(h.coords.size() == 4);
        }
    }
    CHECK(saw_double);
}

TEST_CASE("hazard monitor flags low column bits during the reset phase") {
    const GridDims dims{16, 16};

    const PinState sanctioned{.row_addr = 5, .row_enable = true, .mode = true, .col = 0xFFFF};
    CHECK(scan_hazards(sanctioned, drive_matrix(sanctioned, dims), 0).empty());

    const PinState ghosting{
        .row_addr = 5, .row_enable = true, .mode = true, .col = uint16_t(~(1u << 2))};
    const auto hazards = scan_hazards(ghosting, drive_matrix(ghosting, dims), 3);
    REQUIRE(hazards.size() == 1);
    CHECK(hazards[0].kind == HazardKind::UnintendedSetDuringReset);
    CHECK(hazards[0].step == 3);
    REQUIRE(hazards[0].coords.size() == 1);
    CHECK(hazards[0].coords[0] == TaxelCoord{5, 2});
}

TEST_CASE("apply_pulse latches, counts and charges energy") {
    const PowerParams power{};  // 12 V, duty 1, 10 ms, 24 ohm -> 0.06 J
    const double joule = pulse_energy(power);

    GridState grid = new_grid({2, 2}, 20.0);
    EnergyLedger ledger;

    CoilExcitation exc{grid.dims, std::vector<Excite>(4, Excite::None)};
    exc.cells[0] = Excite::Set;
    apply_pulse(grid, exc, power, ledger);
    CHECK(grid.cell(0, 0).plunger == Plunger::Up);
    CHECK(grid.cell(0, 0).set_pulse_count == 1);
    CHECK(ledger.set_pulses == 1);
    CHECK(ledger.total_joules == doctest::Approx(joule).epsilon(1e-12));

    // None leaves a latched plunger and the ledger untouched.
    const EnergyLedger before = ledger;
    apply_pulse(grid, CoilExcitation{grid.dims, std::vector<Excite>(4, Excite::None)}, power,
                ledger);
    CHECK(grid.cell(0, 0).plunger == Plunger::Up);
    CHECK(ledger == before);

    // Re-pulsing an up plunger is mechanically idempotent but still costs a pulse.
    apply_pulse(grid, exc, power, ledger);
    CHECK(grid.cell(0, 0).plunger == Plunger::Up);
    CHECK(grid.cell(0, 0).set_pulse_count == 2);
    CHECK(ledger.set_pulses == 2);

    exc.cells[0] = Excite::Reset;
    apply_pulse(grid, exc, power, ledger);
    CHECK(grid.cell(0, 0).plunger == Plunger::Down);
    CHECK(grid.cell(0, 0).reset_pulse_count == 1);
    CHECK(ledger.reset_pulses == 1);

    CHECK(ledger.static_joules == 0.0);
}

TEST_CASE("apply_pulse rejects mismatched excitation dims") {
    GridState grid = new_grid({2, 2}, 20.0);
    EnergyLedger ledger;
    const CoilExcitation exc{{2, 3}, std::vector<Excite>(6, Excite::None)};
    CHECK_THROWS_AS(apply_pulse(grid, exc, PowerParams{}, ledger), std::invalid_argument);
}

TEST_CASE("latch persistence: None excitation never moves a plunger") {
    std::mt19937 rng(37);
    const GridDims dims{8, 8};
    GridState grid = new_grid(dims, 20.0);
    EnergyLedger ledger;
    const PowerParams power{};

    for (int step = 0; step < 200; ++step) {
        CoilExcitation exc{dims, std::vector<Excite>(dims.cell_count())};
        for (auto& e : exc.cells) {
            const int k = int(rng() % 8);
            e = k == 0 ? Excite::Set : (k == 1 ? Excite::Reset : Excite::None);
        }
        const GridState before = grid;
        apply_pulse(grid, exc, power, ledger);
        for (std::size_t i = 0; i < exc.cells.size(); ++i) {
            if (exc.cells[i] == Excite::None) {
                CHECK(grid.cells[i].plunger == before.cells[i].plunger);
                CHECK(grid.cells[i].set_pulse_count == before.cells[i].set_pulse_count);
            }
        }
    }
}

TEST_CASE("holding a latched grid consumes exactly zero energy") {
    GridState grid = new_grid({16, 16}, 20.0);
    grid.cell(2, 2).plunger = Plunger::Up;
    EnergyLedger ledger;
    const CoilExcitation idle{grid.dims, std::vector<Excite>(256, Excite::None)};
    for (int i = 0; i < 1000; ++i) apply_pulse(grid, idle, PowerParams{}, ledger);
    CHECK(ledger.total_joules == 0.0);
    CHECK(ledger.static_joules == 0.0);
    CHECK(ledger.set_pulses == 0);
}

TEST_CASE("pulse voltage follows U_DC / duty") {
    CHECK(pulse_voltage({.u_dc_v = 12.0, .duty = 1.0}) == 12.0);
    CHECK(pulse_voltage({.u_dc_v = 12.0, .duty = 0.5}) == 24.0);

    CHECK_THROWS_AS(pulse_voltage({.u_dc_v = 12.0, .duty = 0.0}), std::invalid_argument);
    CHECK_THROWS_AS(pulse_voltage({.u_dc_v = 12.0, .duty = -0.25}), std::invalid_argument);
    CHECK_THROWS_AS(pulse_voltage({.u_dc_v = 12.0, .duty = 1.5}), std::invalid_argument);
}

TEST_CASE("pulse voltage times duty recovers U_DC across the duty range") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> d(1e-6, 1.0);
    for (int i = 0; i < 1000; ++i) {
        PowerParams p{};
        p.duty = d(rng);
        const double err = std::abs(pulse_voltage(p) * p.duty - p.u_dc_v) / p.u_dc_v;
        CHECK(err <= 1e-12);
    }
}

TEST_CASE("pulse energy is U_P^2 / R * t") {
    const PowerParams p{
        .u_dc_v = 12.0, .duty = 0.5, .pulse_width_s = 0.01, .coil_resistance_ohm = 24.0};
    CHECK(pulse_energy(p) == doctest::Approx(0.24).epsilon(1e-12));  // 24^2/24 * 0.01

    PowerParams zero = p;
    zero.pulse_width_s = 0.0;
    CHECK_THROWS_AS(pulse_energy(zero), std::invalid_argument);

    PowerParams twice = p;
    twice.pulse_width_s = 2 * p.pulse_width_s;
    CHECK(pulse_energy(twice) == 2 * pulse_energy(p));
}

TEST_CASE("thermal step: equilibrium and pure decay") {
    const ThermalParams thermal{};
    SolenoidState cell{Plunger::Down, 20.0, 0, 0};
    thermal_step(cell, 0.0, 0.015, thermal);
    CHECK(cell.temperature_c == 20.0);  // at ambient, no input: unchanged

    cell.temperature_c = 45.0;
    double prev = cell.temperature_c;
    for (int i = 0; i < 100; ++i) {
        thermal_step(cell, 0.0, 0.015, thermal);
        CHECK(cell.temperature_c < prev);
        CHECK(cell.temperature_c >= thermal.ambient_c);
        prev = cell.temperature_c;
    }

    CHECK_THROWS_AS(thermal_step(cell, 0.0, 0.0, thermal), std::invalid_argument);
}

TEST_CASE("repeated pulses converge below the closed-form steady state") {
    // Fixed point of T' = T + cE - k(T - amb)dt is amb + cE/(k dt).
    const ThermalParams thermal{.c_per_joule = 5.0, .cooling_rate_per_s = 0.1, .ambient_c = 20.0};
    const double joules = 0.0006;  // small pulse each step
    const double dt = 0.015;
    const double fixed_point =
        thermal.ambient_c + thermal.c_per_joule * joules / (thermal.cooling_rate_per_s * dt);

    SolenoidState cell{Plunger::Up, thermal.ambient_c, 0, 0};
    double prev = cell.temperature_c;
    for (int i = 0; i < 20000; ++i) {
        thermal_step(cell, joules, dt, thermal);
        CHECK(cell.temperature_c >= prev);         // approach from below; the
        CHECK(cell.temperature_c <= fixed_point);  // increment rounds to zero
        prev = cell.temperature_c;                 // once converged
    }
    CHECK(cell.temperature_c == doctest::Approx(fixed_point).epsilon(1e-6));
}

TEST_CASE("press resets an up plunger only at or above the holding force") {
    const SolenoidSpec spec{};  // 500 g holding force
    SolenoidState up{Plunger::Up, 20.0, 3, 1};

    apply_press(up, 499.0, spec);
    CHECK(up.plunger == Plunger::Up);

    apply_press(up, 500.0, spec);
    CHECK(up.plunger == Plunger::Down);
    CHECK(up.set_pulse_count == 3);  // counters untouched
    CHECK(up.reset_pulse_count == 1);

    SolenoidState down{Plunger::Down, 20.0, 0, 0};
    apply_press(down, 10000.0, spec);
    CHECK(down.plunger == Plunger::Down);

    CHECK_THROWS_AS(apply_press(down, -1.0, spec), std::invalid_argument);
}

TEST_CASE("press below the threshold never changes any field") {
    std::mt19937 rng(43);
    std::uniform_real_distribution<double> force(0.0, 499.999);
    const SolenoidSpec spec{};
    for (int i = 0; i < 2000; ++i) {
        SolenoidState cell{(rng() & 1) ? Plunger::Up : Plunger::Down, 20.0 + double(rng() % 40),
                           uint32_t(rng() % 100), uint32_t(rng() % 100)};
        const SolenoidState before = cell;
        apply_press(cell, force(rng), spec);
        CHECK(cell == before);
    }
}

TEST_CASE("resource budget matches the scan-scheme accounting") {
    const ResourceBudget ref = resource_budget({16, 16});
    CHECK(ref.column_transistors == 32);
    CHECK(ref.row_transistors == 16);
    CHECK(ref.controller_pins == 21);
    CHECK(ref.naive_half_bridge == 512);
    CHECK(ref.naive_full_bridge == 1024);

    const ResourceBudget tiny = resource_budget({1, 1});
    CHECK(tiny.column_transistors == 2);
    CHECK(tiny.row_transistors == 1);
    CHECK(tiny.controller_pins == 6);
    CHECK(tiny.naive_half_bridge == 2);
    CHECK(tiny.naive_full_bridge == 4);

    const ResourceBudget small = resource_budget({4, 4});
    CHECK(small.column_transistors == 8);
    CHECK(small.row_transistors == 4);
    CHECK(small.controller_pins == 9);
    CHECK(small.naive_half_bridge == 32);
    CHECK(small.naive_full_bridge == 64);
}
