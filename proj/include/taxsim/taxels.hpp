#pragma once
// Core domain types shared by every other module: grid geometry, boolean
// frames, the solenoid physical spec and the per-taxel display state.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace taxsim {

struct GridDims {
    uint16_t rows = 0;
    uint16_t cols = 0;

    bool valid() const { return rows >= 1 && cols >= 1; }
    std::size_t cell_count() const { return std::size_t{rows} * cols; }
    void validate() const;  // throws std::invalid_argument on zero rows/cols

    bool operator==(const GridDims&) const = default;
};

// Reference configuration: 16x16 taxels on one 16-bit column port.
inline constexpr GridDims kReferenceDims{16, 16};

struct TaxelCoord {
    uint16_t row = 0;
    uint16_t col = 0;
    auto operator<=>(const TaxelCoord&) const = default;
};

// Row-major boolean frame; true = taxel raised (plunger up). Row 0 is the
// top physical row, column 0 the leftmost.
class Bitmap {
public:
    Bitmap() = default;
    explicit Bitmap(GridDims dims);

    // Canonical byte form: ceil(cols/8) bytes per row, most-significant bit
    // is the lowest column index, rows concatenated top to bottom.
    static Bitmap from_bytes(GridDims dims, std::span<const uint8_t> bytes);
    std::vector<uint8_t> to_bytes() const;
    static std::size_t byte_size(GridDims dims);

    GridDims dims() const { return dims_; }
    bool get(uint16_t r, uint16_t c) const { return bits_[index(r, c)] != 0; }
    void set(uint16_t r, uint16_t c, bool v) { bits_[index(r, c)] = v ? 1 : 0; }

    std::size_t popcount() const;
    bool any() const { return popcount() > 0; }
    bool row_any(uint16_t r) const;

    // Column-port view of one row: bit c = column c. Requires cols <= 16.
    uint16_t row_mask(uint16_t r) const;
    void set_row_mask(uint16_t r, uint16_t mask);

    Bitmap inverted() const;

    bool operator==(const Bitmap&) const = default;

private:
    std::size_t index(uint16_t r, uint16_t c) const;

    GridDims dims_{};
    std::vector<uint8_t> bits_;  // one byte per cell, 0 or 1
};

struct SolenoidSpec {
    double width_mm = 7.0;
    double depth_mm = 8.4;
    double height_mm = 23.0;
    double mass_g = 6.0;
    double holding_force_g = 500.0;
    double coil_resistance_ohm = 24.0;
    double nominal_dc_voltage_v = 12.0;

    void validate() const;  // all fields strictly positive
};

enum class Plunger : uint8_t { Down = 0, Up = 1 };

// One bi-stable solenoid. The plunger is always latched in one of the two
// positions between pulses; there is no floating state.
struct SolenoidState {
    Plunger plunger = Plunger::Down;
    double temperature_c = 20.0;
    uint32_t set_pulse_count = 0;
    uint32_t reset_pulse_count = 0;

    bool operator==(const SolenoidState&) const = default;
};

struct GridState {
    GridDims dims{};
    std::vector<SolenoidState> cells;  // row-major

    SolenoidState& cell(uint16_t r, uint16_t c);
    const SolenoidState& cell(uint16_t r, uint16_t c) const;
};

// Fresh grid: every plunger down, every cell at ambient, zero counters.
GridState new_grid(GridDims dims, double ambient_c);

// Readback: bit (r,c) set iff the plunger at (r,c) is up.
Bitmap snapshot(const GridState& grid);

// Coordinates where the two frames differ, sorted row-major.
// Throws std::invalid_argument on dimension mismatch.
std::vector<TaxelCoord> bitmap_diff(const Bitmap& a, const Bitmap& b);

}  // namespace taxsim
