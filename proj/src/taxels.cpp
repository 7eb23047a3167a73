#include "taxsim/taxels.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace taxsim {

void GridDims::validate() const {
    if (!valid()) {
        throw std::invalid_argument("grid dims must have rows >= 1 and cols >= 1, got " +
                                    std::to_string(rows) + "x" + std::to_string(cols));
    }
}

Bitmap::Bitmap(GridDims dims) : dims_(dims) {
    dims.validate();
    bits_.assign(dims.cell_count(), 0);
}

std::size_t Bitmap::byte_size(GridDims dims) {
    return std::size_t{dims.rows} * ((dims.cols + 7u) / 8u);
}

Bitmap Bitmap::from_bytes(GridDims dims, std::span<const uint8_t> bytes) {
    Bitmap out(dims);
    if (bytes.size() != byte_size(dims)) {
        throw std::invalid_argument("bitmap byte payload has size " + std::to_string(bytes.size()) +
                                    ", expected " + std::to_string(byte_size(dims)));
    }
    const std::size_t row_bytes = (dims.cols + 7u) / 8u;
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) {
            const uint8_t byte = bytes[std::size_t{r} * row_bytes + c / 8u];
            out.set(r, c, (byte >> (7u - c % 8u)) & 1u);
        }
    }
    return out;
}

std::vector<uint8_t> Bitmap::to_bytes() const {
    const std::size_t row_bytes = (dims_.cols + 7u) / 8u;
    std::vector<uint8_t> out(byte_size(dims_), 0);
    for (uint16_t r = 0; r < dims_.rows; ++r) {
        for (uint16_t c = 0; c < dims_.cols; ++c) {
            if (get(r, c)) {
                out[std::size_t{r} * row_bytes + c / 8u] |= uint8_t(0x80u >> (c % 8u));
            }
        }
    }
    return out;
}

std::size_t Bitmap::popcount() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), uint8_t{1}));
}

bool Bitmap::row_any(uint16_t r) const {
    for (uint16_t c = 0; c < dims_.cols; ++c) {
        if (get(r, c)) return true;
    }
    return false;
}

uint16_t Bitmap::row_mask(uint16_t r) const {
    if (dims_.cols > 16) throw std::logic_error("row_mask requires cols <= 16");
    uint16_t mask = 0;
    for (uint16_t c = 0; c < dims_.cols; ++c) {
        if (get(r, c)) mask |= uint16_t(1u << c);
    }
    return mask;
}

void Bitmap::set_row_mask(uint16_t r, uint16_t mask) {
    if (dims_.cols > 16) throw std::logic_error("set_row_mask requires cols <= 16");
    for (uint16_t c = 0; c < dims_.cols; ++c) {
        set(r, c, (mask >> c) & 1u);
    }
}

Bitmap Bitmap::inverted() const {
    Bitmap out = *this;
    for (auto& b : out.bits_) b ^= 1u;
    return out;
}

std::size_t Bitmap::index(uint16_t r, uint16_t c) const {
    if (r >= dims_.rows || c >= dims_.cols) {
        throw std::out_of_range("taxel (" + std::to_string(r) + "," + std::to_string(c) +
                                ") outside " + std::to_string(dims_.rows) + "x" +
                                std::to_string(dims_.cols) + " grid");
    }
    return std::size_t{r} * dims_.cols + c;
}

void SolenoidSpec::validate() const {
    const bool ok = width_mm > 0 && depth_mm > 0 && height_mm > 0 && mass_g > 0 &&
                    holding_force_g > 0 && coil_resistance_ohm > 0 && nominal_dc_voltage_v > 0;
    if (!ok) throw std::invalid_argument("solenoid spec fields must all be strictly positive");
}

SolenoidState& GridState::cell(uint16_t r, uint16_t c) {
    return cells.at(std::size_t{r} * dims.cols + c);
}

const SolenoidState& GridState::cell(uint16_t r, uint16_t c) const {
    return cells.at(std::size_t{r} * dims.cols + c);
}

GridState new_grid(GridDims dims, double ambient_c) {
    dims.validate();
    GridState grid;
    grid.dims = dims;
    grid.cells.assign(dims.cell_count(), SolenoidState{Plunger::Down, ambient_c, 0, 0});
    return grid;
}

Bitmap snapshot(const GridState& grid) {
    Bitmap out(grid.dims);
    for (uint16_t r = 0; r < grid.dims.rows; ++r) {
        for (uint16_t c = 0; c < grid.dims.cols; ++c) {
            out.set(r, c, grid.cell(r, c).plunger == Plunger::Up);
        }
    }
    return out;
}

std::vector<TaxelCoord> bitmap_diff(const Bitmap& a, const Bitmap& b) {
    if (a.dims() != b.dims()) {
        throw std::invalid_argument("bitmap_diff requires equal dimensions");
    }
    std::vector<TaxelCoord> out;
    for (uint16_t r = 0; r < a.dims().rows; ++r) {
        for (uint16_t c = 0; c < a.dims().cols; ++c) {
            if (a.get(r, c) != b.get(r, c)) out.push_back({r, c});
        }
    }
    return out;
}

}  // namespace taxsim
