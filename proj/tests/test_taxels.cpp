#include "taxsim/taxels.hpp"

#include "doctest.h"

#include <random>
#include <stdexcept>

using namespace taxsim;

namespace {

Bitmap random_bitmap(std::mt19937& rng, GridDims dims) {
    Bitmap b(dims);
    std::uniform_int_distribution<int> coin(0, 1);
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) {
            b.set(r, c, coin(rng) == 1);
        }
    }
    return b;
}

}  // namespace

TEST_CASE("new_grid builds all-down cells at ambient") {
    const GridState grid = new_grid({16, 16}, 20.0);
    REQUIRE(grid.cells.size() == 256);
    for (const SolenoidState& cell : grid.cells) {
        CHECK(cell.plunger == Plunger::Down);
        CHECK(cell.temperature_c == 20.0);
        CHECK(cell.set_pulse_count == 0);
        CHECK(cell.reset_pulse_count == 0);
    }

    const GridState tiny = new_grid({1, 1}, 20.0);
    CHECK(tiny.cells.size() == 1);
    CHECK(tiny.cells[0].plunger == Plunger::Down);
}

TEST_CASE("new_grid rejects degenerate dims") {
    CHECK_THROWS_AS(new_grid({0, 16}, 20.0), std::invalid_argument);
    CHECK_THROWS_AS(new_grid({16, 0}, 20.0), std::invalid_argument);
    CHECK_THROWS_AS(Bitmap(GridDims{0, 0}), std::invalid_argument);
}

TEST_CASE("snapshot reads plunger positions") {
    GridState grid = new_grid({8, 8}, 20.0);
    CHECK_FALSE(snapshot(grid).any());

    grid.cell(3, 7).plunger = Plunger::Up;
    const Bitmap shot = snapshot(grid);
    CHECK(shot.popcount() == 1);
    CHECK(shot.get(3, 7));

    CHECK(snapshot(grid) == shot);  // pure read
}

TEST_CASE("snapshot of a fresh grid is all-false for random dims") {
    std::mt19937 rng(7);
    std::uniform_int_distribution<int> d(1, 16);
    for (int i = 0; i < 50; ++i) {
        const GridDims dims{uint16_t(d(rng)), uint16_t(d(rng))};
        CHECK_FALSE(snapshot(new_grid(dims, 25.0)).any());
    }
}

TEST_CASE("bitmap_diff finds exactly the differing coordinates") {
    Bitmap a(GridDims{2, 2});
    CHECK(bitmap_diff(a, a).empty());

    Bitmap b = a;
    b.set(1, 0, true);
    const auto diff = bitmap_diff(a, b);
    REQUIRE(diff.size() == 1);
    CHECK(diff[0] == TaxelCoord{1, 0});
}

TEST_CASE("bitmap_diff against the complement covers every cell") {
    std::mt19937 rng(11);
    const GridDims dims{4, 4};
    const Bitmap a = random_bitmap(rng, dims);
    const auto diff = bitmap_diff(a, a.inverted());

    // Independent enumeration of all cells in row-major order.
    std::vector<TaxelCoord> all;
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) all.push_back({r, c});
    }
    CHECK(diff == all);
}

TEST_CASE("bitmap_diff rejects mismatched dims and is symmetric") {
    CHECK_THROWS_AS(bitmap_diff(Bitmap(GridDims{2, 2}), Bitmap(GridDims{2, 3})),
                    std::invalid_argument);

    std::mt19937 rng(13);
    for (int i = 0; i < 30; ++i) {
        const GridDims dims{uint16_t(1 + rng() % 16), uint16_t(1 + rng() % 16)};
        const Bitmap a = random_bitmap(rng, dims);
        const Bitmap b = random_bitmap(rng, dims);
        CHECK(bitmap_diff(a, b) == bitmap_diff(b, a));  // already row-major sorted
    }
}

TEST_CASE("canonical serialization puts column 0 in the most significant bit") {
    Bitmap b(GridDims{16, 16});
    CHECK(Bitmap::byte_size(b.dims()) == 32);

    b.set(0, 0, true);
    b.set(0, 7, true);
    b.set(0, 8, true);
    b.set(15, 15, true);
    const auto bytes = b.to_bytes();
    REQUIRE(bytes.size() == 32);
    CHECK(bytes[0] == 0x81);   // cols 0 and 7
    CHECK(bytes[1] == 0x80);   // col 8
    CHECK(bytes[31] == 0x01);  // col 15 of row 15

    // Narrow rows still occupy whole bytes, left-aligned.
    Bitmap narrow(GridDims{2, 5});
    narrow.set(0, 0, true);
    narrow.set(1, 4, true);
    const auto nb = narrow.to_bytes();
    REQUIRE(nb.size() == 2);
    CHECK(nb[0] == 0x80);
    CHECK(nb[1] == 0x08);
}

TEST_CASE("serialization round-trips for random bitmaps up to 16x16") {
    std::mt19937 rng(17);
    std::uniform_int_distribution<int> d(1, 16);
    for (int i = 0; i < 200; ++i) {
        const GridDims dims{uint16_t(d(rng)), uint16_t(d(rng))};
        const Bitmap b = random_bitmap(rng, dims);
        CHECK(Bitmap::from_bytes(dims, b.to_bytes()) == b);
    }
}

TEST_CASE("from_bytes rejects wrong payload sizes") {
    const std::vector<uint8_t> bytes(31, 0);
    CHECK_THROWS_AS(Bitmap::from_bytes(GridDims{16, 16}, bytes), std::invalid_argument);
}

TEST_CASE("row masks use the column-port bit order") {
    Bitmap b(GridDims{2, 16});
    b.set(0, 9, true);
    CHECK(b.row_mask(0) == 0x0200);
    CHECK(b.row_mask(1) == 0x0000);

    b.set_row_mask(1, 0x8001);
    CHECK(b.get(1, 0));
    CHECK(b.get(1, 15));
    CHECK(b.row_any(1));
}

TEST_CASE("solenoid spec defaults to the SC0323L-class part") {
    const SolenoidSpec spec;
    CHECK(spec.width_mm == 7.0);
    CHECK(spec.depth_mm == 8.4);
    CHECK(spec.height_mm == 23.0);
    CHECK(spec.mass_g == 6.0);
    CHECK(spec.holding_force_g == 500.0);
    CHECK(spec.coil_resistance_ohm == 24.0);
    CHECK(spec.nominal_dc_voltage_v == 12.0);
    CHECK_NOTHROW(spec.validate());
}

TEST_CASE("solenoid spec validation requires positive fields") {
    SolenoidSpec spec;
    CHECK_NOTHROW(spec.validate());
    spec.holding_force_g = 0;
    CHECK_THROWS_AS(spec.validate(), std::invalid_argument);
}
