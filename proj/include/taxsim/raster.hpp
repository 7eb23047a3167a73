#pragma once
// Host-side rasterization: portable anymap input (P1/P2/P4/P5), box
// scaling, threshold and ordered dither, and 6-dot Braille text layout.
// Polarity convention throughout: dark = raised.

#include "taxsim/taxels.hpp"

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <variant>
#include <vector>

namespace taxsim {

struct GrayImage {
    uint32_t width = 0;
    uint32_t height = 0;
    std::vector<uint8_t> pixels;  // row-major intensities, 0 = black

    uint8_t at(uint32_t r, uint32_t c) const { return pixels[std::size_t{r} * width + c]; }
    bool operator==(const GrayImage&) const = default;
};

struct PnmError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using LoadedImage = std::variant<Bitmap, GrayImage>;

// P1/P4 yield a Bitmap (PBM 1 = black = raised); P2/P5 yield a GrayImage
// rescaled to [0,255]. Throws PnmError on malformed or truncated input and
// on unsupported magic numbers.
LoadedImage load_pnm(std::span<const uint8_t> bytes);

// Bitmap as intensities: raised -> 0 (black), clear -> 255.
GrayImage to_gray(const Bitmap& frame);

GrayImage invert(const GrayImage& img);

// Area-weighted mean resample to target.rows x target.cols, rounded to
// nearest. Exact for integer scale factors.
GrayImage box_scale(const GrayImage& img, GridDims target);

// bit = pixel < t; darker than the threshold raises the taxel. t in [0,255].
Bitmap threshold(const GrayImage& img, int t);

// 4x4 Bayer matrix tiled over the image; bit = pixel < 16*bayer + 8.
Bitmap ordered_dither(const GrayImage& img);

// Dot mask for one character, bit i = dot i+1 of the standard 6-dot cell
// (dots 1-3 down the left column, 4-6 down the right). Letters a-z and
// space only; digits are composed with the number sign by render_braille.
// Throws std::invalid_argument for anything else.
uint8_t braille_cell(char c);

inline constexpr uint8_t kBrailleNumberSign = 0x3C;  // dots 3,4,5,6

struct CellPitch {
    uint16_t rows = 4;  // 3 dot rows + 1 spacing row
    uint16_t cols = 3;  // 2 dot columns + 1 spacing column
};

struct BrailleRender {
    Bitmap frame;
    std::size_t truncated_chars = 0;  // input characters that did not fit
};

// Lay cells out left to right, wrapping to the next cell row; each cell's
// 3x2 dot block sits at the top-left of its pitch slot. Accepts letters,
// digits and spaces; input is lowercase-folded. Digits get a number-sign
// cell at the start of every digit run.
BrailleRender render_braille(std::string_view text, GridDims dims, CellPitch pitch = {});

}  // namespace taxsim
