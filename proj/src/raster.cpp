#include "taxsim/raster.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>
#include <string>

namespace taxsim {

namespace {

// Token-level reader over the anymap header and ASCII payloads. '#'
// starts a comment running to end of line.
struct PnmReader {
    std::span<const uint8_t> data;
    std::size_t pos = 0;

    bool eof() const { return pos >= data.size(); }

    void skip_space_and_comments() {
        while (!eof()) {
            const uint8_t c = data[pos];
            if (c == '#') {
                while (!eof() && data[pos] != '\n') ++pos;
            } else if (std::isspace(c)) {
                ++pos;
            } else {
                break;
            }
        }
    }

    uint32_t read_uint(const char* what) {
        skip_space_and_comments();
        if (eof() || !std::isdigit(data[pos])) {
            throw PnmError(std::string("expected ") + what + " in anymap header");
        }
        uint64_t value = 0;
        while (!eof() && std::isdigit(data[pos])) {
            value = value * 10 + (data[pos] - '0');
            if (value > 0xFFFFFFFFull) throw PnmError(std::string(what) + " out of range");
            ++pos;
        }
        return static_cast<uint32_t>(value);
    }

    // P1 pixel stream: bits may be packed without separators.
    uint8_t read_p1_bit() {
        skip_space_and_comments();
        if (eof()) throw PnmError("truncated P1 pixel data");
        const uint8_t c = data[pos++];
        if (c != '0' && c != '1') throw PnmError("P1 pixel must be 0 or 1");
        return uint8_t(c - '0');
    }
};

Bitmap load_pbm_ascii(PnmReader& rd, GridDims dims) {
    Bitmap out(dims);
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) {
            out.set(r, c, rd.read_p1_bit() == 1);  // 1 = black = raised
        }
    }
    return out;
}

Bitmap load_pbm_binary(PnmReader& rd, GridDims dims) {
    // Header ends with exactly one whitespace byte before the raster.
    if (rd.eof() || !std::isspace(rd.data[rd.pos])) throw PnmError("malformed P4 header");
    ++rd.pos;
    const std::size_t row_bytes = (dims.cols + 7u) / 8u;
    const std::size_t need = row_bytes * dims.rows;
    if (rd.data.size() - rd.pos < need) throw PnmError("truncated P4 pixel data");
    Bitmap out = Bitmap::from_bytes(dims, rd.data.subspan(rd.pos, need));
    rd.pos += need;
    return out;  // packed MSB-first, same as the canonical frame order
}

GrayImage load_pgm(PnmReader& rd, uint32_t width, uint32_t height, bool binary) {
    const uint32_t maxval = rd.read_uint("maxval");
    if (maxval == 0 || maxval > 255) {
        throw PnmError("unsupported graymap maxval " + std::to_string(maxval) +
                       " (1..255 supported)");
    }
    GrayImage img{width, height, {}};
    img.pixels.reserve(std::size_t{width} * height);
    if (binary) {
        if (rd.eof() || !std::isspace(rd.data[rd.pos])) throw PnmError("malformed P5 header");
        ++rd.pos;
        const std::size_t need = std::size_t{width} * height;
        if (rd.data.size() - rd.pos < need) throw PnmError("truncated P5 pixel data");
        for (std::size_t i = 0; i < need; ++i) {
            const uint32_t v = rd.data[rd.pos + i];
            if (v > maxval) throw PnmError("P5 sample exceeds maxval");
            img.pixels.push_back(uint8_t((v * 255u + maxval / 2u) / maxval));
        }
        rd.pos += need;
    } else {
        for (std::size_t i = 0; i < std::size_t{width} * height; ++i) {
            const uint32_t v = rd.read_uint("P2 sample");
            if (v > maxval) throw PnmError("P2 sample exceeds maxval");
            img.pixels.push_back(uint8_t((v * 255u + maxval / 2u) / maxval));
        }
    }
    return img;
}

// Standard 4x4 Bayer index matrix.
constexpr int kBayer4[4][4] = {
    {0, 8, 2, 10},
    {12, 4, 14, 6},
    {3, 11, 1, 9},
    {15, 7, 13, 5},
};

// 6-dot cells for a-z, bit i = dot i+1.
constexpr std::array<uint8_t, 26> kBrailleLetters = {
    0b000001,  // a
    0b000011,  // b
    0b001001,  // c
    0b011001,  // d
    0b010001,  // e
    0b001011,  // f
    0b011011,  // g
    0b010011,  // h
    0b001010,  // i
    0b011010,  // j
    0b000101,  // k
    0b000111,  // l
    0b001101,  // m
    0b011101,  // n
    0b010101,  // o
    0b001111,  // p
    0b011111,  // q
    0b010111,  // r
    0b001110,  // s
    0b011110,  // t
    0b100101,  // u
    0b100111,  // v
    0b111010,  // w
    0b101101,  // x
    0b111101,  // y
    0b110101,  // z
};

// Digits 1..9,0 reuse the a..j patterns behind a number sign.
uint8_t digit_cell(char d) {
    const int i = d == '0' ? 9 : d - '1';
    return kBrailleLetters[static_cast<std::size_t>(i)];
}

void stamp_cell(Bitmap& frame, uint16_t top, uint16_t left, uint8_t mask) {
    for (int dot = 0; dot < 6; ++dot) {
        if (!((mask >> dot) & 1)) continue;
        const uint16_t r = uint16_t(top + dot % 3);
        const uint16_t c = uint16_t(left + dot / 3);
        frame.set(r, c, true);
    }
}

}  // namespace

LoadedImage load_pnm(std::span<const uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P') throw PnmError("not a portable anymap");
    const char magic = static_cast<char>(bytes[1]);
    PnmReader rd{bytes, 2};

    switch (magic) {
        case '1':
        case '4': {
            const uint32_t width = rd.read_uint("width");
            const uint32_t height = rd.read_uint("height");
            if (width == 0 || height == 0 || width > 0xFFFF || height > 0xFFFF) {
                throw PnmError("unsupported bitmap size");
            }
            const GridDims dims{uint16_t(height), uint16_t(width)};
            return magic == '1' ? load_pbm_ascii(rd, dims) : load_pbm_binary(rd, dims);
        }
        case '2':
        case '5': {
            const uint32_t width = rd.read_uint("width");
            const uint32_t height = rd.read_uint("height");
            if (width == 0 || height == 0) throw PnmError("unsupported graymap size");
            return load_pgm(rd, width, height, magic == '5');
        }
        default:
            throw PnmError(std::string("unsupported anymap magic P") + magic);
    }
}

GrayImage to_gray(const Bitmap& frame) {
    GrayImage img{frame.dims().cols, frame.dims().rows, {}};
    img.pixels.reserve(frame.dims().cell_count());
    for (uint16_t r = 0; r < frame.dims().rows; ++r) {
        for (uint16_t c = 0; c < frame.dims().cols; ++c) {
            img.pixels.push_back(frame.get(r, c) ? 0 : 255);
        }
    }
    return img;
}

GrayImage invert(const GrayImage& img) {
    GrayImage out = img;
    for (auto& p : out.pixels) p = uint8_t(255 - p);
    return out;
}

GrayImage box_scale(const GrayImage& img, GridDims target) {
    target.validate();
    if (img.width == 0 || img.height == 0) throw std::invalid_argument("empty source image");

    GrayImage out{target.cols, target.rows, {}};
    out.pixels.reserve(target.cell_count());

    const double row_ratio = double(img.height) / target.rows;
    const double col_ratio = double(img.width) / target.cols;

    for (uint16_t tr = 0; tr < target.rows; ++tr) {
        const double r0 = tr * row_ratio;
        const double r1 = (tr + 1) * row_ratio;
        for (uint16_t tc = 0; tc < target.cols; ++tc) {
            const double c0 = tc * col_ratio;
            const double c1 = (tc + 1) * col_ratio;

            double weighted = 0.0;
            double area = 0.0;
            const auto sr0 = static_cast<uint32_t>(std::floor(r0));
            const auto sc0 = static_cast<uint32_t>(std::floor(c0));
            for (uint32_t sr = sr0; sr < img.height && double(sr) < r1; ++sr) {
                const double rh = std::min(r1, double(sr + 1)) - std::max(r0, double(sr));
                if (rh <= 0) continue;
                for (uint32_t sc = sc0; sc < img.width && double(sc) < c1; ++sc) {
                    const double cw = std::min(c1, double(sc + 1)) - std::max(c0, double(sc));
                    if (cw <= 0) continue;
                    weighted += rh * cw * img.at(sr, sc);
                    area += rh * cw;
                }
            }
            const double mean = area > 0 ? weighted / area : 0.0;
            out.pixels.push_back(uint8_t(std::lround(mean)));
        }
    }
    return out;
}

Bitmap threshold(const GrayImage& img, int t) {
    if (t < 0 || t > 255) throw std::invalid_argument("threshold must lie in [0,255]");
    if (img.width > 0xFFFF || img.height > 0xFFFF) {
        throw std::invalid_argument("image too large for a taxel frame");
    }
    Bitmap out(GridDims{uint16_t(img.height), uint16_t(img.width)});
    for (uint32_t r = 0; r < img.height; ++r) {
        for (uint32_t c = 0; c < img.width; ++c) {
            out.set(uint16_t(r), uint16_t(c), img.at(r, c) < t);
        }
    }
    return out;
}

Bitmap ordered_dither(const GrayImage& img) {
    if (img.width > 0xFFFF || img.height > 0xFFFF) {
        throw std::invalid_argument("image too large for a taxel frame");
    }
    Bitmap out(GridDims{uint16_t(img.height), uint16_t(img.width)});
    for (uint32_t r = 0; r < img.height; ++r) {
        for (uint32_t c = 0; c < img.width; ++c) {
            const int cutoff = 16 * kBayer4[r % 4][c % 4] + 8;  // (bayer + 0.5) / 16 * 256
            out.set(uint16_t(r), uint16_t(c), img.at(r, c) < cutoff);
        }
    }
    return out;
}

uint8_t braille_cell(char c) {
    if (c >= 'a' && c <= 'z') return kBrailleLetters[static_cast<std::size_t>(c - 'a')];
    if (c == ' ') return 0;
    throw std::invalid_argument(std::string("no braille cell for character '") + c + "'");
}

BrailleRender render_braille(std::string_view text, GridDims dims, CellPitch pitch) {
    dims.validate();
    if (pitch.rows < 3 || pitch.cols < 2) {
        throw std::invalid_argument("cell pitch must fit a 3x2 dot block");
    }

    // A slot is usable when its full 3x2 dot block lies on the grid.
    const uint16_t cells_per_row = dims.cols >= 2 ? uint16_t((dims.cols - 2) / pitch.cols + 1) : 0;
    const uint16_t cell_rows = dims.rows >= 3 ? uint16_t((dims.rows - 3) / pitch.rows + 1) : 0;
    const std::size_t capacity = std::size_t{cells_per_row} * cell_rows;

    BrailleRender out{Bitmap(dims), 0};
    std::size_t used = 0;
    bool digit_run = false;
    bool full = false;

    for (char raw : text) {
        const char c = static_cast<char>(std::tolower(static_cast<unsigned char>(raw)));
        const bool is_digit = c >= '0' && c <= '9';
        if (!is_digit && !(c >= 'a' && c <= 'z') && c != ' ') {
            throw std::invalid_argument(std::string("unsupported character '") + raw +
                                        "' for braille rendering");
        }

        std::size_t cells_needed = 1;
        if (is_digit && !digit_run) cells_needed = 2;  // number sign + digit

        if (full || used + cells_needed > capacity) {
            full = true;  // rendering stops at the first character that does not fit
            out.truncated_chars += 1;
            continue;
        }

        if (is_digit && !digit_run) {
            const uint16_t slot = uint16_t(used);
            stamp_cell(out.frame, uint16_t(slot / cells_per_row * pitch.rows),
                       uint16_t(slot % cells_per_row * pitch.cols), kBrailleNumberSign);
            ++used;
        }
        digit_run = is_digit;

        const uint8_t mask = is_digit ? digit_cell(c) : braille_cell(c);
        const uint16_t slot = uint16_t(used);
        stamp_cell(out.frame, uint16_t(slot / cells_per_row * pitch.rows),
                   uint16_t(slot % cells_per_row * pitch.cols), mask);
        ++used;
    }
    return out;
}

}  // namespace taxsim
