#pragma once
// Subcommand implementations shared by the command-line tool and the test
// suites. Each returns the process exit status.

#include "taxsim/config.hpp"
#include "taxsim/device.hpp"
#include "taxsim/raster.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

namespace taxsim::cli {

// Exit status contract.
inline constexpr int kExitOk = 0;
inline constexpr int kExitVerifyFail = 1;
inline constexpr int kExitInputError = 2;
inline constexpr int kExitHazard = 3;

struct RunStats {
    uint64_t set_pulses = 0;
    uint64_t reset_pulses = 0;
    double total_joules = 0.0;
    double max_temperature_c = 0.0;
    std::size_t hazard_count = 0;
    std::size_t steps = 0;
    double simulated_time_s = 0.0;
    ResourceBudget budget{};
};

RunStats collect_stats(const SimulatedDevice& device);
void print_stats(const RunStats& stats, std::ostream& out);

// Tab-separated trace, one line per waveform step:
//   step row_addr row_enable mode col_bits set reset joules hazards
void write_trace(const std::vector<TraceRecord>& trace, std::ostream& out);

enum class RasterMode { Threshold, Dither };

struct ShowArgs {
    std::string input_path;
    RasterMode mode = RasterMode::Threshold;
    int threshold = 128;
    bool invert = false;
    std::string trace_path;  // empty = no trace file
};

// Convert a loaded image to a frame for the given grid: exact-size
// bitmaps pass through, everything else is box-scaled and quantized.
Bitmap rasterize(const LoadedImage& image, GridDims target, const ShowArgs& args);

int cmd_show(const Config& config, const ShowArgs& args, std::ostream& out, std::ostream& err);
int cmd_text(const Config& config, std::string_view text, std::ostream& out, std::ostream& err);
int cmd_clear(const Config& config, std::ostream& out, std::ostream& err);

struct VerifyArgs {
    // Exhaustive sweep over every frame at these dims (at most 4x4), or
    // `random_frames` seeded random frames at the configured dims.
    std::optional<GridDims> exhaustive_dims;
    uint32_t random_frames = 1000;
    uint64_t seed = 20260810;
    bool mutate_set_gate_and = false;  // fault injection: prove the oracle bites
};

int cmd_verify(const Config& config, const VerifyArgs& args, std::ostream& out,
               std::ostream& err);

int cmd_budget(const Config& config, std::ostream& out);

// Frame whose row-major bit i equals bit i of `index`; enumerates every
// frame as index runs over [0, 2^(rows*cols)).
Bitmap frame_from_index(GridDims dims, uint64_t index);

}  // namespace taxsim::cli
