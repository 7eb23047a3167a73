#include "taxsim/cli_ops.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

namespace taxsim::cli {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

std::string fmt_coords(const std::vector<TaxelCoord>& coords) {
    if (coords.empty()) return "-";
    std::string out;
    for (const TaxelCoord& t : coords) {
        if (!out.empty()) out += ';';
        out += '(' + std::to_string(t.row) + ',' + std::to_string(t.col) + ')';
    }
    return out;
}

std::string fmt_hazards(const std::vector<Hazard>& hazards) {
    if (hazards.empty()) return "-";
    std::string out;
    for (const Hazard& h : hazards) {
        if (!out.empty()) out += '|';
        out += to_string(h.kind);
        out += ':';
        out += fmt_coords(h.coords);
    }
    return out;
}

std::vector<uint8_t> read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                               std::istreambuf_iterator<char>());
    return bytes;
}

// Shows one frame on a freshly built device and verifies the readback.
int show_frame(const Config& config, const Bitmap& frame, const std::string& trace_path,
               std::ostream& out, std::ostream& err) {
    SimulatedDevice device(config);
    const Response resp = loopback_send(device, ShowCmd{frame});

    if (std::holds_alternative<NakResp>(resp)) {
        const auto reason = std::get<NakResp>(resp).reason;
        if (reason == static_cast<uint8_t>(NakReason::HazardAbort)) {
            err << "scan aborted: hazard under strict mode\n";
            print_stats(collect_stats(device), out);
            return kExitHazard;
        }
        err << "display rejected the frame (nak reason " << int(reason) << ")\n";
        return kExitInputError;
    }

    const Bitmap shown = snapshot(device.grid());
    const RunStats stats = collect_stats(device);

    if (!trace_path.empty()) {
        std::ofstream trace_out(trace_path, std::ios::binary);
        if (!trace_out) {
            err << "cannot write trace file '" << trace_path << "'\n";
            return kExitInputError;
        }
        write_trace(device.trace(), trace_out);
    }

    if (shown != frame) {
        const auto diff = bitmap_diff(shown, frame);
        err << "displayed frame differs from the intended frame at " << diff.size()
            << " taxel(s), first at (" << diff.front().row << "," << diff.front().col << ")\n";
        return kExitVerifyFail;
    }

    print_stats(stats, out);
    if (config.strict_hazards && stats.hazard_count > 0) return kExitHazard;
    return kExitOk;
}

}  // namespace

RunStats collect_stats(const SimulatedDevice& device) {
    RunStats s;
    s.set_pulses = device.ledger().set_pulses;
    s.reset_pulses = device.ledger().reset_pulses;
    s.total_joules = device.ledger().total_joules;
    s.max_temperature_c = device.max_temperature_c();
    s.hazard_count = device.hazards().size();
    s.steps = device.steps_run();
    s.simulated_time_s = device.simulated_time_s();
    s.budget = resource_budget(device.config().dims);
    return s;
}

void print_stats(const RunStats& s, std::ostream& out) {
    out << "set_pulses=" << s.set_pulses << '\n'
        << "reset_pulses=" << s.reset_pulses << '\n'
        << "total_joules=" << fmt_double(s.total_joules) << '\n'
        << "max_temperature_c=" << fmt_double(s.max_temperature_c) << '\n'
        << "hazard_count=" << s.hazard_count << '\n'
        << "steps=" << s.steps << '\n'
        << "simulated_time_s=" << fmt_double(s.simulated_time_s) << '\n'
        << "budget.column_transistors=" << s.budget.column_transistors << '\n'
        << "budget.row_transistors=" << s.budget.row_transistors << '\n'
        << "budget.controller_pins=" << s.budget.controller_pins << '\n'
        << "budget.naive_half_bridge=" << s.budget.naive_half_bridge << '\n'
        << "budget.naive_full_bridge=" << s.budget.naive_full_bridge << '\n';
}

void write_trace(const std::vector<TraceRecord>& trace, std::ostream& out) {
    out << "# step\trow_addr\trow_enable\tmode\tcol_bits\tset\treset\tjoules\thazards\n";
    char col_hex[8];
    for (const TraceRecord& r : trace) {
        std::snprintf(col_hex, sizeof col_hex, "%04x", r.pins.col);
        out << r.step << '\t' << int(r.pins.row_addr) << '\t' << int(r.pins.row_enable) << '\t'
            << int(r.pins.mode) << '\t' << col_hex << '\t' << fmt_coords(r.set_coords) << '\t'
            << fmt_coords(r.reset_coords) << '\t' << fmt_double(r.joules) << '\t'
            << fmt_hazards(r.hazards) << '\n';
    }
}

Bitmap rasterize(const LoadedImage& image, GridDims target, const ShowArgs& args) {
    GrayImage gray;
    if (std::holds_alternative<Bitmap>(image)) {
        const Bitmap& bits = std::get<Bitmap>(image);
        Bitmap oriented = args.invert ? bits.inverted() : bits;
        if (oriented.dims() == target) return oriented;  // exact frame, no resample
        gray = to_gray(oriented);
    } else {
        gray = std::get<GrayImage>(image);
        if (args.invert) gray = invert(gray);
    }
    if (gray.height != target.rows || gray.width != target.cols) {
        gray = box_scale(gray, target);
    }
    return args.mode == RasterMode::Dither ? ordered_dither(gray)
                                           : threshold(gray, args.threshold);
}

int cmd_show(const Config& config, const ShowArgs& args, std::ostream& out, std::ostream& err) {
    Bitmap frame;
    try {
        const std::vector<uint8_t> bytes = read_file(args.input_path);
        frame = rasterize(load_pnm(bytes), config.dims, args);
    } catch (const std::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    }
    return show_frame(config, frame, args.trace_path, out, err);
}

int cmd_text(const Config& config, std::string_view text, std::ostream& out, std::ostream& err) {
    BrailleRender render;
    try {
        render = render_braille(text, config.dims);
    } catch (const std::exception& e) {
        err << "input error: " << e.what() << '\n';
        return kExitInputError;
    }
    if (render.truncated_chars > 0) {
        err << "warning: " << render.truncated_chars
            << " character(s) did not fit on the display\n";
    }
    out << "truncated_chars=" << render.truncated_chars << '\n';
    return show_frame(config, render.frame, {}, out, err);
}

int cmd_clear(const Config& config, std::ostream& out, std::ostream& err) {
    SimulatedDevice device(config);
    const Response resp = loopback_send(device, ClearCmd{});
    if (std::holds_alternative<NakResp>(resp)) {
        err << "scan aborted: hazard under strict mode\n";
        return kExitHazard;
    }
    if (snapshot(device.grid()).any()) {
        err << "display not clear after reset scan\n";
        return kExitVerifyFail;
    }
    print_stats(collect_stats(device), out);
    return kExitOk;
}

Bitmap frame_from_index(GridDims dims, uint64_t index) {
    Bitmap frame(dims);
    for (uint16_t r = 0; r < dims.rows; ++r) {
        for (uint16_t c = 0; c < dims.cols; ++c) {
            const std::size_t bit = std::size_t{r} * dims.cols + c;
            frame.set(r, c, (index >> bit) & 1u);
        }
    }
    return frame;
}

namespace {

struct FrameCheck {
    bool ok = true;
    std::string detail;
};

// One oracle round: SHOW the frame, compare the physical readback bit for
// bit, then CLEAR and require an all-down grid; any hazard fails.
FrameCheck check_frame(SimulatedDevice& device, const Bitmap& frame, bool clear_after) {
    FrameCheck res;
    const std::size_t hazards_before = device.hazards().size();

    const Response shown = loopback_send(device, ShowCmd{frame});
    if (!std::holds_alternative<AckResp>(shown)) {
        res.ok = false;
        res.detail = "show command was not acknowledged";
        return res;
    }
    const Bitmap got = snapshot(device.grid());
    if (got != frame) {
        const auto diff = bitmap_diff(got, frame);
        res.ok = false;
        res.detail = "readback differs at " + std::to_string(diff.size()) +
                     " taxel(s), first (" + std::to_string(diff.front().row) + "," +
                     std::to_string(diff.front().col) + ")";
        return res;
    }

    if (clear_after) {
        const Response cleared = loopback_send(device, ClearCmd{});
        if (!std::holds_alternative<AckResp>(cleared)) {
            res.ok = false;
            res.detail = "clear command was not acknowledged";
            return res;
        }
        if (snapshot(device.grid()).any()) {
            res.ok = false;
            res.detail = "grid not all-down after clear";
            return res;
        }
    }

    if (device.hazards().size() != hazards_before) {
        res.ok = false;
        res.detail = "scan produced " +
                     std::to_string(device.hazards().size() - hazards_before) + " hazard(s)";
    }
    return res;
}

}  // namespace

int cmd_verify(const Config& config, const VerifyArgs& args, std::ostream& out,
               std::ostream& err) {
    const GateFn gate = args.mutate_set_gate_and ? column_gate_set_and : column_gate;

    uint64_t checked = 0;
    uint64_t failures = 0;
    std::string first_failure;

    auto record_failure = [&](uint64_t index, const Bitmap& frame, const std::string& detail) {
        if (failures == 0) {
            std::ostringstream ss;
            ss << "frame " << index << ": " << detail << "\n";
            const auto bytes = frame.to_bytes();
            ss << "frame bytes:";
            char hex[4];
            for (uint8_t b : bytes) {
                std::snprintf(hex, sizeof hex, " %02x", b);
                ss << hex;
            }
            first_failure = ss.str();
        }
        ++failures;
    };

    if (args.exhaustive_dims) {
        const GridDims dims = *args.exhaustive_dims;
        if (!dims.valid() || dims.rows > 4 || dims.cols > 4) {
            err << "exhaustive verification is limited to grids up to 4x4\n";
            return kExitInputError;
        }
        Config cfg = config;
        cfg.dims = dims;
        const uint64_t total = uint64_t{1} << dims.cell_count();
        for (uint64_t index = 0; index < total; ++index) {
            const Bitmap frame = frame_from_index(dims, index);
            SimulatedDevice device(cfg, gate);  // fresh boot per frame
            const FrameCheck res = check_frame(device, frame, /*clear_after=*/true);
            ++checked;
            if (!res.ok) record_failure(index, frame, res.detail);
        }
        out << "exhaustive " << dims.rows << "x" << dims.cols << ": " << checked
            << " frames, " << failures << " failure(s)\n";
    } else {
        // Sequential random frames on one device: every SHOW after the
        // first exercises the clear-then-show chain.
        SimulatedDevice device(config, gate);
        std::mt19937_64 rng(args.seed);
        for (uint32_t i = 0; i < args.random_frames; ++i) {
            Bitmap frame(config.dims);
            for (uint16_t r = 0; r < config.dims.rows; ++r) {
                frame.set_row_mask(r, uint16_t(rng() & ((1u << config.dims.cols) - 1u)));
            }
            const FrameCheck res = check_frame(device, frame, /*clear_after=*/false);
            ++checked;
            if (!res.ok) record_failure(i, frame, res.detail);
        }
        out << "random " << config.dims.rows << "x" << config.dims.cols << ": " << checked
            << " frames, " << failures << " failure(s)\n";
    }

    if (failures > 0) {
        err << "first counterexample: " << first_failure << '\n';
        return kExitVerifyFail;
    }
    return kExitOk;
}

int cmd_budget(const Config& config, std::ostream& out) {
    const ResourceBudget b = resource_budget(config.dims);
    char ratio[32];
    std::snprintf(ratio, sizeof ratio, "%.1f",
                  double(b.naive_half_bridge) / b.column_transistors);
    out << config.dims.rows << "x" << config.dims.cols << ": " << b.column_transistors
        << " column + " << b.row_transistors << " row transistors, " << b.controller_pins
        << " pins; naive half-bridge " << b.naive_half_bridge << " (" << ratio
        << "x more column devices), full-bridge " << b.naive_full_bridge << '\n';
    return kExitOk;
}

}  // namespace taxsim::cli
