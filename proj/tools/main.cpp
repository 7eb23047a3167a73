// Command-line front end for the tactile display simulator: rasterize
// images or Braille text, drive them through the protocol loopback into
// the simulated device, and report stats, traces and verification runs.

#include "taxsim/cli_ops.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <iostream>

using namespace taxsim;

namespace {

Config resolve_config(const std::string& config_path, bool strict) {
    Config cfg;
    std::string path = config_path;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    if (!path.empty()) cfg = load_config_file(path);
    if (strict) cfg.strict_hazards = true;
    cfg.validate();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bi-stable solenoid tactile display simulator"};
    app.require_subcommand(1);

    std::string config_path;
    bool strict = false;
    app.add_option("--config", config_path,
                   "Config file (default: $" + std::string(kConfigEnvVar) + " if set)");
    app.add_flag("--strict", strict, "Abort scans on the first hazard");

    // show
    auto* show = app.add_subcommand("show", "Rasterize an image file and display it");
    cli::ShowArgs show_args;
    bool dither = false;
    show->add_option("file", show_args.input_path, "PBM/PGM image (P1/P2/P4/P5)")->required();
    auto* thr = show->add_option("--threshold", show_args.threshold,
                                 "Raise taxels darker than this [0,255]")
                    ->check(CLI::Range(0, 255));
    show->add_flag("--dither", dither, "Ordered 4x4 Bayer dither instead of threshold")
        ->excludes(thr);
    show->add_flag("--invert", show_args.invert, "Invert input polarity");
    show->add_option("--trace", show_args.trace_path, "Write a per-step waveform trace");

    // text
    auto* text = app.add_subcommand("text", "Render text as 6-dot Braille and display it");
    std::string text_arg;
    text->add_option("string", text_arg, "Letters, digits and spaces")->required();

    // clear
    app.add_subcommand("clear", "Scan the display back to all-down");

    // verify
    auto* verify = app.add_subcommand("verify", "Run the addressing correctness oracle");
    cli::VerifyArgs verify_args;
    uint16_t vrows = 0;
    uint16_t vcols = 0;
    auto* ropt = verify->add_option("--rows", vrows, "Exhaustive sweep rows (max 4)");
    auto* copt = verify->add_option("--cols", vcols, "Exhaustive sweep cols (max 4)");
    ropt->needs(copt);
    copt->needs(ropt);
    verify->add_option("--random", verify_args.random_frames,
                       "Random frames at the configured dims (default mode, 1000)");
    verify->add_option("--seed", verify_args.seed, "Random frame seed");
    verify->add_flag("--mutate-set-gate-and", verify_args.mutate_set_gate_and,
                     "Fault injection: break the set gate to prove the oracle detects it");

    // budget
    app.add_subcommand("budget", "Print the active-element budget vs naive bridges");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::kExitInputError;
    }

    Config cfg;
    try {
        cfg = resolve_config(config_path, strict);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return cli::kExitInputError;
    }

    try {
        if (show->parsed()) {
            if (dither) show_args.mode = cli::RasterMode::Dither;
            return cli::cmd_show(cfg, show_args, std::cout, std::cerr);
        }
        if (text->parsed()) {
            return cli::cmd_text(cfg, text_arg, std::cout, std::cerr);
        }
        if (app.get_subcommand("clear")->parsed()) {
            return cli::cmd_clear(cfg, std::cout, std::cerr);
        }
        if (verify->parsed()) {
            if (ropt->count() > 0) verify_args.exhaustive_dims = GridDims{vrows, vcols};
            return cli::cmd_verify(cfg, verify_args, std::cout, std::cerr);
        }
        return cli::cmd_budget(cfg, std::cout);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return cli::kExitInputError;
    }
}
