#include "fsu/commands.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <map>

namespace {

using namespace fsu;

void add_model_flags(CLI::App& app, FsuConfig& cfg)
{
    app.add_option("--block-size", cfg.block_size, "Core block side N in normalized units")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--margin", cfg.support_margin, "Support margin M in normalized units")
        ->check(CLI::NonNegativeNumber)
        ->capture_default_str();
    app.add_option("--scale", cfg.scale_factor, "Upsampling factor")->check(CLI::Range(1.0, 1e6))->capture_default_str();
    app.add_option("--iterations", cfg.max_iterations, "Iteration budget per model")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--max-freq", cfg.max_freq, "Basis frequencies per axis (K)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app.add_option("--sigma", cfg.spectral_decay, "Spectral decay in (0,1)")->capture_default_str();
    app.add_option("--rho", cfg.spatial_decay, "Spatial decay in (0,1]")->capture_default_str();
    app.add_option("--residual-threshold", cfg.residual_threshold, "Stop once the weighted residual energy is below")
        ->capture_default_str();
    app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
}

void add_report_flags(CLI::App& app, cli::ReportTargets& report)
{
    app.add_option("--report", report.key_value, "Write a key=value report");
    app.add_option("--report-json", report.json, "Write a JSON report");
}

const std::map<std::string, PlyFormat> kFormats{{"ascii", PlyFormat::ascii},
                                                {"binary", PlyFormat::binary_little_endian}};

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Frequency-selective joint geometry and color upsampling of point clouds"};
    app.require_subcommand(1);

    cli::UpsampleCommand up;
    bool wide = false;
    auto* up_cmd = app.add_subcommand("upsample", "Upsample a PLY point cloud");
    up_cmd->add_option("input", up.input, "Input PLY")->required()->check(CLI::ExistingFile);
    up_cmd->add_option("output", up.output, "Output PLY")->required();
    add_model_flags(*up_cmd, up.config);
    up_cmd->add_option("--format", up.format, "Output encoding")
        ->transform(CLI::CheckedTransformer(kFormats, CLI::ignore_case));
    up_cmd->add_flag("--double", wide, "Write float64 positions");
    up_cmd->add_option("--threads", up.threads, "Worker threads (0 = all cores)");
    add_report_flags(*up_cmd, up.report);

    cli::EvaluateCommand ev;
    auto* ev_cmd = app.add_subcommand("evaluate", "Score a test cloud against a reference");
    ev_cmd->add_option("test", ev.test, "Test PLY")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("reference", ev.reference, "Reference PLY")->required()->check(CLI::ExistingFile);
    ev_cmd->add_option("--knn", ev.knn, "Neighbors for normal estimation")->check(CLI::PositiveNumber);
    add_report_flags(*ev_cmd, ev.report);

    cli::AttrProtocolCommand ap;
    auto* ap_cmd = app.add_subcommand("attr-protocol", "Color-only downsample/upsample evaluation");
    ap_cmd->add_option("reference", ap.reference, "Colored reference PLY")->required()->check(CLI::ExistingFile);
    ap_cmd->add_option("--runs", ap.runs, "Number of random splits")->check(CLI::PositiveNumber);
    ap_cmd->add_option("--threads", ap.threads, "Worker threads (0 = all cores)");
    add_model_flags(*ap_cmd, ap.config);
    add_report_flags(*ap_cmd, ap.report);

    cli::SweepCommand sw;
    auto* sw_cmd = app.add_subcommand("sweep", "Evaluate a grid of block sizes and margin ratios");
    sw_cmd->add_option("input", sw.input, "Input PLY")->required()->check(CLI::ExistingFile);
    sw_cmd->add_option("--block-sizes", sw.block_sizes, "Block sizes N")->delimiter(',');
    sw_cmd->add_option("--margin-ratios", sw.margin_ratios, "Margin ratios M/N")->delimiter(',');
    sw_cmd->add_option("--knn", sw.knn, "Neighbors for normal estimation")->check(CLI::PositiveNumber);
    sw_cmd->add_option("--threads", sw.threads, "Worker threads (0 = all cores)");
    sw_cmd->add_option("--table", sw.table, "Write the table to this file");
    sw_cmd->add_option("--delimiter", sw.delimiter, "Column delimiter");
    add_model_flags(*sw_cmd, sw.config);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "fsu: error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (*up_cmd) {
            up.precision = wide ? PlyPrecision::float64 : PlyPrecision::float32;
            const auto m = cli::cmd_upsample(up);
            if (!m.colors_upsampled)
                std::cerr << "notice: input has no colors, attribute upsampling skipped\n";
            std::cout << cli::to_key_value(m);
        } else if (*ev_cmd) {
            std::cout << cli::to_key_value(cli::cmd_evaluate(ev));
        } else if (*ap_cmd) {
            std::cout << cli::to_key_value(cli::cmd_attr_protocol(ap));
        } else if (*sw_cmd) {
            std::cout << cli::sweep_table(cli::cmd_sweep(sw), sw.delimiter);
        }
    } catch (const std::exception& e) {
        std::cerr << "fsu: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
