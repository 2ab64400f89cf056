#include "fsu/commands.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace fsu::cli {

namespace {

using nlohmann::ordered_json;

std::string number(double v)
{
    if (std::isinf(v))
        return v > 0 ? "inf" : "-inf";
    if (std::isnan(v))
        return "nan";
    // shortest text that parses back to the same double
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

ordered_json json_number(double v)
{
    if (std::isfinite(v))
        return v;
    return number(v);
}

void write_text(const fs::path& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    out << text;
    if (!out.flush())
        throw Error("failed writing '" + path.string() + "'");
}

template <class T>
void emit_reports(const ReportTargets& targets, const T& value)
{
    if (targets.key_value)
        write_text(*targets.key_value, to_key_value(value));
    if (targets.json)
        write_text(*targets.json, to_json(value));
}

ordered_json config_json(const FsuConfig& c)
{
    ordered_json j;
    j["block_size"] = c.block_size;
    j["support_margin"] = c.support_margin;
    j["spectral_decay"] = c.spectral_decay;
    j["spatial_decay"] = c.spatial_decay;
    j["max_freq"] = c.max_freq;
    j["max_iterations"] = c.max_iterations;
    j["residual_threshold"] = c.residual_threshold;
    j["scale_factor"] = c.scale_factor;
    j["seed"] = c.seed;
    return j;
}

void psnr_lines(std::ostringstream& ss, const ColorPsnr& p, const char* prefix)
{
    ss << prefix << "psnr_r=" << number(p.r) << "\n"
       << prefix << "psnr_g=" << number(p.g) << "\n"
       << prefix << "psnr_b=" << number(p.b) << "\n"
       << prefix << "psnr_avg=" << number(p.avg) << "\n";
}

ordered_json psnr_json(const ColorPsnr& p)
{
    return {{"r", json_number(p.r)}, {"g", json_number(p.g)}, {"b", json_number(p.b)}, {"avg", json_number(p.avg)}};
}

} // namespace

RunManifest cmd_upsample(const UpsampleCommand& cmd)
{
    cmd.config.validate();
    const PointCloud input = read_ply(cmd.input);
    if (input.empty())
        throw Error("empty input");
    const UpsampleResult up = upsample(input, cmd.config, cmd.threads);
    write_ply(up.cloud, cmd.output, cmd.format, cmd.precision);

    RunManifest m;
    m.input = cmd.input;
    m.output = cmd.output;
    m.config = cmd.config;
    m.timings = up.timings;
    m.points_in = up.input_points;
    m.points_out = up.output_points;
    m.blocks = up.blocks;
    m.colors_upsampled = up.colors_upsampled;
    emit_reports(cmd.report, m);
    return m;
}

MetricsReport cmd_evaluate(const EvaluateCommand& cmd)
{
    const PointCloud test = read_ply(cmd.test);
    const PointCloud reference = read_ply(cmd.reference);
    const MetricsReport r = compute_metrics(test, reference, cmd.knn);
    emit_reports(cmd.report, r);
    return r;
}

AttributeProtocolResult cmd_attr_protocol(const AttrProtocolCommand& cmd)
{
    const PointCloud reference = read_ply(cmd.reference);
    if (!reference.has_colors())
        throw Error("attribute protocol needs a colored input");
    const AttributeProtocolResult r = run_attribute_protocol(reference, cmd.config, cmd.runs, cmd.threads);
    emit_reports(cmd.report, r);
    return r;
}

std::vector<SweepRow> cmd_sweep(const SweepCommand& cmd)
{
    const PointCloud input = read_ply(cmd.input);
    const auto rows = run_sweep(input, cmd.block_sizes, cmd.margin_ratios, cmd.config, cmd.knn, cmd.threads);
    if (cmd.table)
        write_text(*cmd.table, sweep_table(rows, cmd.delimiter));
    return rows;
}

std::string to_key_value(const RunManifest& m)
{
    const FsuConfig& c = m.config;
    std::ostringstream ss;
    ss << "input=" << m.input.string() << "\n"
       << "output=" << m.output.string() << "\n"
       << "block_size=" << number(c.block_size) << "\n"
       << "support_margin=" << number(c.support_margin) << "\n"
       << "spectral_decay=" << number(c.spectral_decay) << "\n"
       << "spatial_decay=" << number(c.spatial_decay) << "\n"
       << "max_freq=" << c.max_freq << "\n"
       << "max_iterations=" << c.max_iterations << "\n"
       << "residual_threshold=" << number(c.residual_threshold) << "\n"
       << "scale_factor=" << number(c.scale_factor) << "\n"
       << "seed=" << c.seed << "\n"
       << "points_in=" << m.points_in << "\n"
       << "points_out=" << m.points_out << "\n"
       << "blocks=" << m.blocks << "\n"
       << "colors_upsampled=" << (m.colors_upsampled ? "true" : "false") << "\n"
       << "time_normalize_ms=" << number(m.timings.normalize_ms) << "\n"
       << "time_partition_ms=" << number(m.timings.partition_ms) << "\n"
       << "time_geometry_ms=" << number(m.timings.geometry_ms) << "\n"
       << "time_attribute_ms=" << number(m.timings.attribute_ms) << "\n"
       << "time_merge_ms=" << number(m.timings.merge_ms) << "\n"
       << "time_total_ms=" << number(m.timings.total_ms) << "\n";
    return ss.str();
}

std::string to_key_value(const MetricsReport& r)
{
    std::ostringstream ss;
    ss << "p2p=" << number(r.p2p) << "\n"
       << "p2c=" << number(r.p2c) << "\n"
       << "c2c=" << number(r.c2c) << "\n";
    if (r.has_color) {
        psnr_lines(ss, r.psnr, "");
        ss << "hist_distance=" << number(r.hist_distance) << "\n";
    }
    return ss.str();
}

std::string to_key_value(const AttributeProtocolResult& r)
{
    std::ostringstream ss;
    ss << "runs=" << r.runs.size() << "\n";
    for (std::size_t i = 0; i < r.runs.size(); ++i) {
        const auto& run = r.runs[i];
        const std::string prefix = "run" + std::to_string(i) + "_";
        ss << prefix << "seed=" << run.seed << "\n"
           << prefix << "train_points=" << run.train_points << "\n"
           << prefix << "query_points=" << run.query_points << "\n";
        psnr_lines(ss, run.psnr, prefix.c_str());
        ss << prefix << "hist_distance=" << number(run.hist_distance) << "\n";
    }
    psnr_lines(ss, r.mean_psnr, "mean_");
    ss << "mean_hist_distance=" << number(r.mean_hist_distance) << "\n";
    return ss.str();
}

std::string to_json(const RunManifest& m)
{
    ordered_json j;
    j["input"] = m.input.string();
    j["output"] = m.output.string();
    j["config"] = config_json(m.config);
    j["points_in"] = m.points_in;
    j["points_out"] = m.points_out;
    j["blocks"] = m.blocks;
    j["colors_upsampled"] = m.colors_upsampled;
    j["timings_ms"] = {{"normalize", m.timings.normalize_ms}, {"partition", m.timings.partition_ms},
                       {"geometry", m.timings.geometry_ms},   {"attribute", m.timings.attribute_ms},
                       {"merge", m.timings.merge_ms},         {"total", m.timings.total_ms}};
    return j.dump(2) + "\n";
}

std::string to_json(const MetricsReport& r)
{
    ordered_json j;
    j["p2p"] = json_number(r.p2p);
    j["p2c"] = json_number(r.p2c);
    j["c2c"] = json_number(r.c2c);
    if (r.has_color) {
        j["psnr"] = psnr_json(r.psnr);
        j["hist_distance"] = json_number(r.hist_distance);
    }
    return j.dump(2) + "\n";
}

std::string to_json(const AttributeProtocolResult& r)
{
    ordered_json j;
    ordered_json runs = ordered_json::array();
    for (const auto& run : r.runs)
        runs.push_back({{"seed", run.seed},
                        {"train_points", run.train_points},
                        {"query_points", run.query_points},
                        {"psnr", psnr_json(run.psnr)},
                        {"hist_distance", json_number(run.hist_distance)}});
    j["runs"] = std::move(runs);
    j["mean_psnr"] = psnr_json(r.mean_psnr);
    j["mean_hist_distance"] = json_number(r.mean_hist_distance);
    return j.dump(2) + "\n";
}

std::string sweep_table(const std::vector<SweepRow>& rows, char delimiter)
{
    std::ostringstream ss;
    ss << "N" << delimiter << "M_over_N" << delimiter << "C2C" << delimiter << "hist_distance" << delimiter
       << "points_out\n";
    for (const auto& r : rows)
        ss << number(r.block_size) << delimiter << number(r.margin_ratio) << delimiter << number(r.c2c) << delimiter
           << number(r.hist_distance) << delimiter << r.output_points << "\n";
    return ss.str();
}

} // namespace fsu::cli
