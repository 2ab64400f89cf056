#pragma once

#include "fsu/core.hpp"
#include "fsu/metrics.hpp"
#include "fsu/pipeline.hpp"
#include "fsu/ply.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace fsu::cli {

namespace fs = std::filesystem;

struct RunManifest
{
    fs::path input;
    fs::path output;
    FsuConfig config;
    StageTimings timings;
    std::size_t points_in = 0;
    std::size_t points_out = 0;
    std::size_t blocks = 0;
    bool colors_upsampled = false;
};

struct ReportTargets
{
    std::optional<fs::path> key_value;
    std::optional<fs::path> json;
};

struct UpsampleCommand
{
    fs::path input;
    fs::path output;
    FsuConfig config;
    PlyFormat format = PlyFormat::binary_little_endian;
    PlyPrecision precision = PlyPrecision::float32;
    unsigned threads = 0;
    ReportTargets report;
};

struct EvaluateCommand
{
    fs::path test;
    fs::path reference;
    std::size_t knn = 12;
    ReportTargets report;
};

struct AttrProtocolCommand
{
    fs::path reference;
    FsuConfig config;
    int runs = 3;
    unsigned threads = 0;
    ReportTargets report;
};

struct SweepCommand
{
    fs::path input;
    std::vector<double> block_sizes{0.02, 0.03, 0.04, 0.08};
    std::vector<double> margin_ratios{0.0, 0.25, 0.5, 0.75, 1.0};
    FsuConfig config;
    std::size_t knn = 12;
    unsigned threads = 0;
    char delimiter = ',';
    std::optional<fs::path> table;
};

RunManifest cmd_upsample(const UpsampleCommand& cmd);
MetricsReport cmd_evaluate(const EvaluateCommand& cmd);
AttributeProtocolResult cmd_attr_protocol(const AttrProtocolCommand& cmd);
std::vector<SweepRow> cmd_sweep(const SweepCommand& cmd);

/// Flat "key=value" lines. Infinite values print as "inf".
std::string to_key_value(const RunManifest& m);
std::string to_key_value(const MetricsReport& r);
std::string to_key_value(const AttributeProtocolResult& r);

/// JSON documents; infinite values are emitted as the string "inf".
std::string to_json(const RunManifest& m);
std::string to_json(const MetricsReport& r);
std::string to_json(const AttributeProtocolResult& r);

/// Header line plus one row per sweep entry.
std::string sweep_table(const std::vector<SweepRow>& rows, char delimiter);

} // namespace fsu::cli
