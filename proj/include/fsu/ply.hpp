#pragma once

#include "fsu/core.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace fsu {

enum class PlyFormat { ascii, binary_little_endian };

enum class PlyPrecision { float32, float64 };

struct PlyHeaderInfo
{
    PlyFormat format = PlyFormat::ascii;
    std::size_t vertex_count = 0;
    bool has_color = false;
    std::vector<std::string> property_names; ///< vertex properties in file order
};

/// Parse error carrying the location where parsing stopped. For header and
/// ASCII body errors `line` is 1-based; for binary bodies `byte_offset` is
/// relative to the start of the stream.
class PlyParseError : public Error
{
public:
    PlyParseError(const std::string& what, std::size_t line, std::size_t byte_offset);

    std::size_t line() const { return line_; }
    std::size_t byte_offset() const { return byte_offset_; }

private:
    std::size_t line_;
    std::size_t byte_offset_;
};

/// Reads the vertex element of a PLY stream. x, y, z are required; red, green
/// and blue become colors only when all three are present. Other vertex
/// properties and other elements are skipped.
PointCloud read_ply(std::istream& in, PlyHeaderInfo* header = nullptr);
PointCloud read_ply(const std::filesystem::path& path, PlyHeaderInfo* header = nullptr);

/// Writes x, y, z (float32 unless `precision` says otherwise) followed by
/// red, green, blue as uchar when the cloud has colors.
void write_ply(const PointCloud& cloud, std::ostream& out, PlyFormat format,
               PlyPrecision precision = PlyPrecision::float32);
void write_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format,
               PlyPrecision precision = PlyPrecision::float32);

} // namespace fsu
