#include "fsu/ply.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

namespace fsu {

namespace {

static_assert(std::endian::native == std::endian::little, "binary PLY I/O assumes a little-endian host");

enum class ScalarType { int8, uint8, int16, uint16, int32, uint32, float32, float64 };

struct PropertyDef
{
    std::string name;
    ScalarType type = ScalarType::float32;
    bool is_list = false;
    ScalarType count_type = ScalarType::uint8;
};

struct ElementDef
{
    std::string name;
    std::size_t count = 0;
    std::vector<PropertyDef> properties;
};

std::size_t type_size(ScalarType t)
{
    switch (t) {
    case ScalarType::int8:
    case ScalarType::uint8: return 1;
    case ScalarType::int16:
    case ScalarType::uint16: return 2;
    case ScalarType::int32:
    case ScalarType::uint32:
    case ScalarType::float32: return 4;
    case ScalarType::float64: return 8;
    }
    return 0;
}

bool parse_type(const std::string& s, ScalarType& t)
{
    static const std::pair<const char*, ScalarType> table[] = {
        {"char", ScalarType::int8},     {"int8", ScalarType::int8},       {"uchar", ScalarType::uint8},
        {"uint8", ScalarType::uint8},   {"short", ScalarType::int16},     {"int16", ScalarType::int16},
        {"ushort", ScalarType::uint16}, {"uint16", ScalarType::uint16},   {"int", ScalarType::int32},
        {"int32", ScalarType::int32},   {"uint", ScalarType::uint32},     {"uint32", ScalarType::uint32},
        {"float", ScalarType::float32}, {"float32", ScalarType::float32}, {"double", ScalarType::float64},
        {"float64", ScalarType::float64}};
    for (const auto& [name, type] : table)
        if (s == name) {
            t = type;
            return true;
        }
    return false;
}

double decode(ScalarType t, const unsigned char* p)
{
    switch (t) {
    case ScalarType::int8: return static_cast<double>(static_cast<std::int8_t>(*p));
    case ScalarType::uint8: return static_cast<double>(*p);
    case ScalarType::int16: {
        std::int16_t v;
        std::memcpy(&v, p, 2);
        return v;
    }
    case ScalarType::uint16: {
        std::uint16_t v;
        std::memcpy(&v, p, 2);
        return v;
    }
    case ScalarType::int32: {
        std::int32_t v;
        std::memcpy(&v, p, 4);
        return v;
    }
    case ScalarType::uint32: {
        std::uint32_t v;
        std::memcpy(&v, p, 4);
        return v;
    }
    case ScalarType::float32: {
        float v;
        std::memcpy(&v, p, 4);
        return v;
    }
    case ScalarType::float64: {
        double v;
        std::memcpy(&v, p, 8);
        return v;
    }
    }
    return 0.0;
}

std::uint8_t to_channel(double v)
{
    if (!std::isfinite(v))
        return 0;
    return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

struct VertexLayout
{
    int x = -1, y = -1, z = -1, r = -1, g = -1, b = -1;
};

class Reader
{
public:
    explicit Reader(std::istream& in) : in_(in) {}

    PointCloud read(PlyHeaderInfo* header_out)
    {
        parse_header();

        PlyHeaderInfo info;
        info.format = binary_ ? PlyFormat::binary_little_endian : PlyFormat::ascii;

        const ElementDef* vertex = nullptr;
        for (const auto& e : elements_)
            if (e.name == "vertex") {
                vertex = &e;
                break;
            }
        if (!vertex)
            fail_header("missing element vertex");

        VertexLayout layout;
        for (std::size_t i = 0; i < vertex->properties.size(); ++i) {
            const auto& p = vertex->properties[i];
            info.property_names.push_back(p.name);
            int* slot = nullptr;
            if (p.name == "x") slot = &layout.x;
            else if (p.name == "y") slot = &layout.y;
            else if (p.name == "z") slot = &layout.z;
            else if (p.name == "red") slot = &layout.r;
            else if (p.name == "green") slot = &layout.g;
            else if (p.name == "blue") slot = &layout.b;
            if (slot && !p.is_list)
                *slot = static_cast<int>(i);
        }
        if (layout.x < 0 || layout.y < 0 || layout.z < 0)
            fail_header("vertex element lacks x, y, z properties");
        const bool has_color = layout.r >= 0 && layout.g >= 0 && layout.b >= 0;
        info.vertex_count = vertex->count;
        info.has_color = has_color;

        PointCloud cloud;
        cloud.positions.reserve(vertex->count);
        if (has_color)
            cloud.colors.emplace().reserve(vertex->count);

        std::vector<double> values;
        for (const auto& e : elements_) {
            const bool is_vertex = &e == vertex;
            for (std::size_t n = 0; n < e.count; ++n) {
                values.clear();
                if (binary_)
                    read_binary_record(e, values, is_vertex);
                else
                    read_ascii_record(e, values);
                if (!is_vertex)
                    continue;
                cloud.positions.push_back({values[layout.x], values[layout.y], values[layout.z]});
                if (has_color)
                    cloud.colors->push_back(
                        {to_channel(values[layout.r]), to_channel(values[layout.g]), to_channel(values[layout.b])});
            }
            if (is_vertex)
                break;
        }

        if (header_out)
            *header_out = std::move(info);
        return cloud;
    }

private:
    [[noreturn]] void fail_header(const std::string& what)
    {
        throw PlyParseError("PLY header, line " + std::to_string(line_) + ": " + what, line_, offset_);
    }

    [[noreturn]] void fail_body(const std::string& what)
    {
        if (binary_)
            throw PlyParseError("PLY body, byte " + std::to_string(offset_) + ": " + what, line_, offset_);
        throw PlyParseError("PLY body, line " + std::to_string(line_) + ": " + what, line_, offset_);
    }

    bool next_line(std::string& line)
    {
        if (!std::getline(in_, line))
            return false;
        offset_ += line.size() + (in_.eof() ? 0 : 1);
        ++line_;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        return true;
    }

    void parse_header()
    {
        std::string line;
        if (!next_line(line) || line != "ply")
            fail_header("missing 'ply' magic");

        bool have_format = false;
        while (true) {
            if (!next_line(line))
                fail_header("unexpected end of file before end_header");
            std::istringstream ss(line);
            std::string keyword;
            ss >> keyword;
            if (keyword.empty() || keyword == "comment" || keyword == "obj_info")
                continue;
            if (keyword == "end_header")
                break;
            if (keyword == "format") {
                std::string fmt, version;
                ss >> fmt >> version;
                if (fmt == "ascii")
                    binary_ = false;
                else if (fmt == "binary_little_endian")
                    binary_ = true;
                else
                    fail_header("unsupported format '" + fmt + "'");
                have_format = true;
            } else if (keyword == "element") {
                ElementDef e;
                long long count = -1;
                ss >> e.name >> count;
                if (e.name.empty() || !ss || count < 0)
                    fail_header("malformed element declaration");
                e.count = static_cast<std::size_t>(count);
                elements_.push_back(std::move(e));
            } else if (keyword == "property") {
                if (elements_.empty())
                    fail_header("property declared before any element");
                PropertyDef p;
                std::string type;
                ss >> type;
                if (type == "list") {
                    std::string count_type, item_type;
                    ss >> count_type >> item_type >> p.name;
                    p.is_list = true;
                    if (!parse_type(count_type, p.count_type) || !parse_type(item_type, p.type))
                        fail_header("unknown list property type");
                } else {
                    ss >> p.name;
                    if (!parse_type(type, p.type))
                        fail_header("unknown property type '" + type + "'");
                }
                if (p.name.empty())
                    fail_header("property without a name");
                elements_.back().properties.push_back(std::move(p));
            } else {
                fail_header("unexpected keyword '" + keyword + "'");
            }
        }
        if (!have_format)
            fail_header("missing format line");
    }

    void read_bytes(unsigned char* dst, std::size_t n)
    {
        in_.read(reinterpret_cast<char*>(dst), static_cast<std::streamsize>(n));
        if (static_cast<std::size_t>(in_.gcount()) != n)
            fail_body("truncated binary body");
        offset_ += n;
    }

    void read_binary_record(const ElementDef& e, std::vector<double>& values, bool keep)
    {
        unsigned char buf[8];
        for (const auto& p : e.properties) {
            if (p.is_list) {
                read_bytes(buf, type_size(p.count_type));
                const double n = decode(p.count_type, buf);
                if (n < 0)
                    fail_body("negative list length");
                for (std::size_t i = 0; i < static_cast<std::size_t>(n); ++i)
                    read_bytes(buf, type_size(p.type));
                values.push_back(0.0);
                continue;
            }
            read_bytes(buf, type_size(p.type));
            values.push_back(keep ? decode(p.type, buf) : 0.0);
        }
    }

    void read_ascii_record(const ElementDef& e, std::vector<double>& values)
    {
        std::string line;
        do {
            if (!next_line(line))
                fail_body("truncated ASCII body");
        } while (line.find_first_not_of(" \t") == std::string::npos);

        std::istringstream ss(line);
        ss.imbue(std::locale::classic());
        for (const auto& p : e.properties) {
            double v = 0.0;
            if (!(ss >> v))
                fail_body("expected " + std::to_string(e.properties.size()) + " values in element '" + e.name + "'");
            if (p.is_list) {
                for (long i = 0; i < static_cast<long>(v); ++i) {
                    double item;
                    if (!(ss >> item))
                        fail_body("truncated list property");
                }
                v = 0.0;
            } else if (p.type == ScalarType::float32) {
                // match the value a binary file of the same layout would hold
                v = static_cast<float>(v);
            }
            values.push_back(v);
        }
    }

    std::istream& in_;
    bool binary_ = false;
    std::vector<ElementDef> elements_;
    std::size_t line_ = 0;
    std::size_t offset_ = 0;
};

void write_raw(std::ostream& out, const void* p, std::size_t n)
{
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
}

} // namespace

PlyParseError::PlyParseError(const std::string& what, std::size_t line, std::size_t byte_offset)
    : Error(what), line_(line), byte_offset_(byte_offset)
{
}

PointCloud read_ply(std::istream& in, PlyHeaderInfo* header)
{
    return Reader(in).read(header);
}

PointCloud read_ply(const std::filesystem::path& path, PlyHeaderInfo* header)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("cannot open '" + path.string() + "' for reading");
    return read_ply(in, header);
}

void write_ply(const PointCloud& cloud, std::ostream& out, PlyFormat format, PlyPrecision precision)
{
    cloud.validate();
    const bool color = cloud.has_colors();
    const bool wide = precision == PlyPrecision::float64;
    const char* ptype = wide ? "double" : "float";

    out << "ply\n"
        << (format == PlyFormat::ascii ? "format ascii 1.0\n" : "format binary_little_endian 1.0\n")
        << "element vertex " << cloud.size() << "\n"
        << "property " << ptype << " x\n"
        << "property " << ptype << " y\n"
        << "property " << ptype << " z\n";
    if (color)
        out << "property uchar red\nproperty uchar green\nproperty uchar blue\n";
    out << "end_header\n";

    if (format == PlyFormat::ascii) {
        std::ostringstream body;
        body.imbue(std::locale::classic());
        body << std::setprecision(wide ? std::numeric_limits<double>::max_digits10
                                       : std::numeric_limits<float>::max_digits10);
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            const auto& p = cloud.positions[i];
            for (int a = 0; a < 3; ++a) {
                if (a)
                    body << ' ';
                if (wide)
                    body << p[a];
                else
                    body << static_cast<float>(p[a]);
            }
            if (color) {
                const auto& c = (*cloud.colors)[i];
                body << ' ' << int(c[0]) << ' ' << int(c[1]) << ' ' << int(c[2]);
            }
            body << '\n';
        }
        out << body.str();
    } else {
        const std::size_t record = (wide ? 24 : 12) + (color ? 3 : 0);
        std::vector<unsigned char> buf(record * cloud.size());
        unsigned char* dst = buf.data();
        for (std::size_t i = 0; i < cloud.size(); ++i) {
            for (double v : cloud.positions[i]) {
                if (wide) {
                    std::memcpy(dst, &v, 8);
                    dst += 8;
                } else {
                    const float f = static_cast<float>(v);
                    std::memcpy(dst, &f, 4);
                    dst += 4;
                }
            }
            if (color) {
                const auto& c = (*cloud.colors)[i];
                std::memcpy(dst, c.data(), 3);
                dst += 3;
            }
        }
        write_raw(out, buf.data(), buf.size());
    }
    if (!out)
        throw Error("failed writing PLY stream");
}

void write_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format, PlyPrecision precision)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw Error("cannot open '" + path.string() + "' for writing");
    write_ply(cloud, out, format, precision);
    out.flush();
    if (!out)
        throw Error("failed writing '" + path.string() + "'");
}

} // namespace fsu
