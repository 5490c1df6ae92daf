#include "squarepeg/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace squarepeg {

namespace {

using nlohmann::json;

std::vector<Point> parse_vertices(const json& arr, const std::string& where)
{
    if (!arr.is_array())
        throw Error(ErrorKind::InvalidInput, where + ": \"vertices\" must be an array");
    std::vector<Point> out;
    for (std::size_t k = 0; k < arr.size(); ++k) {
        const json& v = arr[k];
        if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
            throw Error(ErrorKind::InvalidInput,
                        where + ": vertex " + std::to_string(k) + " must be a pair of numbers [x, y]");
        out.emplace_back(v[0].get<double>(), v[1].get<double>());
    }
    if (out.size() >= 2 && out.front() == out.back())
        throw Error(ErrorKind::InvalidInput, where + ": first vertex repeated at the end; polygons are implicitly closed");
    return out;
}

Polygon checked_polygon(std::vector<Point> vertices, const std::string& where)
{
    Polygon poly = [&] {
        try {
            return Polygon(std::move(vertices));
        } catch (const Error& e) {
            throw Error(ErrorKind::InvalidInput, where + ": " + e.what());
        }
    }();
    const auto simple = is_simple(poly);
    if (!simple.simple) {
        const auto [i, j] = simple.offending.front();
        throw Error(ErrorKind::InvalidInput, where + ": polygon is not simple (edges " + std::to_string(i) + " and " +
                                                 std::to_string(j) + " intersect)");
    }
    return poly;
}

json parse_json(const std::string& text)
{
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorKind::InvalidInput, std::string("malformed JSON: ") + e.what());
    }
}

void append_vertices(std::string& out, const Polygon& poly)
{
    out += '[';
    for (std::size_t k = 0; k < poly.size(); ++k) {
        if (k)
            out += ", ";
        out += '[' + format_number(poly.vertex(k).x()) + ", " + format_number(poly.vertex(k).y()) + ']';
    }
    out += ']';
}

}  // namespace

std::string format_number(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

Polygon parse_polygon(const std::string& text)
{
    const json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("vertices"))
        throw Error(ErrorKind::InvalidInput, "polygon file: expected an object with \"vertices\"");
    return checked_polygon(parse_vertices(doc["vertices"], "polygon file"), "polygon file");
}

DeformationScenario parse_scenario(const std::string& text)
{
    const json doc = parse_json(text);
    if (!doc.is_object() || !doc.contains("keyframes") || !doc["keyframes"].is_array())
        throw Error(ErrorKind::InvalidInput, "scenario file: expected an object with a \"keyframes\" array");
    std::vector<Keyframe> keyframes;
    for (std::size_t k = 0; k < doc["keyframes"].size(); ++k) {
        const json& kf = doc["keyframes"][k];
        const std::string where = "scenario keyframe " + std::to_string(k);
        if (!kf.is_object() || !kf.contains("time") || !kf["time"].is_number() || !kf.contains("vertices"))
            throw Error(ErrorKind::InvalidInput, where + ": expected {\"time\": t, \"vertices\": [...]}");
        keyframes.push_back({kf["time"].get<double>(), checked_polygon(parse_vertices(kf["vertices"], where), where)});
    }
    return DeformationScenario(std::move(keyframes));
}

std::string format_polygon(const Polygon& poly)
{
    std::string out = "{\"vertices\": ";
    append_vertices(out, poly);
    out += "}\n";
    return out;
}

std::string format_scenario(const DeformationScenario& sc)
{
    std::string out = "{\"keyframes\": [\n";
    const auto& kfs = sc.keyframes();
    for (std::size_t k = 0; k < kfs.size(); ++k) {
        out += "  {\"time\": " + format_number(kfs[k].time) + ", \"vertices\": ";
        append_vertices(out, kfs[k].polygon);
        out += k + 1 < kfs.size() ? "},\n" : "}\n";
    }
    out += "]}\n";
    return out;
}

std::string read_file(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error(ErrorKind::InvalidInput, "cannot open " + path + ": " + std::strerror(errno));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path, std::ios::binary);
    if (!out || !(out << text))
        throw Error(ErrorKind::InvalidInput, "cannot write " + path + ": " + std::strerror(errno));
}

Polygon load_polygon(const std::string& path) { return parse_polygon(read_file(path)); }
DeformationScenario load_scenario(const std::string& path) { return parse_scenario(read_file(path)); }
void save_polygon(const Polygon& poly, const std::string& path) { write_file(path, format_polygon(poly)); }
void save_scenario(const DeformationScenario& sc, const std::string& path) { write_file(path, format_scenario(sc)); }

}  // namespace squarepeg
