#include "bdrelay/region_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <vector>

#include "bdrelay/error.hpp"

namespace bdrelay {

std::string format_double(double v)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string region_to_csv(const RateRegion& region)
{
    std::string out = "r_a,r_b\n";
    for (const auto& p : region.vertices()) {
        out += format_double(p.r_a);
        out += ',';
        out += format_double(p.r_b);
        out += '\n';
    }
    return out;
}

namespace {

double parse_number(const std::string& field, std::size_t line)
{
    char* end = nullptr;
    const double v = std::strtod(field.c_str(), &end);
    if (field.empty() || end != field.c_str() + field.size())
        throw InvalidArgument("csv: line " + std::to_string(line) + ": '" + field + "' is not a number");
    return v;
}

}  // namespace

RateRegion region_from_csv(std::string_view text)
{
    std::istringstream in{std::string(text)};
    std::string line;
    if (!std::getline(in, line) || (line != "r_a,r_b" && line != "r_a,r_b\r"))
        throw InvalidArgument("csv: expected header 'r_a,r_b'");
    std::vector<RatePair> points;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw InvalidArgument("csv: line " + std::to_string(lineno) + ": expected two fields");
        points.push_back({parse_number(line.substr(0, comma), lineno),
                          parse_number(line.substr(comma + 1), lineno)});
    }
    return RateRegion::hull_of(std::move(points));
}

nlohmann::json region_to_json(const RateRegion& region)
{
    auto arr = nlohmann::json::array();
    for (const auto& p : region.vertices()) arr.push_back({p.r_a, p.r_b});
    return arr;
}

RateRegion region_from_json(const nlohmann::json& j)
{
    if (!j.is_array()) throw InvalidArgument("json: region must be an array of [r_a, r_b] pairs");
    std::vector<RatePair> points;
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto& e = j[i];
        if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
            throw InvalidArgument("json: region entry " + std::to_string(i) + " is not a numeric pair");
        points.push_back({e[0].get<double>(), e[1].get<double>()});
    }
    return RateRegion::hull_of(std::move(points));
}

}  // namespace bdrelay
