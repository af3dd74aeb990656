#include "rmode/channel.hpp"

#include "rmode/errors.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

namespace rmode {

namespace {

std::string trim(std::string s) {
    const auto issp = [](unsigned char c) { return std::isspace(c) != 0; };
    s.erase(s.begin(), std::find_if_not(s.begin(), s.end(), issp));
    s.erase(std::find_if_not(s.rbegin(), s.rend(), issp).base(), s.end());
    return s;
}

double parse_number(const std::string& field, const std::string& where) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(field, &used);
    } catch (const std::exception&) {
        throw DomainError(where + ": '" + field + "' is not a number");
    }
    if (used != field.size() || !std::isfinite(v))
        throw DomainError(where + ": '" + field + "' is not a finite number");
    return v;
}

}  // namespace

AlphaTable AlphaTable::parse(std::istream& in, const std::string& source) {
    AlphaTable t;
    std::string line;
    for (int lineno = 1; std::getline(in, line); ++lineno) {
        if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        std::vector<std::string> cols;
        std::stringstream ss(line);
        for (std::string c; std::getline(ss, c, ',');) cols.push_back(trim(c));
        const std::string where = source + ":" + std::to_string(lineno);
        if (cols.size() != 4)
            throw DomainError(where + ": expected 4 comma-separated columns, got " +
                              std::to_string(cols.size()));

        Row r{parse_number(cols[0], where), parse_number(cols[1], where), DayPeriod::day,
              parse_number(cols[3], where)};
        try {
            r.period = parse_day_period(cols[2]);
        } catch (const DomainError& e) {
            throw DomainError(where + ": " + e.what());
        }
        if (r.distance_km_min < 0.0 || r.distance_km_max <= r.distance_km_min)
            throw DomainError(where + ": need 0 <= distance_km_min < distance_km_max");
        if (r.alpha < 0.0 || r.alpha > 1.0) throw DomainError(where + ": alpha must lie in [0, 1]");
        t.rows_.push_back(r);
    }
    return t;
}

AlphaTable AlphaTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError(path, "cannot open alpha table");
    return parse(in, path);
}

std::optional<double> AlphaTable::lookup(double distance_m, DayPeriod period) const {
    const double km = distance_m / 1000.0;
    for (const auto& r : rows_)
        if (r.period == period && km >= r.distance_km_min && km < r.distance_km_max) return r.alpha;
    return std::nullopt;
}

}  // namespace rmode
