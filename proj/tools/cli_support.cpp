#include "cli_support.hpp"

#include "cqleak/types.hpp"

#include <cctype>
#include <cstdlib>
#include <stdexcept>

namespace cqleak::cli {

namespace {

double parse_number(const std::string& s, const std::string& whole) {
    if (s.empty()) throw std::invalid_argument("bad number in '" + whole + "'");
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad number in '" + whole + "'");
    }
    if (used != s.size()) throw std::invalid_argument("trailing characters in '" + whole + "'");
    return v;
}

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

}  // namespace

double parse_angle(const std::string& text) {
    std::string s = strip(text);
    double divisor = 1.0;
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        divisor = parse_number(s.substr(slash + 1), text);
        if (divisor == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
        s = s.substr(0, slash);
    }
    const auto p = s.find("pi");
    if (p == std::string::npos) return parse_number(s, text) / divisor;
    if (p + 2 != s.size()) throw std::invalid_argument("'pi' must end the multiplier in '" + text + "'");
    std::string coef = s.substr(0, p);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    double c = 1.0;
    if (coef == "-") {
        c = -1.0;
    } else if (!coef.empty() && coef != "+") {
        c = parse_number(coef, text);
    }
    return c * kPi / divisor;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::size_t pos = 0;
    const std::string s = strip(text);
    if (s.empty()) throw std::invalid_argument("empty list");
    while (pos <= s.size()) {
        const auto comma = s.find(',', pos);
        const auto end = comma == std::string::npos ? s.size() : comma;
        out.push_back(parse_number(s.substr(pos, end - pos), text));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::filesystem::path resolve_output(const std::string& explicit_path, const std::string& default_name) {
    if (!explicit_path.empty()) return explicit_path;
    if (const char* dir = std::getenv("CQLEAK_OUT_DIR"); dir != nullptr && *dir != '\0') {
        return std::filesystem::path(dir) / default_name;
    }
    return {};
}

}  // namespace cqleak::cli
