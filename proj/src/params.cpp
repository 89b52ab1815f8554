#include "qsdc/params.hpp"

#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace qsdc {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return s.substr(a, b - a);
}

double parse_double(const std::string& key, const std::string& value) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(value, &pos);
    } catch (const std::exception&) {
        throw std::invalid_argument("config: bad numeric value for '" + key + "': " + value);
    }
    if (pos != value.size())
        throw std::invalid_argument("config: trailing characters in value for '" + key + "'");
    return v;
}

std::uint64_t parse_count(const std::string& key, const std::string& value) {
    double v = parse_double(key, value);
    if (v < 0 || v != static_cast<double>(static_cast<std::uint64_t>(v)))
        throw std::invalid_argument("config: '" + key + "' must be a nonnegative integer");
    return static_cast<std::uint64_t>(v);
}

}  // namespace

void ChannelParams::validate() const {
    auto fail = [](const std::string& msg) { throw std::invalid_argument("params: " + msg); };
    if (!(eta_d > 0.0 && eta_d <= 1.0)) fail("eta_d must be in (0, 1]");
    if (!(zeta >= 0.0)) fail("zeta must be >= 0");
    if (!(p_d >= 0.0 && p_d < 0.5)) fail("p_d must be in [0, 0.5)");
    if (!(e_0 >= 0.0 && e_0 <= 1.0)) fail("e_0 must be in [0, 1]");
    if (!(delta >= 0.0 && delta <= 1.0)) fail("delta must be in [0, 1]");
    if (!(mu > 0.0)) fail("mu must be > 0");
    if (!(nu >= 0.0 && nu < mu)) fail("nu must be in [0, mu)");
    if (!(f_ec >= 1.0)) fail("f_ec must be >= 1");
    if (T < 1) fail("T must be >= 1");
    if (phase_slices < 2 || phase_slices % 2 != 0) fail("phase_slices must be even and >= 2");
}

ChannelParams parse_config(std::istream& in) {
    ChannelParams p;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        auto eq = s.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected 'key = value'");
        std::string key = trim(s.substr(0, eq));
        std::string value = trim(s.substr(eq + 1));
        if (key == "eta_d") p.eta_d = parse_double(key, value);
        else if (key == "zeta") p.zeta = parse_double(key, value);
        else if (key == "p_d") p.p_d = parse_double(key, value);
        else if (key == "e_0") p.e_0 = parse_double(key, value);
        else if (key == "delta") p.delta = parse_double(key, value);
        else if (key == "mu") p.mu = parse_double(key, value);
        else if (key == "nu") p.nu = parse_double(key, value);
        else if (key == "f_ec") p.f_ec = parse_double(key, value);
        else if (key == "T") p.T = parse_count(key, value);
        else if (key == "lambda_threshold") p.lambda_threshold = parse_count(key, value);
        else if (key == "phase_slices")
            p.phase_slices = static_cast<std::uint32_t>(parse_count(key, value));
        else
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": unknown key '" + key + "'");
    }
    return p;
}

ChannelParams load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    ChannelParams p = parse_config(in);
    p.validate();
    return p;
}

std::string format_config(const ChannelParams& p) {
    std::ostringstream os;
    os.precision(17);
    os << "eta_d = " << p.eta_d << "\n"
       << "zeta = " << p.zeta << "\n"
       << "p_d = " << p.p_d << "\n"
       << "e_0 = " << p.e_0 << "\n"
       << "delta = " << p.delta << "\n"
       << "mu = " << p.mu << "\n"
       << "nu = " << p.nu << "\n"
       << "f_ec = " << p.f_ec << "\n"
       << "T = " << p.T << "\n"
       << "lambda_threshold = " << p.lambda_threshold << "\n"
       << "phase_slices = " << p.phase_slices << "\n";
    return os.str();
}

}  // namespace qsdc
