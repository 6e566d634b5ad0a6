#include "becgs/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace becgs {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return std::tolower(c); });
    return s;
}

using KeyValues = std::map<std::string, std::string>;  // "section.key" -> value

KeyValues tokenize(const std::string& text) {
    KeyValues kv;
    std::istringstream in(text);
    std::string line, section;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#' || t[0] == ';') continue;
        if (t.front() == '[') {
            if (t.back() != ']')
                throw std::invalid_argument("config line " + std::to_string(lineno) +
                                            ": malformed section header");
            section = lower(trim(t.substr(1, t.size() - 2)));
            continue;
        }
        const std::size_t eq = t.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": expected key = value");
        const std::string key = lower(trim(t.substr(0, eq)));
        const std::string value = trim(t.substr(eq + 1));
        if (section.empty())
            throw std::invalid_argument("config line " + std::to_string(lineno) +
                                        ": key outside any [section]");
        kv[section + "." + key] = value;
    }
    return kv;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
    throw std::invalid_argument(path + ": " + msg);
}

double parse_double(const std::string& path, const std::string& v) {
    std::size_t pos = 0;
    double out;
    try {
        out = std::stod(v, &pos);
    } catch (...) {
        fail(path, "not a number: '" + v + "'");
    }
    if (trim(v.substr(pos)) != "") fail(path, "trailing characters in '" + v + "'");
    return out;
}

int parse_int(const std::string& path, const std::string& v) {
    const double d = parse_double(path, v);
    if (d != std::floor(d)) fail(path, "expected an integer, got '" + v + "'");
    return static_cast<int>(d);
}

bool parse_bool(const std::string& path, const std::string& v) {
    const std::string s = lower(v);
    if (s == "true" || s == "yes" || s == "1") return true;
    if (s == "false" || s == "no" || s == "0") return false;
    fail(path, "expected a boolean, got '" + v + "'");
}

std::vector<std::string> split_list(const std::string& v) {
    std::vector<std::string> parts;
    std::string cur;
    std::istringstream in(v);
    while (std::getline(in, cur, ',')) {
        const std::string t = trim(cur);
        if (!t.empty()) parts.push_back(t);
    }
    return parts;
}

Vec3 parse_vec3(const std::string& path, const std::string& v) {
    const auto parts = split_list(v);
    if (parts.size() != 3) fail(path, "expected three comma-separated values");
    return {parse_double(path, parts[0]), parse_double(path, parts[1]),
            parse_double(path, parts[2])};
}

Vec3i parse_vec3i(const std::string& path, const std::string& v) {
    const auto parts = split_list(v);
    if (parts.size() != 3) fail(path, "expected three comma-separated integers");
    return {parse_int(path, parts[0]), parse_int(path, parts[1]), parse_int(path, parts[2])};
}

class Reader {
public:
    explicit Reader(KeyValues kv) : kv_(std::move(kv)) {}

    bool has(const std::string& path) const { return kv_.count(path) > 0; }
    std::string get(const std::string& path) const { return kv_.at(path); }

    double number(const std::string& path, double fallback) const {
        return has(path) ? parse_double(path, kv_.at(path)) : fallback;
    }
    double required_number(const std::string& path) const {
        if (!has(path)) fail(path, "required key missing");
        return parse_double(path, kv_.at(path));
    }
    int integer(const std::string& path, int fallback) const {
        return has(path) ? parse_int(path, kv_.at(path)) : fallback;
    }
    Vec3 vec3(const std::string& path, const Vec3& fallback) const {
        return has(path) ? parse_vec3(path, kv_.at(path)) : fallback;
    }
    Vec3i required_vec3i(const std::string& path) const {
        if (!has(path)) fail(path, "required key missing");
        return parse_vec3i(path, kv_.at(path));
    }
    bool boolean(const std::string& path, bool fallback) const {
        return has(path) ? parse_bool(path, kv_.at(path)) : fallback;
    }
    std::string text(const std::string& path, const std::string& fallback) const {
        return has(path) ? kv_.at(path) : fallback;
    }

private:
    KeyValues kv_;
};

}  // namespace

GridPtr RunSpec::make_target_grid() const { return Grid::make(half_width, xi, counts); }

RunSpec parse_config(const std::string& text) {
    Reader r(tokenize(text));
    RunSpec spec;

    spec.half_width = r.required_number("grid.half_width");
    if (!(spec.half_width > 0.0)) fail("grid.half_width", "must be positive");
    spec.xi = r.vec3("grid.xi", {1.0, 1.0, 1.0});
    double xi_max = 0.0;
    for (int a = 0; a < 3; ++a) {
        if (!(spec.xi[a] > 0.0) || spec.xi[a] > 1.0)
            fail("grid.xi", "components must lie in (0, 1]");
        xi_max = std::max(xi_max, spec.xi[a]);
    }
    if (std::abs(xi_max - 1.0) > 1e-12) fail("grid.xi", "max component must equal 1");
    spec.counts = r.required_vec3i("grid.n");
    for (int a = 0; a < 3; ++a)
        if (spec.counts[a] < 4 || spec.counts[a] % 2 != 0)
            fail("grid.n", "components must be even and >= 4");
    spec.levels = r.integer("grid.levels", 3);
    if (spec.levels < 1) fail("grid.levels", "must be >= 1");
    for (int a = 0; a < 3; ++a) {
        const int div = 1 << (spec.levels - 1);
        if (spec.counts[a] % div != 0 || (spec.counts[a] / div) % 2 != 0 ||
            spec.counts[a] / div < 4)
            fail("grid.levels",
                 "counts must stay even and >= 4 on the coarsest of " +
                     std::to_string(spec.levels) + " levels");
    }

    spec.model.beta = r.number("model.beta", 0.0);
    spec.model.lambda = r.number("model.lambda", 0.0);
    spec.model.omega = r.number("model.omega", 0.0);
    spec.model.gamma = r.vec3("model.gamma", {1.0, 1.0, 1.0});
    for (int a = 0; a < 3; ++a)
        if (!(spec.model.gamma[a] > 0.0)) fail("model.gamma", "components must be positive");
    {
        const Vec3 n = r.vec3("model.dipole_axis", {0.0, 0.0, 1.0});
        const double len = std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]);
        if (!(len > 1e-9)) fail("model.dipole_axis", "vector is numerically zero");
        spec.model.dipole = DipoleOrientation(n[0] / len, n[1] / len, n[2] / len);
    }

    spec.stop.tolerance = r.number("solver.tolerance", 1e-10);
    if (!(spec.stop.tolerance > 0.0)) fail("solver.tolerance", "must be positive");
    spec.stop.max_iterations = r.integer("solver.max_iterations", 10000);
    if (spec.stop.max_iterations < 1) fail("solver.max_iterations", "must be >= 1");
    {
        const std::string g = lower(r.text("solver.guess", "all"));
        if (g == "all") {
            // the Thomas-Fermi guess needs beta > 0; an 'all' sweep skips it
            for (GuessKind k : all_guess_kinds())
                if (k != GuessKind::f || r.number("model.beta", 0.0) > 0.0)
                    spec.guesses.push_back(k);
        } else {
            for (const std::string& name : split_list(g)) {
                try {
                    spec.guesses.push_back(guess_kind_from_string(name));
                } catch (const std::exception& e) {
                    fail("solver.guess", e.what());
                }
            }
            if (spec.guesses.empty()) fail("solver.guess", "empty guess list");
        }
    }
    {
        int threads = 1;
        if (const char* env = std::getenv("BECGS_THREADS")) threads = std::atoi(env);
        spec.threads = r.integer("solver.threads", threads > 0 ? threads : 1);
        if (spec.threads < 1) fail("solver.threads", "must be >= 1");
    }

    spec.epsilon_sog = r.number("atkm.epsilon_sog", 1e-12);
    if (!(spec.epsilon_sog > 1e-15) || !(spec.epsilon_sog < 1e-2))
        fail("atkm.epsilon_sog", "must lie in (1e-15, 1e-2)");
    spec.delta = r.number("atkm.delta", 0.0);
    if (spec.delta < 0.0) fail("atkm.delta", "must be positive when given");
    spec.kernel_cache_dir = r.text("atkm.cache_dir", "");

    spec.output_dir = r.text("output.directory", "out");
    spec.write_field = r.boolean("output.write_field", true);
    spec.slices = split_list(r.text("output.slices", ""));

    // an explicitly requested Thomas-Fermi guess needs a defined radius
    if (spec.model.beta <= 0.0)
        for (GuessKind k : spec.guesses)
            if (k == GuessKind::f) fail("solver.guess", "kind f requires model.beta > 0");

    return spec;
}

RunSpec load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

}  // namespace becgs
