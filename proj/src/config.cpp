#include "bhacs/config.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <vector>

#include "bhacs/seeds.hpp"
#include "bhacs/snapshot.hpp"
#include "bhacs/topology.hpp"

namespace bhacs {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = s.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(trim(s.substr(start)));
            return out;
        }
        out.push_back(trim(s.substr(start, pos - start)));
        start = pos + 1;
    }
}

// Splits "head:payload"; payload empty when there is no colon.
void split_spec(const std::string& spec, std::string& head, std::string& payload) {
    const std::size_t pos = spec.find(':');
    if (pos == std::string::npos) {
        head = trim(spec);
        payload = "";
    } else {
        head = trim(spec.substr(0, pos));
        payload = trim(spec.substr(pos + 1));
    }
}

}  // namespace

int parse_int(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw Error(what + ": empty integer");
    errno = 0;
    char* end = nullptr;
    const long v = std::strtol(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw Error(what + ": '" + t + "' is not an integer");
    if (v < -2147483647L || v > 2147483647L) throw Error(what + ": '" + t + "' out of range");
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty() || t[0] == '-') throw Error(what + ": '" + t + "' is not a non-negative integer");
    errno = 0;
    char* end = nullptr;
    const unsigned long long v = std::strtoull(t.c_str(), &end, 10);
    if (errno != 0 || end != t.c_str() + t.size())
        throw Error(what + ": '" + t + "' is not a non-negative integer");
    return static_cast<std::uint64_t>(v);
}

double parse_double(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t.empty()) throw Error(what + ": empty number");
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(t.c_str(), &end);
    if (errno != 0 || end != t.c_str() + t.size())
        throw Error(what + ": '" + t + "' is not a number");
    return v;
}

std::array<int, 4> parse_int4(const std::string& s, const std::string& what) {
    const auto parts = split(s, ',');
    if (parts.size() != 4) throw Error(what + ": expected 4 comma-separated integers");
    std::array<int, 4> out;
    for (int i = 0; i < 4; ++i) out[i] = parse_int(parts[i], what);
    return out;
}

Config parse_config_text(const std::string& text, const std::string& origin) {
    Config cfg;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    while (std::getline(is, line)) {
        ++lineno;
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        const std::size_t eq = stripped.find('=');
        const std::string where = origin + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw Error(where + ": expected key = value, got '" + stripped + "'");
        const std::string key = trim(stripped.substr(0, eq));
        const std::string value = trim(stripped.substr(eq + 1));
        if (key.empty()) throw Error(where + ": empty key");

        if (key == "grid_n") cfg.grid_n = parse_int(value, where + " grid_n");
        else if (key == "metric") cfg.metric = value;
        else if (key == "seed") cfg.seed = value;
        else if (key == "max_iters") cfg.max_iters = parse_int(value, where + " max_iters");
        else if (key == "grad_tol") cfg.grad_tol = parse_double(value, where + " grad_tol");
        else if (key == "initial_step")
            cfg.initial_step = parse_double(value, where + " initial_step");
        else if (key == "armijo_c") cfg.armijo_c = parse_double(value, where + " armijo_c");
        else if (key == "armijo_shrink")
            cfg.armijo_shrink = parse_double(value, where + " armijo_shrink");
        else if (key == "checkpoint_every")
            cfg.checkpoint_every = parse_int(value, where + " checkpoint_every");
        else if (key == "rng_seed") cfg.rng_seed = parse_u64(value, where + " rng_seed");
        else if (key == "out_dir") cfg.out_dir = value;
        else if (key == "glue_j") cfg.glue_j = parse_int(value, where + " glue_j");
        else if (key == "glue_center") cfg.glue_center = value;
        else if (key == "glue_scale") cfg.glue_scale = parse_double(value, where + " glue_scale");
        else if (key == "glue_eps0") cfg.glue_eps0 = parse_double(value, where + " glue_eps0");
        else if (key == "glue_close_tol")
            cfg.glue_close_tol = parse_double(value, where + " glue_close_tol");
        else if (key == "glue_sigma_min")
            cfg.glue_sigma_min = parse_double(value, where + " glue_sigma_min");
        else if (key == "scan_radii") cfg.scan_radii = value;
        else if (key == "scan_eps0") cfg.scan_eps0 = parse_double(value, where + " scan_eps0");
        else if (key == "scan_stride")
            cfg.scan_stride = parse_int(value, where + " scan_stride");
        else
            throw Error(where + ": unknown key '" + key + "'");
    }
    return cfg;
}

Config parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw Error("config: cannot open '" + path + "'");
    std::ostringstream buf;
    buf << is.rdbuf();
    return parse_config_text(buf.str(), path);
}

MetricField metric_from_spec(const std::string& spec) {
    std::string head, payload;
    split_spec(spec, head, payload);
    if (head == "flat") {
        if (!payload.empty()) throw Error("metric: 'flat' takes no parameters");
        return MetricField::flat();
    }
    if (head == "diag") {
        const auto parts = split(payload, ',');
        if (parts.size() != 4) throw Error("metric: diag needs 4 comma-separated entries");
        Mat4 g = Mat4::zero();
        for (int i = 0; i < 4; ++i) g(i, i) = parse_double(parts[i], "metric diag entry");
        return MetricField::constant(g);
    }
    if (head == "full") {
        const auto parts = split(payload, ',');
        if (parts.size() != 16) throw Error("metric: full needs 16 comma-separated entries");
        Mat4 g;
        for (int i = 0; i < 16; ++i) g.a[i] = parse_double(parts[i], "metric entry");
        return MetricField::constant(g);
    }
    throw Error("metric: unknown descriptor '" + spec + "' (want flat, diag:..., full:...)");
}

CompatibleJField seed_from_spec(const std::string& spec, const Grid& grid,
                                const MetricField& metric, std::uint64_t rng_seed) {
    std::string head, payload;
    split_spec(spec, head, payload);
    if (head == "constant") return constant_seed(grid, metric);
    if (head == "perturbation") {
        const auto parts = split(payload, ',');
        if (parts.size() != 2) throw Error("seed: perturbation needs eps,mode");
        return perturbation_seed(grid, metric, parse_double(parts[0], "seed eps"),
                                 parse_int(parts[1], "seed mode"));
    }
    if (head == "greatcircle")
        return greatcircle_seed(grid, metric, parse_int(payload, "seed winding"));
    if (head == "sphere") {
        const auto parts = split(payload, ',');
        if (parts.size() != 6) throw Error("seed: sphere needs 6 plane degrees");
        std::array<int, 6> degrees;
        for (int i = 0; i < 6; ++i) degrees[i] = parse_int(parts[i], "seed degree");
        return sphere_map_seed(degrees, grid, metric);
    }
    if (head == "random") {
        const double amp = payload.empty() ? 0.3 : parse_double(payload, "seed amplitude");
        return random_compatible(grid, metric, rng_seed, amp);
    }
    if (head == "snapshot") {
        if (payload.empty()) throw Error("seed: snapshot needs a path");
        Snapshot snap = load_snapshot(payload);
        if (snap.field.grid != grid)
            throw Error("seed: snapshot grid n=" + std::to_string(snap.field.grid.n) +
                        " does not match configured grid_n=" + std::to_string(grid.n));
        return validate(snap.field, metric);
    }
    throw Error("seed: unknown descriptor '" + spec + "'");
}

}  // namespace bhacs
