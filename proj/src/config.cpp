#include "jcm/config.hpp"

#include <charconv>
#include <cmath>

#include "jcm/model_core.hpp"

namespace jcm {

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::exact: return "exact";
        case RunMode::meanfield: return "meanfield";
        case RunMode::collisional: return "collisional";
        case RunMode::compare: return "compare";
    }
    return "?";
}

std::string to_string(Method method) {
    return method == Method::rk4_fixed ? "rk4-fixed" : "rk45-adaptive";
}

RunMode run_mode_from_string(std::string_view name) {
    if (name == "exact") return RunMode::exact;
    if (name == "meanfield") return RunMode::meanfield;
    if (name == "collisional") return RunMode::collisional;
    if (name == "compare") return RunMode::compare;
    throw ConfigError("unknown mode '" + std::string(name) +
                      "' (expected exact, meanfield, collisional, or compare)");
}

GaussianState RunConfig::initial_state() const {
    GaussianState s;
    s.boson.B = B0;
    s.boson.nu = nu0;
    s.boson.x = x0;
    s.boson.y = y0;
    s.fermion.u = u0;
    s.fermion.v = v0;
    s.fermion.p1 = p1_0;
    s.fermion.pm1 = pm1_0;
    return s;
}

bool RunConfig::coherent_excited() const {
    return nu0 == 0.0 && x0 == 1.0 && y0 == cplx{} && u0 == 1.0 && v0 == cplx{} &&
           p1_0 == 1.0 && pm1_0 == 0.0;
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_real(std::string_view v, std::string_view key, int line) {
    if (!v.empty() && v.front() == '+') v.remove_prefix(1);
    double out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size() || !std::isfinite(out))
        throw ConfigError("malformed value for " + std::string(key) + ": '" +
                              std::string(v) + "' is not a finite real",
                          line);
    return out;
}

cplx parse_complex(std::string_view v, std::string_view key, int line) {
    const auto comma = v.find(',');
    if (comma == std::string_view::npos) return {parse_real(v, key, line), 0.0};
    const auto re = trim(v.substr(0, comma));
    const auto im = trim(v.substr(comma + 1));
    if (im.find(',') != std::string_view::npos)
        throw ConfigError("malformed value for " + std::string(key) + ": '" +
                              std::string(v) + "' should be re,im",
                          line);
    return {parse_real(re, key, line), parse_real(im, key, line)};
}

int parse_int(std::string_view v, std::string_view key, int line) {
    int out{};
    const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || p != v.data() + v.size())
        throw ConfigError("malformed value for " + std::string(key) + ": '" +
                              std::string(v) + "' is not an integer",
                          line);
    return out;
}

bool parse_bool(std::string_view v, std::string_view key, int line) {
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw ConfigError("malformed value for " + std::string(key) + ": '" + std::string(v) +
                          "' is not a boolean",
                      line);
}

}  // namespace

RunConfig parse_config(std::string_view text) {
    RunConfig cfg;
    int line_no = 0;
    int initial_line = 0;     // last line touching the initial state
    int integrator_line = 0;  // last line touching the integrator

    size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        std::string_view raw = text.substr(pos, nl == std::string_view::npos ? nl : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;

        if (const auto hash = raw.find('#'); hash != std::string_view::npos)
            raw = raw.substr(0, hash);
        raw = trim(raw);
        if (raw.empty()) continue;

        const auto eq = raw.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected key=value, got '" + std::string(raw) + "'", line_no);
        const auto key = trim(raw.substr(0, eq));
        const auto value = trim(raw.substr(eq + 1));
        if (key.empty()) throw ConfigError("missing key before '='", line_no);

        if (key == "epsilon") {
            cfg.params.epsilon = parse_real(value, key, line_no);
        } else if (key == "omega") {
            cfg.params.omega = parse_real(value, key, line_no);
        } else if (key == "coupling") {
            cfg.params.coupling = parse_real(value, key, line_no);
        } else if (key == "B0") {
            cfg.B0 = parse_complex(value, key, line_no);
            initial_line = line_no;
        } else if (key == "nu0") {
            cfg.nu0 = parse_real(value, key, line_no);
            if (cfg.nu0 < 0.0)
                throw ConfigError("nu0 must be nonnegative", line_no);
            initial_line = line_no;
        } else if (key == "x0") {
            cfg.x0 = parse_real(value, key, line_no);
            initial_line = line_no;
        } else if (key == "y0") {
            cfg.y0 = parse_complex(value, key, line_no);
            initial_line = line_no;
        } else if (key == "u0") {
            cfg.u0 = parse_real(value, key, line_no);
            if (cfg.u0 < 0.0 || cfg.u0 > 1.0)
                throw ConfigError("u0 must lie in [0, 1]", line_no);
            initial_line = line_no;
        } else if (key == "v0") {
            cfg.v0 = parse_complex(value, key, line_no);
            initial_line = line_no;
        } else if (key == "p1_0") {
            cfg.p1_0 = parse_real(value, key, line_no);
            if (cfg.p1_0 < 0.0 || cfg.p1_0 > 1.0)
                throw ConfigError("occupation p1_0 must lie in [0, 1]", line_no);
            initial_line = line_no;
        } else if (key == "pm1_0") {
            cfg.pm1_0 = parse_real(value, key, line_no);
            if (cfg.pm1_0 < 0.0 || cfg.pm1_0 > 1.0)
                throw ConfigError("occupation pm1_0 must lie in [0, 1]", line_no);
            initial_line = line_no;
        } else if (key == "alpha") {
            cfg.B0 = parse_complex(value, key, line_no);
            cfg.nu0 = 0.0;
            cfg.x0 = 1.0;
            cfg.y0 = cplx{};
            initial_line = line_no;
        } else if (key == "dt") {
            cfg.integrator.dt = parse_real(value, key, line_no);
            if (cfg.integrator.dt <= 0.0) throw ConfigError("dt must be positive", line_no);
            integrator_line = line_no;
        } else if (key == "t_max") {
            cfg.integrator.t_max = parse_real(value, key, line_no);
            if (cfg.integrator.t_max <= 0.0)
                throw ConfigError("t_max must be positive", line_no);
            integrator_line = line_no;
        } else if (key == "method") {
            if (value == "rk4-fixed")
                cfg.integrator.method = Method::rk4_fixed;
            else if (value == "rk45-adaptive")
                cfg.integrator.method = Method::rk45_adaptive;
            else
                throw ConfigError("unknown method '" + std::string(value) +
                                      "' (expected rk4-fixed or rk45-adaptive)",
                                  line_no);
            integrator_line = line_no;
        } else if (key == "rel_tol") {
            cfg.integrator.rel_tol = parse_real(value, key, line_no);
            if (cfg.integrator.rel_tol <= 0.0)
                throw ConfigError("rel_tol must be positive", line_no);
            integrator_line = line_no;
        } else if (key == "abs_tol") {
            cfg.integrator.abs_tol = parse_real(value, key, line_no);
            if (cfg.integrator.abs_tol <= 0.0)
                throw ConfigError("abs_tol must be positive", line_no);
            integrator_line = line_no;
        } else if (key == "renormalize") {
            cfg.integrator.renormalize = parse_bool(value, key, line_no);
            integrator_line = line_no;
        } else if (key == "record_every") {
            cfg.integrator.record_every = parse_int(value, key, line_no);
            if (cfg.integrator.record_every < 1)
                throw ConfigError("record_every must be a positive integer", line_no);
            integrator_line = line_no;
        } else if (key == "n_max") {
            if (value == "auto") {
                cfg.n_max = 0;
            } else {
                cfg.n_max = parse_int(value, key, line_no);
                if (cfg.n_max < 1)
                    throw ConfigError("n_max must be a positive integer or auto", line_no);
            }
        } else if (key == "mode") {
            try {
                cfg.mode = run_mode_from_string(value);
            } catch (const ConfigError& e) {
                throw ConfigError(e.what(), line_no);
            }
        } else if (key == "output") {
            cfg.output = std::string(value);
        } else if (key == "guard_mode") {
            if (value == "error")
                cfg.guards.clamp = false;
            else if (value == "clamp")
                cfg.guards.clamp = true;
            else
                throw ConfigError("unknown guard_mode '" + std::string(value) +
                                      "' (expected error or clamp)",
                                  line_no);
        } else {
            throw ConfigError("unknown key '" + std::string(key) + "'", line_no);
        }
    }

    try {
        validate_state(cfg.initial_state());
    } catch (const JcmError& e) {
        throw ConfigError(e.what(), initial_line);
    }
    try {
        cfg.integrator.validate();
    } catch (const JcmError& e) {
        throw ConfigError(e.what(), integrator_line);
    }
    return cfg;
}

}  // namespace jcm
