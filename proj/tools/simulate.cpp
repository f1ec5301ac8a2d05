#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "jcm/config.hpp"
#include "jcm/run.hpp"

namespace {

const char* error_kind(const jcm::JcmError& e) {
    if (dynamic_cast<const jcm::ConfigError*>(&e)) return "config";
    if (dynamic_cast<const jcm::DepolarizationError*>(&e)) return "depolarization";
    if (dynamic_cast<const jcm::GaugeSingularityError*>(&e)) return "gauge";
    if (dynamic_cast<const jcm::PhysicalityError*>(&e)) return "physicality";
    if (dynamic_cast<const jcm::TruncationError*>(&e)) return "truncation";
    if (dynamic_cast<const jcm::IntegrationError*>(&e)) return "integration";
    return "runtime";
}

int fail(const std::string& kind, const std::string& message, int code = 1) {
    std::cerr << nlohmann::json{{"error", kind}, {"message", message}}.dump() << std::endl;
    return code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Jaynes-Cummings dynamics: exact, mean-field, and collisional runs"};
    std::string config_path;
    std::string mode;
    std::string out_dir;
    double depol_eps = 0.0;
    app.add_option("--config", config_path, "run configuration file (key=value lines)")
        ->required();
    app.add_option("--mode", mode, "override the configured run mode")
        ->check(CLI::IsMember({"exact", "meanfield", "collisional", "compare"}));
    app.add_option("--out", out_dir, "override the configured output directory");
    app.add_option("--depolarization-guard", depol_eps,
                   "override the |p1 - pm1| guard threshold")
        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        return fail("usage", e.what(), e.get_exit_code());
    }

    try {
        std::ifstream in(config_path);
        if (!in) throw jcm::JcmError("cannot read config file " + config_path);
        std::stringstream buf;
        buf << in.rdbuf();
        jcm::RunConfig cfg = jcm::parse_config(buf.str());
        if (!mode.empty()) cfg.mode = jcm::run_mode_from_string(mode);
        if (!out_dir.empty()) cfg.output = out_dir;
        if (depol_eps > 0.0) cfg.guards.depolarization_eps = depol_eps;
        for (const auto& f : jcm::run(cfg)) std::cout << "wrote " << f.string() << '\n';
        return 0;
    } catch (const jcm::JcmError& e) {
        nlohmann::json j{{"error", error_kind(e)}, {"message", e.what()}};
        if (e.has_time()) j["time"] = e.time();
        std::cerr << j.dump() << std::endl;
        return 1;
    } catch (const std::exception& e) {
        return fail("internal", e.what());
    }
}
