#include "wavemaps/config.hpp"

#include <algorithm>
#include <cstdlib>

#include "CLI11.hpp"
#include "wavemaps/error.hpp"
#include "wavemaps/illposed.hpp"

namespace wavemaps {

namespace {

void require(bool ok, const char* field, const std::string& what) {
    if (!ok) throw ConfigError(field, what);
}

bool even_at_least(std::size_t n, std::size_t lo) { return n >= lo && n % 2 == 0; }

}  // namespace

void ExperimentConfig::validate() const {
    require(std::find(kCommands.begin(), kCommands.end(), command) != kCommands.end(), "command",
            "unknown command '" + command + "'");
    require(D >= 2, "D", "target sphere needs D >= 2");
    require(even_at_least(grid_n, 64), "grid-n", "grid-n must be even and at least 64");
    require(grid_L > 0.0, "grid-L", "grid-L must be positive");
    require(eps > 0.0 && eps <= 1.0, "eps", "eps must lie in (0, 1]");
    require(!eps_list.empty(), "eps-list", "eps-list is empty");
    for (std::size_t k = 0; k < eps_list.size(); ++k) {
        require(eps_list[k] > 0.0 && eps_list[k] <= 1.0, "eps-list", "entries must lie in (0, 1]");
        if (k) require(eps_list[k] <= eps_list[k - 1], "eps-list", "entries must be non-increasing");
    }
    require(tau > 0.0 && tau <= 1.0, "tau", "tau must lie in (0, 1]");
    require(theta > 0.0, "theta", "theta must be positive");
    require(R > 0.0, "R", "R must be positive");
    require(even_at_least(n, 64), "n", "n must be even and at least 64");
    require(data_refine >= 1, "data-refine", "data-refine must be at least 1");
    require(picard_tol > 0.0, "picard-tol", "picard-tol must be positive");
    require(max_iter >= 1, "max-iter", "max-iter must be at least 1");
    require(t_count >= 1, "t-count", "t-count must be at least 1");
    require(stride >= 1, "stride", "stride must be at least 1");
    params.validate();
    require(data == "brownian" || data == "lacunary", "data", "data must be brownian or lacunary");
    require(even_at_least(hhl_n, 64), "hhl-n", "hhl-n must be even and at least 64");
    require(modes >= 1, "modes", "modes must be at least 1");
    require(m_min > 0.0 && m_max >= m_min, "m-max", "need 0 < m-min <= m-max");
    require(shifts >= 1, "shifts", "shifts must be at least 1");
    require(kappa_max > kappa0, "kappa-max", "kappa-max must exceed kappa0");
    try {
        LacunaryProfile{b, g, kappa0, kappa_max, eps_loc}.validate();
    } catch (const ConfigError& e) {
        std::string f = e.field();
        if (f == "eps_loc") f = "eps-loc";
        if (f == "kappa") f = "kappa-max";
        throw ConfigError(f, e.what());
    }
    require(t > 0.0, "t", "t must be positive");
    require(!out.empty(), "out", "output directory is empty");
}

Json ExperimentConfig::to_json() const {
    Json j;
    j["command"] = command;
    for_each_field(*this, [&](const char* key, const auto& v) { j[key] = v; });
    return j;
}

std::string default_output_dir() {
    const char* env = std::getenv("WAVEMAPS_OUT");
    return env && *env ? env : "out";
}

void apply_config_json(ExperimentConfig& c, const Json& j) {
    if (!j.is_object()) throw ConfigError("config", "config file must hold a JSON object");
    for (const auto& [key, value] : j.items()) {
        if (key == "command") {
            if (!value.is_string()) throw ConfigError("command", "must be a string");
            c.command = value.get<std::string>();
            continue;
        }
        bool found = false;
        for_each_field(c, [&](const char* name, auto& field) {
            if (key != name) return;
            found = true;
            using T = std::decay_t<decltype(field)>;
            const bool ok = [&] {
                if constexpr (std::is_same_v<T, bool>) return value.is_boolean();
                else if constexpr (std::is_same_v<T, std::string>) return value.is_string();
                else if constexpr (std::is_same_v<T, std::vector<double>>) return value.is_array();
                else if constexpr (std::is_floating_point_v<T>) return value.is_number();
                else if constexpr (std::is_unsigned_v<T>) return value.is_number_unsigned();
                else return value.is_number_integer();
            }();
            if (!ok) throw ConfigError(key, "wrong type in config file");
            try {
                value.get_to(field);
            } catch (const nlohmann::json::exception& e) {
                throw ConfigError(key, e.what());
            }
        });
        if (!found) throw ConfigError(key, "unknown key");
    }
}

void apply_config_file(ExperimentConfig& c, const std::filesystem::path& path) {
    Json j;
    try {
        j = Json::parse(read_file(path));
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError("config", path.string() + ": " + e.what());
    } catch (const Error& e) {
        throw ConfigError("config", e.what());
    }
    apply_config_json(c, j);
}

ExperimentConfig load_config(const std::vector<std::string>& args) {
    ExperimentConfig c;
    c.out = default_output_dir();

    // the file goes in first so flags land on top of it
    std::string config_path;
    for (std::size_t k = 0; k < args.size(); ++k) {
        if (args[k] == "--config" && k + 1 < args.size()) config_path = args[k + 1];
        else if (args[k].rfind("--config=", 0) == 0) config_path = args[k].substr(9);
    }
    if (!config_path.empty()) apply_config_file(c, config_path);

    CLI::App app("wave maps with Brownian data", "wavemaps");
    std::string command;
    app.add_option("command", command, "one of gen-path, hhl, solve, converge, illposed, norms");
    app.add_option("--config", config_path, "flat JSON config; flags override its values");
    for_each_field(c, [&](const char* key, auto& field) {
        auto* opt = app.add_option(std::string("--") + key, field);
        if constexpr (std::is_same_v<std::decay_t<decltype(field)>, std::vector<double>>) opt->delimiter(',');
    });

    std::vector<const char*> argv{"wavemaps"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        throw HelpRequested{app.help()};
    } catch (const CLI::ParseError& e) {
        throw ConfigError("arguments", e.what());
    }
    if (!command.empty()) c.command = command;
    if (c.command.empty()) throw ConfigError("command", "no command given");
    c.validate();
    return c;
}

}  // namespace wavemaps
