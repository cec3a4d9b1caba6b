#include <iostream>
#include <string>
#include <vector>

#include "wavemaps/config.hpp"
#include "wavemaps/error.hpp"
#include "wavemaps/experiments.hpp"

int main(int argc, char** argv) {
    using namespace wavemaps;
    const std::vector<std::string> args(argv + 1, argv + argc);
    try {
        const auto cfg = load_config(args);
        const int code = execute(cfg);
        if (code != 0) std::cerr << "wavemaps: " << cfg.command << " failed, see " << cfg.out << "/" << cfg.command << ".json\n";
        return code;
    } catch (const HelpRequested& h) {
        std::cout << h.text;
        return 0;
    } catch (const ConfigError& e) {
        std::cerr << "wavemaps: config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "wavemaps: " << e.what() << "\n";
        return 1;
    }
}
