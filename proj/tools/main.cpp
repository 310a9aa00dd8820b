#include "blab/config.hpp"
#include "blab/report.hpp"
#include "blab/scenario.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>

namespace fs = std::filesystem;

namespace {

struct CommonArgs {
    std::string configPath;
    std::vector<std::string> overrides;
    std::string outDir = "blab-out";
    long long seed = -1;
    bool quiet = false;
};

void attachCommon(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.configPath, "configuration file (ini-style sections)");
    cmd->add_option("--set", args.overrides, "override section.key=value (repeatable)")
        ->take_all();
    cmd->add_option("--out", args.outDir, "output directory for reports");
    cmd->add_option("--seed", args.seed, "seed override");
    cmd->add_flag("--quiet", args.quiet, "suppress stdout summaries");
}

blab::cfg::Config loadConfig(const CommonArgs& args) {
    blab::cfg::Config cfg;
    if (!args.configPath.empty()) cfg = blab::cfg::Config::fromFile(args.configPath);
    for (const auto& o : args.overrides) cfg.applyOverride(o);
    if (args.seed >= 0) cfg.applyOverride("scenario.seed=" + std::to_string(args.seed));
    if (!args.outDir.empty()) cfg.applyOverride("output.dir=" + args.outDir);
    return cfg;
}

int writeAndSummarize(const blab::scen::ScenarioResult& res, const CommonArgs& args) {
    const fs::path out = args.outDir;
    fs::create_directories(out);
    {
        std::ofstream f(out / (res.name + ".json"));
        f << blab::report::dumpJson(res.report);
    }
    for (const auto& [name, content] : res.csvFiles) {
        std::ofstream f(out / name);
        f << content;
    }
    for (const auto& [name, content] : res.binaryFiles) {
        std::ofstream f(out / name, std::ios::binary);
        f.write(content.data(), (std::streamsize)content.size());
    }
    if (!args.quiet) {
        std::cout << res.name << ": " << (res.violations == 0 ? "ok" : "VIOLATIONS") << " ("
                  << res.violations << " violated checks), report " << (out / (res.name + ".json"))
                  << "\n";
    }
    return res.violations == 0 ? 0 : 2;
}

void printCantor(const blab::scen::ScenarioResult& res) {
    const auto& c = res.report["cantor"];
    std::cout << "C_" << c["stage"].get<int>() << " (" << c["scheme"].get<std::string>()
              << ") = ";
    const auto& ivs = c["intervals"];
    for (size_t i = 0; i < ivs.size(); ++i) {
        if (i) std::cout << " ∪ ";
        std::cout << ivs[i].get<std::string>();
    }
    std::cout << "\nmeasure = " << c["measure_exact"].get<std::string>() << " ("
              << blab::report::formatDouble(c["measure"].get<double>()) << ")\n"
              << "rings = " << c["ring_count"].get<int>() << ", limit measure = "
              << blab::report::formatDouble(c["limit_measure"].get<double>()) << "\n"
              << "scheme discrepancy: "
              << c["scheme_discrepancy"]["note"].get<std::string>() << "\n";
}

void printMoments(const blab::scen::ScenarioResult& res) {
    const auto& j = res.report;
    std::cout << "m  n   |direct|          |closed|          agreement\n";
    for (const auto& e : j["entries"]) {
        std::printf("%-2d %-3d %-17.3e %-17.3e %-17.3e\n", e["m"].get<int>(), e["n"].get<int>(),
                    e["direct_abs"].get<double>(), e["closed_abs"].get<double>(),
                    e["agreement"].get<double>());
    }
    std::cout << "max direct " << blab::report::formatDouble(j["max_direct"].get<double>())
              << ", max closed " << blab::report::formatDouble(j["max_closed"].get<double>())
              << ", verdict " << j["verdict"].get<std::string>() << "\n";
}

void printSweep(const blab::scen::ScenarioResult& res) {
    std::cout << "x        functional        delta             mass_fraction\n";
    for (const auto& e : res.report["entries"]) {
        std::printf("%-8g %-17.10g %-17.6e %-.6e\n", e["x"].get<double>(),
                    e["functional"].get<double>(), e["delta"].get<double>(),
                    e["mass_fraction"].get<double>());
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"beltrami laboratory: Cantor-supported extremal dilatation experiments"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd;
        CommonArgs args;
        std::function<blab::scen::ScenarioResult(const blab::cfg::Config&)> run;
        std::function<void(const blab::scen::ScenarioResult&)> print;
    };
    std::vector<Sub> subs;
    auto add = [&](const char* name, const char* help, auto runner,
                   std::function<void(const blab::scen::ScenarioResult&)> printer = {}) {
        Sub s;
        s.cmd = app.add_subcommand(name, help);
        s.run = runner;
        s.print = std::move(printer);
        subs.push_back(std::move(s));
        attachCommon(subs.back().cmd, subs.back().args);
    };

    add("construct-i", "deformed extremal on the radial Cantor set, full check suite",
        blab::scen::runConstructionI);
    add("construct-ii", "deformation with local-extremality probes", blab::scen::runConstructionII);
    add("inequality-audit", "randomized certified-pair inequality battery",
        blab::scen::runInequalityAudit);
    add("cantor", "stage/measure/ring dump", blab::scen::runCantorDump, printCantor);
    add("moments", "vanishing-moment battery for the trivial perturbations",
        blab::scen::runMoments, printMoments);
    add("hamilton-sweep", "concentrating-family functional sweep", blab::scen::runHamiltonSweep,
        printSweep);
    add("solve", "single Beltrami solve with residual certificate", blab::scen::runSolve);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        std::cerr << app.help() << "\n";
        return 1;
    }

    for (auto& s : subs) {
        if (!s.cmd->parsed()) continue;
        try {
            const auto cfg = loadConfig(s.args);
            const auto res = s.run(cfg);
            if (!s.args.quiet && s.print) s.print(res);
            return writeAndSummarize(res, s.args);
        } catch (const blab::cfg::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return 1;
        } catch (const std::exception& e) {
            std::cerr << "error: " << e.what() << "\n";
            return 1;
        }
    }
    std::cerr << app.help() << "\n";
    return 1;
}
