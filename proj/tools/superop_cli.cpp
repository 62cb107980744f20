// superop <spectrum|evolve|expect|verify> --config <path> [--output <path>]
//         [--format json|csv] [--verify] [--tolerance <float>]
//
// Exit codes: 0 success, 1 a verification check failed, 2 invalid input or
// usage, 3 internal numerical failure.

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "superop/cli/config.hpp"
#include "superop/cli/report.hpp"
#include "superop/cli/run.hpp"

namespace {

enum class LogLevel { quiet, info, debug };

LogLevel log_level()
{
    const char* env = std::getenv("SUPEROP_LOG");
    if (!env)
        return LogLevel::quiet;
    const std::string v = env;
    if (v == "debug")
        return LogLevel::debug;
    if (v == "info" || v == "1")
        return LogLevel::info;
    return LogLevel::quiet;
}

void log(LogLevel need, const std::string& msg)
{
    static const LogLevel level = log_level();
    if (static_cast<int>(level) >= static_cast<int>(need))
        std::cerr << (need == LogLevel::debug ? "debug: " : "info: ") << msg << "\n";
}

int fail(int code, const std::string& msg)
{
    std::string line = msg;
    for (auto& ch : line)
        if (ch == '\n')
            ch = ' ';
    std::cerr << "error: " << line << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv)
{
    using namespace superop;

    CLI::App app{"Superoperator algebra and truncated Fock-space dynamics for thermal bosonic modes"};
    std::string command;
    std::string config_path;
    std::string output_path;
    std::string format;
    bool verify = false;
    double tolerance = 0.0;
    app.add_option("command", command, "spectrum, evolve, expect or verify")
        ->required()
        ->check(CLI::IsMember({"spectrum", "evolve", "expect", "verify"}));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--output", output_path, "write the report here instead of stdout");
    app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--verify", verify, "cross-check the result against the Fock-space oracle");
    auto* tol_opt = app.add_option("--tolerance", tolerance, "override the tolerance of the numerical check")
                        ->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, e.what());
    }

    try {
        const auto start = std::chrono::steady_clock::now();
        const auto cfg = cli::load_config(config_path);
        const auto cmd = cli::parse_command(command);
        if (cfg.command && *cfg.command != cmd)
            throw invalid_input("config is for command '" + cli::to_string(*cfg.command) + "', not '" + command + "'");
        log(LogLevel::info, "running " + command + " on " + config_path);

        cli::RunOptions opt;
        opt.verify = verify;
        if (tol_opt->count() > 0)
            opt.tolerance = tolerance;
        const auto report = cli::run(cmd, cfg, opt);

        cli::Format fmt = cfg.output_format.value_or(cli::Format::json);
        if (!format.empty())
            fmt = cli::parse_format(format);
        const std::string text = fmt == cli::Format::json ? cli::dump_json(report.body) : report.csv;
        const std::string path = !output_path.empty() ? output_path : cfg.output_path.value_or("");
        if (path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(path, std::ios::binary);
            if (!out)
                throw invalid_input("cannot write output '" + path + "'");
            out << text;
        }
        const auto elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        log(LogLevel::debug, "finished in " + std::to_string(elapsed) + " s");

        if (!report.failures.empty()) {
            std::string names;
            for (const auto& n : report.failures)
                names += (names.empty() ? "" : ", ") + n;
            return fail(1, "verification failed: " + names);
        }
        return 0;
    } catch (const invalid_input& e) {
        return fail(2, std::string("invalid input: ") + e.what());
    } catch (const std::exception& e) {
        return fail(3, e.what());
    }
}
