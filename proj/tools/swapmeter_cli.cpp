// Copyright 2026 The swapmeter Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Command-line scenario runner.
//
//   swapmeter run <scenario.json> [--format json|csv] [--out PATH] [--seed N] [--shots N]
//   swapmeter validate <scenario.json>
//   swapmeter suite <dir> [--write]
//
// Exit status: 0 success, 1 invalid scenario or I/O error, 2 a suite entry
// outside tolerance.

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "swapmeter/scenario.hpp"

namespace fs = std::filesystem;
namespace sc = swapmeter::scenario;

namespace {

constexpr int kExitInvalid = 1;
constexpr int kExitTolerance = 2;

/// ISO-8601 UTC time from SOURCE_DATE_EPOCH, if set. Records carry no
/// timestamp otherwise, so reruns are byte-identical.
std::optional<std::string> record_timestamp() {
    const char *env = std::getenv("SOURCE_DATE_EPOCH");
    if (env == nullptr || *env == '\0') return std::nullopt;
    char *end = nullptr;
    const long long secs = std::strtoll(env, &end, 10);
    if (end == env || *end != '\0') return std::nullopt;
    const std::time_t t = static_cast<std::time_t>(secs);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
}

void print_warnings(const sc::Scenario &s) {
    for (const auto &w : s.warnings) std::cerr << "warning: " << s.name << ": " << w << "\n";
}

fs::path resolve_output(const fs::path &scenario_file, const std::string &output) {
    const fs::path p(output);
    return p.is_absolute() ? p : scenario_file.parent_path() / p;
}

int cmd_run(const fs::path &file, const std::string &format, const std::optional<std::string> &out,
            std::optional<std::uint64_t> seed, std::optional<std::uint64_t> shots) {
    sc::Scenario s;
    try {
        s = sc::load_scenario(file);
    } catch (const swapmeter::Error &e) {
        std::cerr << "error: " << file.string() << ": " << e.what() << "\n";
        return kExitInvalid;
    }
    if (seed) s.seed = *seed;
    if (shots) s.shots = *shots;
    print_warnings(s);
    try {
        const sc::Format f = format == "csv" ? sc::Format::Csv : sc::Format::Json;
        const sc::ResultRecord rec = sc::run_scenario(s, record_timestamp());
        std::optional<fs::path> target;
        if (out) {
            target = fs::path(*out);
        } else if (s.output) {
            target = resolve_output(file, *s.output);
        }
        if (!target) {
            std::cout << sc::emit(rec, f);
            return 0;
        }
        for (const auto &p : sc::write_record(rec, f, *target)) std::cerr << "wrote " << p.string() << "\n";
    } catch (const swapmeter::Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitInvalid;
    }
    return 0;
}

int cmd_validate(const fs::path &file) {
    try {
        const sc::Scenario s = sc::load_scenario(file);
        print_warnings(s);
        std::cout << "ok: " << s.name << " (task " << sc::to_string(s.task) << ", device " << s.device_label
                  << ", cutoff " << s.cutoff << ", " << s.phases << " phases, "
                  << (s.shots ? std::to_string(*s.shots) + " shots" : std::string("exact")) << ")\n";
    } catch (const swapmeter::Error &e) {
        std::cerr << "error: " << file.string() << ": " << e.what() << "\n";
        return kExitInvalid;
    }
    return 0;
}

int cmd_suite(const fs::path &dir, bool write) {
    std::vector<fs::path> files;
    std::error_code ec;
    for (const auto &entry : fs::directory_iterator(dir, ec)) {
        if (entry.is_regular_file() && entry.path().extension() == ".json") files.push_back(entry.path());
    }
    if (ec) {
        std::cerr << "error: cannot list '" << dir.string() << "': " << ec.message() << "\n";
        return kExitInvalid;
    }
    if (files.empty()) {
        std::cerr << "error: no scenarios in '" << dir.string() << "'\n";
        return kExitInvalid;
    }
    std::sort(files.begin(), files.end());

    int passed = 0, failed = 0, invalid = 0;
    std::printf("%-6s %-32s %-14s %-19s %-24s %-24s %s\n", "status", "scenario", "task", "device", "device_value",
                "oracle_value", "abs_error");
    for (const fs::path &file : files) {
        sc::Scenario s;
        try {
            s = sc::load_scenario(file);
            print_warnings(s);
            const sc::ResultRecord rec = sc::run_scenario(s, record_timestamp());
            const sc::Check check = sc::check_expected(s, rec);
            if (write && s.output) sc::write_record(rec, sc::Format::Json, resolve_output(file, *s.output));
            std::printf("%-6s %-32s %-14s %-19s %-24s %-24s %s\n", check.pass ? "PASS" : "FAIL", s.name.c_str(),
                        rec.task.c_str(), rec.device_mode.c_str(), sc::format_double(rec.device_value).c_str(),
                        sc::format_double(rec.oracle_value).c_str(), sc::format_double(rec.abs_error).c_str());
            for (const auto &msg : check.failures) std::printf("       %s\n", msg.c_str());
            (check.pass ? passed : failed) += 1;
        } catch (const swapmeter::Error &e) {
            std::printf("%-6s %-32s %s\n", "ERROR", file.filename().string().c_str(), e.what());
            ++invalid;
        }
    }
    std::printf("%d passed, %d failed, %d invalid\n", passed, failed, invalid);
    if (invalid > 0) return kExitInvalid;
    if (failed > 0) return kExitTolerance;
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"Simulator of the interferometric overlap measurement"};
    app.require_subcommand(1);

    std::string run_file, format = "json";
    std::optional<std::string> out;
    std::optional<std::uint64_t> seed, shots;
    CLI::App *run = app.add_subcommand("run", "Run one scenario and emit its result record");
    run->add_option("scenario", run_file, "Scenario file")->required()->check(CLI::ExistingFile);
    run->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
    run->add_option("--out", out, "Output path (default: the scenario's output field, else stdout)");
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--shots", shots, "Override shots per phase")->check(CLI::PositiveNumber);

    std::string validate_file;
    CLI::App *validate = app.add_subcommand("validate", "Check a scenario without running it");
    validate->add_option("scenario", validate_file, "Scenario file")->required()->check(CLI::ExistingFile);

    std::string suite_dir;
    bool write = false;
    CLI::App *suite = app.add_subcommand("suite", "Run every scenario in a directory against its expected values");
    suite->add_option("dir", suite_dir, "Scenario directory")->required()->check(CLI::ExistingDirectory);
    suite->add_flag("--write", write, "Also write each scenario's output file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInvalid;
    }

    if (*run) return cmd_run(run_file, format, out, seed, shots);
    if (*validate) return cmd_validate(validate_file);
    return cmd_suite(suite_dir, write);
}
