#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace darksim {

enum class Command { Run, Compare, Sweep, Impedance, GenTrace };
enum class Format { Csv, Json };

enum ExitCode : int { kExitOk = 0, kExitModel = 1, kExitUsage = 2, kExitAssert = 3 };

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// --help was given; what() holds the help text.
class HelpRequested : public UsageError {
public:
    using UsageError::UsageError;
};

struct RunSpec {
    Command command = Command::Run;
    std::string config_path;
    std::optional<std::string> trace_path;
    std::string output_path;
    Format format = Format::Csv;
    std::optional<std::string> mode;
    std::vector<double> tdps;
    std::optional<std::string> sweep;
    std::uint64_t seed = 0;
    std::optional<std::string> kind;
    std::size_t intervals = 1000;
    std::vector<std::pair<std::string, double>> asserts;
};

/// Throws UsageError on any bad invocation.
RunSpec parse_args(const std::vector<std::string>& args);

/// Runs a validated spec and returns the exit status.
int execute(const RunSpec& spec);

/// parse_args + execute with the full exit-status contract.
int cli_main(int argc, char** argv);

}  // namespace darksim
