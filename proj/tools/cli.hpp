#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace riskorder::cli {

enum class OutputFormat { json, csv };

/// Everything one invocation needs; filled by the argument parser.
struct RunConfig {
    std::string command;

    // Input and output paths.
    std::string tree_path;
    std::string utility_path;
    std::string x_path;
    std::string y_path;
    std::string increment_path;
    std::string out_path;
    std::string csv_path;
    std::string export_x_path;
    std::string export_y_path;

    std::optional<double> tol;
    std::optional<std::uint64_t> seed;
    OutputFormat format = OutputFormat::json;
    std::string convention = "normalized";

    // solve
    double x0 = 1.0;
    std::string method = "dp";

    // order
    std::string relation = "mc";
    bool coupling = false;

    // counterexample / perturb
    double eps = 0.01;
    double alpha = 0.05;
    double K = 20.0;
    double p_more = 0.9;
    double p_less = 0.3;
    std::optional<int> target_time;
    std::vector<int> node_ids;

    // iid
    int periods = 1;
    std::optional<std::size_t> paths;
    unsigned workers = 1;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitInvalidInput = 2;

/// Parses argv-style arguments (args[0] is the program name), runs the
/// command and writes reports to `out` or to the requested files.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace riskorder::cli
