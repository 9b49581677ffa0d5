#pragma once

#include <cstdint>
#include <exception>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "citerank/classify.hpp"
#include "citerank/corpus.hpp"
#include "citerank/doublerank.hpp"
#include "citerank/synth.hpp"

namespace citerank::cli {

inline constexpr const char* kToolName = "citerank";
inline constexpr const char* kVersion = "0.1.0";

enum class Command { indicators, doublerank, histogram, classify, summary, synth };
enum class Format { csv, json };

enum ExitCode : int {
    kOk = 0,
    kInternal = 1,     // unexpected exception
    kUsage = 2,        // bad flags, out-of-domain parameters, unknown groups
    kParse = 3,        // unreadable input, schema or row errors
    kInsufficient = 4, // not enough data for the requested analysis
    kInvariant = 5,    // internal invariant violated
};

struct RunConfig {
    Command command = Command::indicators;
    std::vector<std::string> inputs;
    std::string schema_path;
    std::filesystem::path out_dir = ".";
    Format format = Format::csv;
    std::uint64_t seed = 1;
    bool timestamp = false;

    // corpus
    CorpusSchema schema;
    RankPolicy tie_policy = RankPolicy::mean_of_ties;
    std::vector<std::string> groups;
    std::vector<double> percentiles = {50.0, 10.0, 5.0, 1.0};
    bool strict_ties = false;
    double r3_min_top1 = 1.0;

    // doublerank
    AnchorPair anchors = AnchorPair::all_and_top10;
    std::optional<double> window;
    double tolerance = kDefaultDeviationTolerance;

    // histogram
    std::optional<std::string> reference_group;
    std::string anchor_bin = "32-49";
    bool fit = false;
    std::optional<double> model_mu;
    std::optional<double> model_sigma;

    // classify / summary
    InstitutionMapping mapping;
    bool ratios_input = false;
    double stability = kDefaultStability;
    SpreadDenominator denominator = SpreadDenominator::min;
    double min_top1 = kDefaultMinTop1;
    std::vector<std::string> periods = default_periods();
    std::vector<std::string> fields;

    // synth
    SyntheticSpec synth;
    std::optional<double> mu_shift; // statistical generator instead of the exact one
    std::string inject = "none";    // none | inflate | deflate | shift
    std::size_t extra = 0;
    double remove_fraction = 0.5;
    std::size_t top_m = 20;
    double factor = 2.0;
    bool group_only = false;
};

/// Files written by one run, in emission order.
struct RunResult {
    std::vector<std::filesystem::path> files;
    std::vector<std::string> warnings;
};

/// Executes one command. Throws citerank::Error subclasses on failure.
RunResult run(const RunConfig& config);

/// Canonical text of every output-affecting setting (excludes the output
/// directory and the timestamp switch).
std::string canonical_config(const RunConfig& config);

/// FNV-1a 64-bit digest of canonical_config, as 16 hex digits.
std::string config_digest(const RunConfig& config);

/// Maps an exception to the process exit status.
int exit_code_for(const std::exception& error);

/// Parses argv, applies the schema file, runs, reports errors on `err`.
int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

} // namespace citerank::cli
