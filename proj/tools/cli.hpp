#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cosym/equilibria.hpp"
#include "cosym/quantum.hpp"
#include "cosym/stability.hpp"
#include "cosym/symmetry.hpp"
#include "cosym/threebody.hpp"

namespace cosym::cli {

/// Flat key = value configuration: one pair per line, '#' comments, dotted
/// keys for nesting. Unknown keys are rejected by the commands.
class Config {
public:
    static Config parse(const std::string& text);
    static Config load(const std::string& path);

    bool has(const std::string& key) const;
    std::string get(const std::string& key, const std::string& fallback) const;
    std::string require(const std::string& key) const;
    double get_double(const std::string& key, double fallback) const;
    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const;
    std::size_t get_size(const std::string& key, std::size_t fallback) const;
    std::vector<double> get_vector(const std::string& key) const;

    const std::map<std::string, std::string>& entries() const { return kv_; }
    const std::string& raw_text() const { return raw_; }

    /// Throws ParseError when a key is outside the known vocabulary.
    void reject_unknown_keys() const;

private:
    std::map<std::string, std::string> kv_;
    std::string raw_;
};

/// Monomial-sum parser: "0.5 q1^2 + 0.5 p1^2 - 1.2 t q1" over the chart
/// coordinates t, q1..qn, p1..pn.
ScalarField parse_polynomial_field(const DarbouxChart& chart,
                                   const std::string& name,
                                   const std::string& text);

/// Named built-in system assembled from a config.
struct SystemBundle {
    std::string kind;
    DarbouxChart chart;
    ScalarField h;
    std::optional<SymmetryAction> action;
    std::optional<ThreeBodyParams> three_body;
    Vec default_state; // (t, q, p) used when `state` is absent
};

SystemBundle build_system(const Config& config);

/// Outcome of one command: the exit code, the report key/value lines, and
/// the output files (written atomically by the driver).
struct CommandResult {
    int exit_code = 0;
    std::map<std::string, std::string> report;
    std::vector<std::pair<std::string, std::string>> files;
};

CommandResult cmd_verify(const Config& config, std::uint64_t seed);
CommandResult cmd_integrate(const Config& config, std::uint64_t seed);
CommandResult cmd_rep(const Config& config, std::uint64_t seed);
CommandResult cmd_stability(const Config& config, std::uint64_t seed);

/// Writes content to dir/name via a temporary file and an atomic rename.
void write_atomic(const std::string& dir, const std::string& name,
                  const std::string& content);

/// Full driver: `cosym <verify|integrate|rep|stability> --config <path>
/// [--out <dir>] [--seed <u64>]`. Returns the process exit code.
int run_cli(int argc, const char* const* argv);

} // namespace cosym::cli
