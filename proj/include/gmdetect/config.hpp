#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "gmdetect/model.hpp"
#include "gmdetect/sampling.hpp"

namespace gmdetect::config {

// Flat key=value file with [section] headers; '#' starts a comment.
// Keys are stored as "section.key".
class KeyValueFile {
  public:
    static KeyValueFile parse_file(const std::string& path);
    static KeyValueFile parse_string(const std::string& text);

    bool has(const std::string& key) const;
    std::string get(const std::string& key) const;
    std::string get_or(const std::string& key, const std::string& fallback) const;
    double get_double(const std::string& key) const;
    double get_double_or(const std::string& key, double fallback) const;
    std::int64_t get_int_or(const std::string& key, std::int64_t fallback) const;
    std::vector<double> get_doubles(const std::string& key) const;

  private:
    std::map<std::string, std::string> values_;
};

struct RunConfig {
    GaussMarkovModel model;
    RenewalSpec sampling;
    // dB-to-linear conversion happens exactly once, at parse time
    std::optional<double> snr_linear;

    std::string sweep_param;  // "a" | "s" | "snr_db"
    std::vector<double> sweep_grid;

    std::int64_t chain_length = 1000000;
    std::int64_t burn_in = -1;
    int replicates = 1;
    std::uint64_t seed = 0;

    std::vector<std::int64_t> detect_n = {50, 100, 200, 400};
    double detect_epsilon = 0.05;
    std::int64_t detect_trials = 100000;
    std::string detect_orientation = "h0noise";

    std::string output_path;

    // model parameters kept for sweeps over a / snr
    bool scalar = false;
    double scalar_a = 1.0;
};

RunConfig load_run_config(const std::string& path);
RunConfig run_config_from(const KeyValueFile& kv);

}  // namespace gmdetect::config
