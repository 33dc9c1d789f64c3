#include "gmdetect/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace gmdetect::config {

namespace {

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// "0 -1; 1 1" -> matrix rows separated by ';'
linalg::Matrix parse_matrix(const std::string& text)
{
    std::vector<std::vector<double>> rows;
    std::istringstream stream(text);
    std::string row_text;
    while (std::getline(stream, row_text, ';')) {
        std::istringstream row_stream(row_text);
        std::vector<double> row;
        double v;
        while (row_stream >> v) row.push_back(v);
        if (!row.empty()) rows.push_back(std::move(row));
    }
    if (rows.empty()) throw std::invalid_argument("empty matrix literal: " + text);
    linalg::Matrix m(rows.size(), rows[0].size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw std::invalid_argument("ragged matrix literal: " + text);
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            m(static_cast<int>(i), static_cast<int>(j)) = rows[i][j];
    }
    return m;
}

}  // namespace

KeyValueFile KeyValueFile::parse_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_string(buffer.str());
}

KeyValueFile KeyValueFile::parse_string(const std::string& text)
{
    KeyValueFile kv;
    std::istringstream stream(text);
    std::string line;
    std::string section;
    int lineno = 0;
    while (std::getline(stream, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[') {
            if (line.back() != ']')
                throw std::invalid_argument("bad section header at line " +
                                            std::to_string(lineno));
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument("expected key=value at line " +
                                        std::to_string(lineno));
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        kv.values_[section.empty() ? key : section + "." + key] = value;
    }
    return kv;
}

bool KeyValueFile::has(const std::string& key) const
{
    return values_.count(key) != 0;
}

std::string KeyValueFile::get(const std::string& key) const
{
    auto it = values_.find(key);
    if (it == values_.end())
        throw std::invalid_argument("missing config key: " + key);
    return it->second;
}

std::string KeyValueFile::get_or(const std::string& key,
                                 const std::string& fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
}

double KeyValueFile::get_double(const std::string& key) const
{
    return std::stod(get(key));
}

double KeyValueFile::get_double_or(const std::string& key, double fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stod(it->second);
}

std::int64_t KeyValueFile::get_int_or(const std::string& key,
                                      std::int64_t fallback) const
{
    auto it = values_.find(key);
    return it == values_.end() ? fallback : std::stoll(it->second);
}

std::vector<double> KeyValueFile::get_doubles(const std::string& key) const
{
    std::istringstream stream(get(key));
    std::vector<double> out;
    double v;
    while (stream >> v) out.push_back(v);
    return out;
}

RunConfig load_run_config(const std::string& path)
{
    return run_config_from(KeyValueFile::parse_file(path));
}

RunConfig run_config_from(const KeyValueFile& kv)
{
    RunConfig cfg;

    const std::string type = kv.get_or("model.type", "scalar_ou");
    if (kv.has("model.snr") && kv.has("model.snr_db"))
        throw std::invalid_argument("give model.snr or model.snr_db, not both");
    if (kv.has("model.snr_db"))
        cfg.snr_linear = std::pow(10.0, kv.get_double("model.snr_db") / 10.0);
    else if (kv.has("model.snr"))
        cfg.snr_linear = kv.get_double("model.snr");

    if (type == "scalar_ou") {
        cfg.scalar = true;
        cfg.scalar_a = kv.get_double_or("model.a", 1.0);
        cfg.model = scalar_ou(cfg.scalar_a, cfg.snr_linear.value_or(1.0));
    } else if (type == "matrices") {
        cfg.model = validate(parse_matrix(kv.get("model.A")),
                             parse_matrix(kv.get("model.B")),
                             parse_matrix(kv.get("model.C")));
        if (cfg.snr_linear) cfg.model = with_snr(cfg.model, *cfg.snr_linear);
    } else {
        throw std::invalid_argument("model.type must be scalar_ou or matrices");
    }

    const std::string kind = kv.get_or("sampling.kind", "regular");
    if (kind == "regular")
        cfg.sampling = RenewalSpec::regular(kv.get_double_or("sampling.s", 1.0));
    else if (kind == "poisson")
        cfg.sampling =
            RenewalSpec::poisson(kv.get_double_or("sampling.lambda", 1.0));
    else if (kind == "bernoulli")
        cfg.sampling = RenewalSpec::bernoulli(kv.get_double_or("sampling.S", 1.0),
                                              kv.get_double_or("sampling.p", 1.0));
    else if (kind == "empirical")
        cfg.sampling = RenewalSpec::empirical_from_file(kv.get("sampling.file"));
    else
        throw std::invalid_argument("unknown sampling.kind: " + kind);
    if (kv.has("sampling.scale"))
        cfg.sampling = cfg.sampling.scaled(kv.get_double("sampling.scale"));

    if (kv.has("sweep.param")) {
        cfg.sweep_param = kv.get("sweep.param");
        if (cfg.sweep_param != "a" && cfg.sweep_param != "s" &&
            cfg.sweep_param != "snr_db")
            throw std::invalid_argument("sweep.param must be a, s or snr_db");
        cfg.sweep_grid = kv.get_doubles("sweep.grid");
        if (cfg.sweep_grid.empty())
            throw std::invalid_argument("sweep.grid must be nonempty");
        for (std::size_t i = 1; i < cfg.sweep_grid.size(); ++i)
            if (!(cfg.sweep_grid[i] > cfg.sweep_grid[i - 1]))
                throw std::invalid_argument("sweep.grid must be strictly increasing");
    }

    cfg.chain_length = kv.get_int_or("mc.chain_length", 1000000);
    cfg.burn_in = kv.get_int_or("mc.burn_in", -1);
    cfg.replicates = static_cast<int>(kv.get_int_or("mc.replicates", 1));
    cfg.seed = static_cast<std::uint64_t>(kv.get_int_or("mc.seed", 0));

    if (kv.has("detect.N")) {
        cfg.detect_n.clear();
        for (double n : kv.get_doubles("detect.N"))
            cfg.detect_n.push_back(static_cast<std::int64_t>(n));
    }
    cfg.detect_epsilon = kv.get_double_or("detect.epsilon", 0.05);
    cfg.detect_trials = kv.get_int_or("detect.trials", 100000);
    cfg.detect_orientation = kv.get_or("detect.orientation", "h0noise");

    cfg.output_path = kv.get_or("output.file", "");
    return cfg;
}

}  // namespace gmdetect::config
