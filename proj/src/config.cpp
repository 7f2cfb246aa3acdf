#include "regidx/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "regidx/error.hpp"

namespace regidx {

namespace {

std::string trim(const std::string& s) {
    const std::size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string piece;
    std::istringstream in(s);
    while (std::getline(in, piece, sep)) out.push_back(trim(piece));
    return out;
}

long parse_int(const std::string& key, const std::string& value) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc() || ptr != value.data() + value.size())
        raise("BadConfig", key + ": expected an integer, got '" + value + "'");
    return v;
}

void apply(RunConfig& config, const std::string& key, const std::string& value) {
    if (key == "data") {
        config.data_path = value;
    } else if (key == "spec") {
        config.spec_path = value;
    } else if (key == "boundaries") {
        config.boundaries_path = value;
    } else if (key == "years") {
        config.years.clear();
        if (value != "all")
            for (const auto& y : split(value, ','))
                config.years.push_back(static_cast<int>(parse_int("years", y)));
    } else if (key == "scope") {
        config.scopes.clear();
        const auto names = value == "all"
                               ? std::vector<std::string>{"economic", "social", "socioeconomic"}
                               : split(value, ',');
        for (const auto& name : names) {
            if (name == "economic") config.scopes.push_back(Scope::Economic);
            else if (name == "social") config.scopes.push_back(Scope::Social);
            else if (name == "socioeconomic") config.scopes.push_back(Scope::Socioeconomic);
            else raise("BadConfig", "scope: unknown scope '" + name + "'");
        }
    } else if (key == "norm") {
        if (value == "minmax") config.norm = NormMethod::MinMax;
        else if (value == "zscore") config.norm = NormMethod::ZScore;
        else raise("BadConfig", "norm: expected minmax or zscore, got '" + value + "'");
    } else if (key == "retain") {
        if (value == "kaiser") {
            config.retention = RetentionRule::kaiser();
        } else if (value.rfind("variance:", 0) == 0) {
            double tau = 0.0;
            const std::string t = value.substr(9);
            auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), tau);
            if (ec != std::errc() || ptr != t.data() + t.size())
                raise("BadConfig", "retain: bad variance threshold '" + t + "'");
            config.retention = RetentionRule::variance(tau);
        } else {
            raise("BadConfig", "retain: expected kaiser or variance:<tau>, got '" + value + "'");
        }
    } else if (key == "k") {
        if (value == "auto") config.k.reset();
        else config.k = static_cast<std::size_t>(parse_int("k", value));
    } else if (key == "kmax") {
        config.k_max = static_cast<std::size_t>(parse_int("kmax", value));
    } else if (key == "seed") {
        config.seed = static_cast<std::uint64_t>(parse_int("seed", value));
    } else if (key == "restarts") {
        config.restarts = static_cast<std::size_t>(parse_int("restarts", value));
    } else if (key == "linkage") {
        if (value == "ward") config.linkage = Linkage::Ward;
        else if (value == "average") config.linkage = Linkage::Average;
        else if (value == "complete") config.linkage = Linkage::Complete;
        else raise("BadConfig", "linkage: expected ward, average or complete, got '" + value + "'");
    } else if (key == "out") {
        config.out_dir = value;
    } else if (key == "colors") {
        config.colors = split(value, ',');
    } else {
        raise("BadConfig", "unknown key '" + key + "'");
    }
}

} // namespace

RunConfig load_config(const std::optional<std::string>& path,
                      const std::vector<std::pair<std::string, std::string>>& flag_overrides) {
    RunConfig config;
    if (path) {
        std::ifstream in(*path);
        if (!in) raise("BadConfig", "cannot open config file " + *path);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const std::size_t hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const std::size_t eq = line.find('=');
            if (eq == std::string::npos)
                raise("BadConfig", *path + " line " + std::to_string(lineno) + ": expected key = value");
            apply(config, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
        }
    }
    for (const auto& [key, value] : flag_overrides) apply(config, key, value);
    validate_config(config);
    return config;
}

void validate_config(const RunConfig& config) {
    if (config.k && (*config.k < 2 || *config.k > 12))
        raise("BadConfig", "k: must be auto or in [2, 12], got " + std::to_string(*config.k));
    if (config.restarts < 1) raise("BadConfig", "restarts: must be at least 1");
    if (config.k_max < 3 || config.k_max > 50)
        raise("BadConfig", "kmax: must be in [3, 50], got " + std::to_string(config.k_max));
    if (config.scopes.empty()) raise("BadConfig", "scope: at least one scope required");
    if (!config.colors.empty() && config.colors.size() < 2)
        raise("BadConfig", "colors: need at least 2 ramp stops");
}

std::vector<std::pair<std::string, std::string>> RunConfig::echo() const {
    std::vector<std::pair<std::string, std::string>> out;
    out.emplace_back("data", data_path);
    out.emplace_back("spec", spec_path);
    out.emplace_back("boundaries", boundaries_path);
    std::string y;
    for (std::size_t i = 0; i < years.size(); ++i) {
        if (i) y += ",";
        y += std::to_string(years[i]);
    }
    out.emplace_back("years", years.empty() ? "all" : y);
    std::string s;
    for (std::size_t i = 0; i < scopes.size(); ++i) {
        if (i) s += ",";
        s += scope_name(scopes[i]);
    }
    out.emplace_back("scope", s);
    out.emplace_back("norm", norm == NormMethod::MinMax ? "minmax" : "zscore");
    out.emplace_back("retain", retention.kind == RetentionRule::Kind::Kaiser
                                   ? "kaiser"
                                   : "variance:" + std::to_string(retention.tau));
    out.emplace_back("k", k ? std::to_string(*k) : "auto");
    out.emplace_back("kmax", std::to_string(k_max));
    out.emplace_back("seed", std::to_string(seed));
    out.emplace_back("restarts", std::to_string(restarts));
    out.emplace_back("linkage", linkage == Linkage::Ward       ? "ward"
                                : linkage == Linkage::Average ? "average"
                                                              : "complete");
    std::string c;
    for (std::size_t i = 0; i < colors.size(); ++i) {
        if (i) c += ",";
        c += colors[i];
    }
    out.emplace_back("colors", colors.empty() ? "default" : c);
    out.emplace_back("out", out_dir);
    return out;
}

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) raise("FileNotReadable", "cannot open " + path + " for digest");
    std::uint64_t h = 14695981039346656037ULL;
    char buf[8192];
    while (in.read(buf, sizeof(buf)) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
        if (got < static_cast<std::streamsize>(sizeof(buf))) break;
    }
    return h;
}

std::string render_manifest(const RunManifest& manifest) {
    std::ostringstream out;
    out << "regidx " << manifest.tool_version << "\n";
    out << "digest-algorithm: fnv1a64\n\n";
    out << "[config]\n";
    for (const auto& [key, value] : manifest.config_echo) out << key << " = " << value << "\n";
    out << "\n[stages]\n";
    for (const auto& stage : manifest.stages) out << stage << "\n";
    out << "\n[outputs]\n";
    for (const auto& entry : manifest.outputs) out << entry.file << " " << entry.digest << "\n";
    return out.str();
}

} // namespace regidx
