#include "climalens/config.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "climalens/errors.hpp"

namespace climalens::config {

namespace {

std::string trim(const std::string& s) {
    size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(s);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

void apply_env_override(RunConfig& cfg) {
    if (const char* dir = std::getenv("CLIMALENS_FIXTURES"); dir && *dir)
        cfg.fixtures_dir = dir;
}

uint64_t parse_u64(const std::string& value, const std::string& key) {
    try {
        size_t used = 0;
        uint64_t v = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer for " + key + ": '" + value + "'");
    }
}

void apply(RunConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "window") {
        cfg.window = MonthRange::parse(value);
    } else if (key == "keywords") {
        cfg.keywords_file = value;
    } else if (key == "vocab_cc") {
        cfg.vocab_cc_file = value;
    } else if (key == "vocab_re") {
        cfg.vocab_re_file = value;
    } else if (key == "vocab_ghi") {
        cfg.vocab_ghi_file = value;
    } else if (key == "lexicon") {
        cfg.lexicon_file = value;
    } else if (key == "snippets") {
        cfg.snippets_file = value;
    } else if (key == "factors") {
        cfg.factors_file = value;
    } else if (key == "returns") {
        cfg.returns_file = value;
    } else if (key == "firm") {
        cfg.firm_file = value;
    } else if (key == "macro") {
        cfg.macro_file = value;
    } else if (key == "fixtures") {
        cfg.fixtures_dir = value;
    } else if (key == "base_url") {
        cfg.base_url = value;
    } else if (key == "stations") {
        cfg.stations = split_list(value);
    } else if (key == "transport") {
        if (value == "replay") cfg.transport = fetch::Transport::Replay;
        else if (value == "live") cfg.transport = fetch::Transport::Live;
        else throw ConfigError("transport must be replay or live, got '" + value + "'");
    } else if (key == "min_days") {
        cfg.min_days = static_cast<int>(parse_u64(value, key));
    } else if (key == "se") {
        if (value == "cluster") cfg.se_flavor = panel::SeFlavor::Cluster;
        else if (value == "hc1") cfg.se_flavor = panel::SeFlavor::Hc1;
        else throw ConfigError("se must be cluster or hc1, got '" + value + "'");
    } else if (key == "battery") {
        cfg.batteries = value == "all"
                            ? std::vector<std::string>{"standard", "chneg", "mccc",
                                                       "cpu", "covid"}
                            : split_list(value);
        for (const auto& b : cfg.batteries)
            if (b != "standard" && b != "chneg" && b != "mccc" && b != "cpu" &&
                b != "covid")
                throw ConfigError("unknown battery '" + b + "'");
    } else if (key == "ovx") {
        if (value == "log_return") cfg.ovx = datahub::OvxTransform::LogReturn;
        else if (value == "log_level") cfg.ovx = datahub::OvxTransform::LogLevel;
        else throw ConfigError("ovx must be log_return or log_level, got '" + value + "'");
    } else if (key == "out") {
        cfg.out_dir = value;
    } else if (key == "seed") {
        cfg.seed = parse_u64(value, key);
    } else if (key == "strict") {
        if (value == "true") cfg.strict = true;
        else if (value == "false") cfg.strict = false;
        else throw ConfigError("strict must be true or false, got '" + value + "'");
    } else {
        throw ConfigError("unknown config key '" + key + "'");
    }
}

}  // namespace

RunConfig default_config() {
    RunConfig cfg;
    apply_env_override(cfg);
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);

    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(path + " line " + std::to_string(line_no) +
                              ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            apply(cfg, key, value);
        } catch (const FormatError& e) {
            throw ConfigError(path + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    apply_env_override(cfg);
    return cfg;
}

std::vector<std::string> load_keywords(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open keywords file: " + path);
    std::vector<std::string> keywords;
    std::string line;
    while (std::getline(in, line)) {
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (!line.empty()) keywords.push_back(line);
    }
    return keywords;
}

std::string serialize(const RunConfig& cfg) {
    auto join = [](const std::vector<std::string>& items) {
        std::string s;
        for (const auto& i : items) s += (s.empty() ? "" : ",") + i;
        return s;
    };
    std::ostringstream out;
    out << "base_url=" << cfg.base_url << "\n"
        << "battery=" << join(cfg.batteries) << "\n"
        << "factors=" << cfg.factors_file << "\n"
        << "firm=" << cfg.firm_file << "\n"
        << "fixtures=" << cfg.fixtures_dir << "\n"
        << "keywords=" << cfg.keywords_file << "\n"
        << "lexicon=" << cfg.lexicon_file << "\n"
        << "macro=" << cfg.macro_file << "\n"
        << "min_days=" << cfg.min_days << "\n"
        << "out=" << cfg.out_dir << "\n"
        << "ovx=" << (cfg.ovx == datahub::OvxTransform::LogReturn ? "log_return"
                                                                  : "log_level")
        << "\n"
        << "returns=" << cfg.returns_file << "\n"
        << "se=" << (cfg.se_flavor == panel::SeFlavor::Cluster ? "cluster" : "hc1")
        << "\n"
        << "seed=" << cfg.seed << "\n"
        << "snippets=" << cfg.snippets_file << "\n"
        << "stations=" << join(cfg.stations) << "\n"
        << "strict=" << (cfg.strict ? "true" : "false") << "\n"
        << "transport=" << (cfg.transport == fetch::Transport::Replay ? "replay" : "live")
        << "\n"
        << "vocab_cc=" << cfg.vocab_cc_file << "\n"
        << "vocab_ghi=" << cfg.vocab_ghi_file << "\n"
        << "vocab_re=" << cfg.vocab_re_file << "\n"
        << "window=" << cfg.window.str() << "\n";
    return out.str();
}

void require_file(const std::string& path, const std::string& key) {
    if (path.empty()) throw ConfigError("config key '" + key + "' is not set");
    if (!std::filesystem::exists(path))
        throw ConfigError(key + " path does not exist: " + path);
}

}  // namespace climalens::config
