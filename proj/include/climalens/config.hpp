#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "climalens/datahub.hpp"
#include "climalens/fetch.hpp"
#include "climalens/month.hpp"
#include "climalens/panel.hpp"

namespace climalens::config {

struct RunConfig {
    MonthRange window{{2013, 12}, {2021, 8}};

    // Text inputs.
    std::string keywords_file;
    std::string vocab_cc_file, vocab_re_file, vocab_ghi_file;
    std::string lexicon_file;

    // Data inputs.
    std::string snippets_file;  // raw corpus for ingest
    std::string factors_file, returns_file;
    std::string firm_file, macro_file;

    // Fetch.
    std::string fixtures_dir = "fixtures";
    std::string base_url;
    std::vector<std::string> stations = {"BLOOMBERG", "CNBC", "FOXBUSINESS"};
    fetch::Transport transport = fetch::Transport::Replay;

    // Estimation.
    int min_days = 15;
    panel::SeFlavor se_flavor = panel::SeFlavor::Cluster;
    std::vector<std::string> batteries = {"standard"};  // standard|chneg|mccc|cpu|covid
    datahub::OvxTransform ovx = datahub::OvxTransform::LogReturn;

    std::string out_dir = "out";
    uint64_t seed = 42;
    bool strict = false;
};

// key=value per line, '#' comments. Unknown keys are errors. The
// CLIMALENS_FIXTURES environment variable, when set, overrides
// fixtures_dir (command-line flags still win over both).
RunConfig load_config(const std::string& path);

// Applies defaults and the environment override without a file.
RunConfig default_config();

// One keyword phrase per line, '#' comments, blanks skipped.
std::vector<std::string> load_keywords(const std::string& path);

// Throws ConfigError when the path is empty (naming the config key) or
// does not exist on disk.
void require_file(const std::string& path, const std::string& key);

// Canonical key=value rendering of the effective configuration, used for
// the manifest's config hash. Identical configs serialize identically.
std::string serialize(const RunConfig& cfg);

}  // namespace climalens::config
