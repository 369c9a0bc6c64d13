#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "climalens/corpus.hpp"
#include "climalens/datahub.hpp"
#include "climalens/factor_model.hpp"
#include "climalens/month.hpp"

namespace climalens::synth {

// Deterministic random streams: a fixed engine plus hand-rolled transforms
// so the byte-for-byte output depends only on the seed.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    double uniform();                    // (0, 1)
    double uniform(double lo, double hi);
    double normal();                     // Box-Muller
    int uniform_int(int lo, int hi);     // inclusive bounds

private:
    std::mt19937_64 engine_;
};

// Small-sample mean bias of the residual-sd estimator: E[sigma_hat] =
// c4(nu) * sigma for Gaussian errors with nu residual degrees of freedom.
double c4(int nu);

struct SynthOptions {
    uint64_t seed = 42;
    MonthRange window{{2013, 12}, {2021, 8}};
    int n_firms = 46;
    // Planted monthly-news effects on the two risk measures.
    double volcov_effect_idio = -0.12;
    double volcov_effect_sys = 0.06;
};

struct SynthData {
    std::vector<corpus::Snippet> snippets;
    std::vector<factor_model::FactorRecord> factors;
    std::vector<factor_model::DailyReturnRecord> returns;
    std::vector<datahub::RawFirmMonth> firm_covariates;
    std::vector<datahub::RawMacroMonth> macro;
};

// Generates a corpus whose monthly volume drives planted firm-risk effects:
// each firm-month's true beta is b_i + volcov_effect_sys * ln(count) and its
// true residual sd is (s_i + volcov_effect_idio * ln(count)) / c4(days - 4),
// so the estimated risks recover the planted coefficients without bias.
// Covariates and macro series are independent noise.
SynthData generate(const SynthOptions& options);

// Writes snippets.csv, factors.csv, returns.csv, firm.csv and macro.csv
// under dir (which must exist).
void write_inputs(const SynthData& data, const std::string& dir);

// Writes keywords.txt, vocab_cc.txt, vocab_re.txt, vocab_ghi.txt and
// lexicon.tsv matched to the generator's word pools, so a generated corpus
// can be indexed without external dictionaries.
void write_text_configs(const std::string& dir);

// All weekdays of the month, in order.
std::vector<Date> trading_days(MonthKey month);

}  // namespace climalens::synth
