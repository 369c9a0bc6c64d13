#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "climalens/datahub.hpp"
#include "climalens/month.hpp"

namespace climalens::panel {

enum class Dependent { Idio, Sys };
enum class SeFlavor { Cluster, Hc1 };

const char* dependent_name(Dependent d);  // "idio" or "sys"

struct ModelSpec {
    std::string name;  // e.g. "M1"
    Dependent dependent = Dependent::Idio;
    std::vector<std::string> climate_vars;
    std::vector<std::string> control_vars;
    SeFlavor se_flavor = SeFlavor::Cluster;
    std::optional<MonthRange> window;

    std::vector<std::string> regressors() const;  // climate then controls
};

struct FeEstimate {
    ModelSpec spec;
    std::vector<std::string> names;  // regressor order
    std::vector<double> coef;
    std::vector<double> se;
    std::vector<std::string> stars;
    double r2_within = 0;
    int64_t n_obs = 0;
    int n_firms = 0;
    double alpha_hat = 0;                       // grand-mean normalization
    std::map<std::string, double> firm_effects; // gamma_i, sum n_i*gamma_i = 0
};

// Two-sided z-test tiers: |t| >= 2.5758 "**", >= 1.9600 "*", >= 1.6449
// dagger, else "". Cutoffs are inclusive.
std::string star_tier(double coef, double se);

// Within (firm-demeaning) estimator for y_it = x'b + alpha + gamma_i + e.
// Cluster-robust SEs by firm use the fixed-effects dof (n minus regressors
// minus absorbed firm count, plus one for the shared intercept). Throws
// NoWithinVariation, DegenerateClusters, EmptyPanel or RankDeficient.
FeEstimate fit_fixed_effects(const std::vector<datahub::PanelRow>& rows,
                             const std::vector<std::string>& regressor_names,
                             const ModelSpec& spec);

// Rows whose month lies in the window, order preserved. Throws EmptyPanel.
std::vector<datahub::PanelRow> subsample(const std::vector<datahub::PanelRow>& rows,
                                         const MonthRange& window);

struct BatteryResult {
    std::vector<FeEstimate> estimates;           // in spec order
    std::vector<std::pair<std::string, std::string>> failures;  // (model/dep, reason)
};

// Assembles each spec's panel from the merged data and fits it; a failing
// model is recorded and the battery moves on.
BatteryResult run_model_battery(const datahub::MergedPanel& merged,
                                const std::vector<ModelSpec>& specs);

// Canned regressor blocks. `standard_battery` builds M1..M6 for both
// dependents over the shared control set; the variants swap in extra
// climate-news or policy-uncertainty regressors.
std::vector<std::string> standard_controls();
std::vector<ModelSpec> standard_battery(SeFlavor se, std::optional<MonthRange> window);
std::vector<ModelSpec> chneg_battery(SeFlavor se, std::optional<MonthRange> window);
std::vector<ModelSpec> mccc_battery(SeFlavor se, std::optional<MonthRange> window);
std::vector<ModelSpec> cpu_battery(SeFlavor se, std::optional<MonthRange> window);

// Long-form results CSV: table,model,dependent,variable,coef,se,stars,
// n_obs,n_firms,r2_within. The constant row is written as variable "_cons"
// with an empty se.
void write_results_csv(std::ostream& out, const std::string& table,
                       const BatteryResult& result);

// Text table with variables as rows, models as columns, parenthesized SEs
// under the coefficients.
std::string render_table(const std::string& title, const std::vector<FeEstimate>& estimates);

}  // namespace climalens::panel
