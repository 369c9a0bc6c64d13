#include "climalens/panel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"
#include "climalens/linreg.hpp"

namespace climalens::panel {

const char* dependent_name(Dependent d) { return d == Dependent::Idio ? "idio" : "sys"; }

std::vector<std::string> ModelSpec::regressors() const {
    std::vector<std::string> names = climate_vars;
    names.insert(names.end(), control_vars.begin(), control_vars.end());
    return names;
}

std::string star_tier(double coef, double se) {
    if (!(se > 0)) throw ConfigError("star tier needs a positive standard error");
    double t = std::abs(coef / se);
    if (t >= 2.5758) return "**";
    if (t >= 1.9600) return "*";
    if (t >= 1.6449) return "†";
    return "";
}

FeEstimate fit_fixed_effects(const std::vector<datahub::PanelRow>& rows,
                             const std::vector<std::string>& regressor_names,
                             const ModelSpec& spec) {
    if (rows.empty()) throw EmptyPanel("no rows to fit");
    size_t n = rows.size();
    size_t kx = regressor_names.size();

    // Dense firm index, deterministic by firm id.
    std::map<std::string, int> firm_index;
    for (const auto& r : rows) firm_index.emplace(r.firm_id, 0);
    int next_id = 0;
    for (auto& [firm, id] : firm_index) id = next_id++;
    int n_firms = next_id;
    if (n_firms < 2)
        throw DegenerateClusters("fixed-effects fit needs at least 2 firms, got " +
                                 std::to_string(n_firms));

    std::vector<int> firm_ids(n);
    for (size_t i = 0; i < n; ++i) firm_ids[i] = firm_index.at(rows[i].firm_id);

    std::vector<double> y(n);
    for (size_t i = 0; i < n; ++i)
        y[i] = spec.dependent == Dependent::Idio ? rows[i].y_id : rows[i].y_sys;

    // Demean column by column, rejecting regressors the fixed effects absorb.
    linreg::DesignMatrix X;
    X.values.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(kx));
    X.col_names = regressor_names;
    X.intercept_included = false;
    for (size_t j = 0; j < kx; ++j) {
        std::vector<double> col(n);
        double scale = 0;
        for (size_t i = 0; i < n; ++i) {
            col[i] = rows[i].regressors[j];
            scale = std::max(scale, std::abs(col[i]));
        }
        std::vector<double> demeaned = linreg::within_transform(col, firm_ids);
        double spread = 0;
        for (double v : demeaned) spread = std::max(spread, std::abs(v));
        if (spread <= 1e-12 * (1.0 + scale))
            throw NoWithinVariation(regressor_names[j]);
        for (size_t i = 0; i < n; ++i)
            X.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                demeaned[i];
    }
    std::vector<double> y_within = linreg::within_transform(y, firm_ids);
    Eigen::VectorXd yw = Eigen::Map<const Eigen::VectorXd>(
        y_within.data(), static_cast<Eigen::Index>(n));

    linreg::OlsFit fit = linreg::ols_fit(X, yw);

    // Absorbed dof: the kx slopes plus (n_firms - 1) dummies plus the
    // common intercept.
    Eigen::Index dof_k = static_cast<Eigen::Index>(kx) + n_firms;
    linreg::CovFlavor flavor = spec.se_flavor == SeFlavor::Cluster
                                   ? linreg::CovFlavor::Cluster
                                   : linreg::CovFlavor::Hc1;
    Eigen::MatrixXd cov = linreg::robust_cov(fit, X, flavor, &firm_ids, dof_k);

    FeEstimate est;
    est.spec = spec;
    est.names = regressor_names;
    est.coef.resize(kx);
    est.se.resize(kx);
    est.stars.resize(kx);
    for (size_t j = 0; j < kx; ++j) {
        est.coef[j] = fit.coef(static_cast<Eigen::Index>(j));
        est.se[j] = std::sqrt(cov(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(j)));
        est.stars[j] = star_tier(est.coef[j], est.se[j]);
    }
    est.r2_within = fit.r2;
    est.n_obs = static_cast<int64_t>(n);
    est.n_firms = n_firms;

    // Recover the levels: u = y - X beta on the raw data; alpha is the
    // grand mean of u and gamma_i the firm means about it.
    std::vector<double> firm_sum(static_cast<size_t>(n_firms), 0.0);
    std::vector<int64_t> firm_count(static_cast<size_t>(n_firms), 0);
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
        double xb = 0;
        for (size_t j = 0; j < kx; ++j) xb += rows[i].regressors[j] * est.coef[j];
        double u = y[i] - xb;
        total += u;
        firm_sum[static_cast<size_t>(firm_ids[i])] += u;
        firm_count[static_cast<size_t>(firm_ids[i])] += 1;
    }
    est.alpha_hat = total / static_cast<double>(n);
    for (const auto& [firm, id] : firm_index) {
        double mean = firm_sum[static_cast<size_t>(id)] /
                      static_cast<double>(firm_count[static_cast<size_t>(id)]);
        est.firm_effects[firm] = mean - est.alpha_hat;
    }
    return est;
}

std::vector<datahub::PanelRow> subsample(const std::vector<datahub::PanelRow>& rows,
                                         const MonthRange& window) {
    std::vector<datahub::PanelRow> out;
    for (const auto& r : rows)
        if (window.contains(r.month)) out.push_back(r);
    if (out.empty())
        throw EmptyPanel("no rows in window " + window.str());
    return out;
}

BatteryResult run_model_battery(const datahub::MergedPanel& merged,
                                const std::vector<ModelSpec>& specs) {
    BatteryResult result;
    for (const auto& spec : specs) {
        std::string label = spec.name + "/" + dependent_name(spec.dependent);
        try {
            datahub::AssembledPanel panel =
                datahub::assemble_panel(merged, spec.regressors(), spec.window);
            result.estimates.push_back(
                fit_fixed_effects(panel.rows, panel.regressor_names, spec));
        } catch (const Error& e) {
            result.failures.emplace_back(label, e.what());
        }
    }
    return result;
}

std::vector<std::string> standard_controls() {
    return {"roa",    "ln_mktcap", "leverage", "ln_stockvol", "ln_intasset", "mbv",
            "ln_pse", "ln_msci",   "ln_ovx",   "ln_epu",      "ln_covid_x_ps"};
}

namespace {

const std::vector<std::pair<std::string, std::string>>& climate_menu() {
    static const std::vector<std::pair<std::string, std::string>> menu = {
        {"M1", "ln_volcov"}, {"M2", "cov_cc"},   {"M3", "cov_re"},
        {"M4", "cov_ghi"},   {"M5", "pos_sent"}, {"M6", "neg_sent"}};
    return menu;
}

// Controls without the COVID interaction, for samples that end before 2020
// where the interaction is identically zero.
std::vector<std::string> pre_covid_controls() {
    std::vector<std::string> controls = standard_controls();
    controls.erase(std::remove(controls.begin(), controls.end(), "ln_covid_x_ps"),
                   controls.end());
    return controls;
}

std::vector<ModelSpec> news_index_battery(const std::string& extra, SeFlavor se,
                                          std::optional<MonthRange> window) {
    std::vector<ModelSpec> specs;
    for (Dependent dep : {Dependent::Idio, Dependent::Sys}) {
        ModelSpec spec;
        spec.name = extra;
        spec.dependent = dep;
        spec.climate_vars = {"neg_sent", extra};
        spec.control_vars = pre_covid_controls();
        spec.se_flavor = se;
        spec.window = window;
        specs.push_back(std::move(spec));
    }
    return specs;
}

}  // namespace

std::vector<ModelSpec> standard_battery(SeFlavor se, std::optional<MonthRange> window) {
    std::vector<ModelSpec> specs;
    for (Dependent dep : {Dependent::Idio, Dependent::Sys}) {
        for (const auto& [name, climate] : climate_menu()) {
            ModelSpec spec;
            spec.name = name;
            spec.dependent = dep;
            spec.climate_vars = {climate};
            spec.control_vars = standard_controls();
            spec.se_flavor = se;
            spec.window = window;
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

std::vector<ModelSpec> chneg_battery(SeFlavor se, std::optional<MonthRange> window) {
    return news_index_battery("chneg", se, window);
}

std::vector<ModelSpec> mccc_battery(SeFlavor se, std::optional<MonthRange> window) {
    return news_index_battery("mccc", se, window);
}

std::vector<ModelSpec> cpu_battery(SeFlavor se, std::optional<MonthRange> window) {
    std::vector<ModelSpec> specs;
    for (Dependent dep : {Dependent::Idio, Dependent::Sys}) {
        for (const auto& [name, climate] : climate_menu()) {
            ModelSpec spec;
            spec.name = name;
            spec.dependent = dep;
            spec.climate_vars = {climate, "cpu"};
            spec.control_vars = standard_controls();
            spec.se_flavor = se;
            spec.window = window;
            specs.push_back(std::move(spec));
        }
    }
    return specs;
}

void write_results_csv(std::ostream& out, const std::string& table,
                       const BatteryResult& result) {
    write_csv_row(out, {"table", "model", "dependent", "variable", "coef", "se",
                        "stars", "n_obs", "n_firms", "r2_within"});
    for (const auto& est : result.estimates) {
        std::string dep = dependent_name(est.spec.dependent);
        std::string n_obs = std::to_string(est.n_obs);
        std::string n_firms = std::to_string(est.n_firms);
        std::string r2 = format_real(est.r2_within);
        for (size_t j = 0; j < est.names.size(); ++j) {
            write_csv_row(out, {table, est.spec.name, dep, est.names[j],
                                format_real(est.coef[j]), format_real(est.se[j]),
                                est.stars[j], n_obs, n_firms, r2});
        }
        write_csv_row(out, {table, est.spec.name, dep, "_cons",
                            format_real(est.alpha_hat), "", "", n_obs, n_firms, r2});
    }
}

namespace {

std::string fixed(double v, int decimals = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

// Pads to `width` display columns, counting the two-byte dagger as one.
std::string right_pad_cell(const std::string& s, size_t width) {
    size_t display = s.size();
    for (size_t i = 0; i + 2 < s.size(); ++i)
        if (static_cast<unsigned char>(s[i]) == 0xe2) display -= 2;
    return display >= width ? s : std::string(width - display, ' ') + s;
}

}  // namespace

std::string render_table(const std::string& title,
                         const std::vector<FeEstimate>& estimates) {
    std::ostringstream out;
    if (estimates.empty()) {
        out << title << "\n(no estimates)\n";
        return out.str();
    }

    // Row order: regressors by first appearance, then the summary block.
    std::vector<std::string> variables;
    for (const auto& est : estimates)
        for (const auto& name : est.names)
            if (std::find(variables.begin(), variables.end(), name) == variables.end())
                variables.push_back(name);

    size_t name_width = 12;
    for (const auto& v : variables) name_width = std::max(name_width, v.size() + 2);
    const size_t cell = 13;

    auto cell_for = [&](const FeEstimate& est,
                        const std::string& variable) -> std::pair<std::string, std::string> {
        for (size_t j = 0; j < est.names.size(); ++j)
            if (est.names[j] == variable)
                return {fixed(est.coef[j]) + est.stars[j], "(" + fixed(est.se[j]) + ")"};
        return {"", ""};
    };

    size_t total = name_width + cell * estimates.size();
    out << title << "\n" << std::string(total, '=') << "\n";
    out << std::string(name_width, ' ');
    for (const auto& est : estimates)
        out << right_pad_cell(est.spec.name + " " + dependent_name(est.spec.dependent),
                              cell);
    out << "\n" << std::string(total, '-') << "\n";

    auto emit_pair = [&](const std::string& label,
                         const std::vector<std::pair<std::string, std::string>>& cells) {
        out << label << std::string(name_width - label.size(), ' ');
        for (const auto& c : cells) out << right_pad_cell(c.first, cell);
        out << "\n";
        bool any_se = false;
        for (const auto& c : cells) any_se |= !c.second.empty();
        if (any_se) {
            out << std::string(name_width, ' ');
            for (const auto& c : cells) out << right_pad_cell(c.second, cell);
            out << "\n";
        }
    };

    for (const auto& v : variables) {
        std::vector<std::pair<std::string, std::string>> cells;
        for (const auto& est : estimates) cells.push_back(cell_for(est, v));
        emit_pair(v, cells);
    }

    std::vector<std::pair<std::string, std::string>> cons;
    for (const auto& est : estimates) cons.push_back({fixed(est.alpha_hat), ""});
    emit_pair("Constant", cons);

    out << std::string(total, '-') << "\n";
    auto emit_line = [&](const std::string& label, auto value_of) {
        out << label << std::string(name_width - label.size(), ' ');
        for (const auto& est : estimates) out << right_pad_cell(value_of(est), cell);
        out << "\n";
    };
    emit_line("N", [](const FeEstimate& e) { return std::to_string(e.n_obs); });
    emit_line("Firms", [](const FeEstimate& e) { return std::to_string(e.n_firms); });
    emit_line("Within R2", [](const FeEstimate& e) { return fixed(e.r2_within); });
    out << std::string(total, '=') << "\n";
    out << "** p<0.01, * p<0.05, † p<0.10, two-sided normal critical values.\n";
    out << "Standard errors in parentheses. Constant is the grand-mean intercept\n";
    out << "of the firm fixed-effects model; R2 is within-firm.\n";
    return out.str();
}

}  // namespace climalens::panel
