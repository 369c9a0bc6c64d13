#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "climalens/factor_model.hpp"
#include "climalens/indices.hpp"
#include "climalens/month.hpp"

namespace climalens::datahub {

// Firm covariates in levels, straight from the input file. Blank cells are
// missing, not zero.
struct RawFirmMonth {
    std::string firm_id;
    MonthKey month;
    std::optional<double> roa, mktcap, leverage, stockvol, intasset, mbv;
};

// The same covariates after the log transforms.
struct FirmMonthCovariates {
    std::string firm_id;
    MonthKey month;
    std::optional<double> roa, ln_mktcap, leverage, ln_stockvol, ln_intasset, mbv;
};

// Macro series in levels.
struct RawMacroMonth {
    MonthKey month;
    std::optional<double> pse, msci, ovx, epu, covid_deaths, stringency, cpu, chneg, mccc;
};

// Macro controls as they enter the regressions.
struct MacroMonth {
    MonthKey month;
    std::optional<double> ln_pse, ln_msci, ln_ovx, ln_epu, ln_covid_x_ps, cpu, chneg, mccc;
};

enum class OvxTransform { LogReturn, LogLevel };

// ln on MktCap, StockVol and IntAsset; ROA, Leverage, MBV pass through.
// Throws NonPositiveLevel when a log sees a non-positive present value.
std::vector<FirmMonthCovariates> transform_covariates(const std::vector<RawFirmMonth>& raw);

// ln(1 + deaths) * stringency, elementwise over aligned series.
std::vector<double> covid_interaction(const std::vector<double>& deaths,
                                      const std::vector<double>& stringency);

// PSE/MSCI/OVX become 100*ln(P_t/P_{t-1}) against the previous calendar
// month (missing when the predecessor is absent); EPU becomes ln(level);
// the COVID interaction combines deaths and stringency; CPU, CHNeg, MCCC
// pass through. The switch turns OVX into ln(level) instead of log returns.
std::vector<MacroMonth> transform_macro(std::vector<RawMacroMonth> raw,
                                        OvxTransform ovx = OvxTransform::LogReturn);

// One candidate estimation cell per firm-month risk estimate, with every
// regressor that could be joined attached by canonical name. Absent join
// partners and undefined index months stay missing.
struct PanelCell {
    std::string firm_id;
    MonthKey month;
    std::optional<double> y_id;   // sigma_eps
    std::optional<double> y_sys;  // beta_er
    std::map<std::string, std::optional<double>> vars;
};

struct MergedPanel {
    std::vector<PanelCell> cells;  // sorted by (firm_id, month)
};

MergedPanel merge_all(const std::vector<factor_model::FirmMonthRisk>& risks,
                      const std::vector<indices::ClimateIndexRow>& index_rows,
                      const std::vector<FirmMonthCovariates>& firm_covariates,
                      const std::vector<MacroMonth>& macro);

// A complete-case estimation row.
struct PanelRow {
    std::string firm_id;
    MonthKey month;
    double y_id = 0;
    double y_sys = 0;
    std::vector<double> regressors;  // aligned with AssembledPanel::regressor_names
};

struct MissingnessEntry {
    std::string variable;
    int64_t n_missing = 0;
    std::optional<MonthKey> first_month, last_month;  // span of the missing cells
};

struct AssembledPanel {
    std::vector<std::string> regressor_names;
    std::vector<PanelRow> rows;
    std::vector<MissingnessEntry> missingness;
};

// Counts, per variable, the cells where that variable is absent, with the
// month span of the gaps. The risk estimate itself is tallied under
// "risk_estimate". Entries come back in the given order (risk_estimate
// first), including zero-count ones.
std::vector<MissingnessEntry> tally_missingness(
    const MergedPanel& merged, const std::vector<std::string>& variable_names,
    std::optional<MonthRange> window = std::nullopt);

// Listwise deletion over the requested regressors: a cell enters iff its
// risk estimate and every named regressor are present (and its month falls
// inside `window` when given). Dropped cells are tallied per variable, with
// the risk estimate itself reported as "risk_estimate". Throws EmptyPanel
// when nothing survives.
AssembledPanel assemble_panel(const MergedPanel& merged,
                              const std::vector<std::string>& regressor_names,
                              std::optional<MonthRange> window = std::nullopt);

// Firm covariates CSV: firm_id,month,roa,mktcap,leverage,stockvol,intasset,mbv.
std::vector<RawFirmMonth> read_firm_csv(std::istream& in);

// Macro CSV: month,pse,msci,ovx,epu,covid_deaths,stringency,cpu,chneg,mccc.
std::vector<RawMacroMonth> read_macro_csv(std::istream& in);

// Missingness report CSV: variable,n_missing,first_month,last_month.
void write_missingness_csv(std::ostream& out, const std::vector<MissingnessEntry>& entries);

}  // namespace climalens::datahub
