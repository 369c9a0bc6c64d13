#include "climalens/datahub.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"

namespace climalens::datahub {

namespace {

std::optional<double> take_log(const std::optional<double>& level,
                               const char* series, MonthKey month) {
    if (!level) return std::nullopt;
    if (*level <= 0) throw NonPositiveLevel(series, month.str());
    return std::log(*level);
}

// 100 * ln(P_t / P_prev); both levels must be positive.
std::optional<double> log_return(const std::optional<double>& prev,
                                 const std::optional<double>& cur,
                                 const char* series, MonthKey month) {
    if (!cur || !prev) return std::nullopt;
    if (*cur <= 0) throw NonPositiveLevel(series, month.str());
    if (*prev <= 0) throw NonPositiveLevel(series, month.prev().str());
    return 100.0 * std::log(*cur / *prev);
}

std::optional<double> parse_optional(const std::string& field, int line) {
    if (field.empty()) return std::nullopt;
    return parse_real(field, line);
}

}  // namespace

std::vector<FirmMonthCovariates> transform_covariates(const std::vector<RawFirmMonth>& raw) {
    std::vector<FirmMonthCovariates> out;
    out.reserve(raw.size());
    for (const auto& r : raw) {
        FirmMonthCovariates c;
        c.firm_id = r.firm_id;
        c.month = r.month;
        c.roa = r.roa;
        c.ln_mktcap = take_log(r.mktcap, "mktcap", r.month);
        c.leverage = r.leverage;
        c.ln_stockvol = take_log(r.stockvol, "stockvol", r.month);
        c.ln_intasset = take_log(r.intasset, "intasset", r.month);
        c.mbv = r.mbv;
        out.push_back(c);
    }
    return out;
}

std::vector<double> covid_interaction(const std::vector<double>& deaths,
                                      const std::vector<double>& stringency) {
    if (deaths.size() != stringency.size())
        throw ConfigError("covid_interaction: series lengths differ");
    std::vector<double> out(deaths.size());
    for (size_t i = 0; i < deaths.size(); ++i)
        out[i] = std::log1p(deaths[i]) * stringency[i];
    return out;
}

std::vector<MacroMonth> transform_macro(std::vector<RawMacroMonth> raw, OvxTransform ovx) {
    std::sort(raw.begin(), raw.end(),
              [](const auto& a, const auto& b) { return a.month < b.month; });

    std::vector<MacroMonth> out;
    out.reserve(raw.size());
    for (size_t i = 0; i < raw.size(); ++i) {
        const RawMacroMonth& cur = raw[i];
        const RawMacroMonth* prev =
            i > 0 && raw[i - 1].month == cur.month.prev() ? &raw[i - 1] : nullptr;
        auto ret = [&](std::optional<double> RawMacroMonth::* field, const char* name) {
            return log_return(prev ? (*prev).*field : std::nullopt, cur.*field, name,
                              cur.month);
        };

        MacroMonth m;
        m.month = cur.month;
        m.ln_pse = ret(&RawMacroMonth::pse, "pse");
        m.ln_msci = ret(&RawMacroMonth::msci, "msci");
        m.ln_ovx = ovx == OvxTransform::LogReturn ? ret(&RawMacroMonth::ovx, "ovx")
                                                  : take_log(cur.ovx, "ovx", cur.month);
        m.ln_epu = take_log(cur.epu, "epu", cur.month);
        if (cur.covid_deaths && cur.stringency)
            m.ln_covid_x_ps = std::log1p(*cur.covid_deaths) * *cur.stringency;
        m.cpu = cur.cpu;
        m.chneg = cur.chneg;
        m.mccc = cur.mccc;
        out.push_back(m);
    }
    return out;
}

MergedPanel merge_all(const std::vector<factor_model::FirmMonthRisk>& risks,
                      const std::vector<indices::ClimateIndexRow>& index_rows,
                      const std::vector<FirmMonthCovariates>& firm_covariates,
                      const std::vector<MacroMonth>& macro) {
    std::map<MonthKey, const indices::ClimateIndexRow*> index_by_month;
    for (const auto& r : index_rows) index_by_month[r.month] = &r;
    std::map<std::pair<std::string, MonthKey>, const FirmMonthCovariates*> firm_by_key;
    for (const auto& c : firm_covariates) firm_by_key[{c.firm_id, c.month}] = &c;
    std::map<MonthKey, const MacroMonth*> macro_by_month;
    for (const auto& m : macro) macro_by_month[m.month] = &m;

    MergedPanel merged;
    merged.cells.reserve(risks.size());
    for (const auto& risk : risks) {
        PanelCell cell;
        cell.firm_id = risk.firm_id;
        cell.month = risk.month;
        if (risk.quality == factor_model::RiskQuality::Ok) {
            cell.y_id = risk.sigma_eps;
            cell.y_sys = risk.beta_er;
        }
        auto put = [&](const char* name, std::optional<double> v) {
            cell.vars[name] = v;
        };

        if (auto it = index_by_month.find(risk.month);
            it != index_by_month.end() && it->second->defined) {
            const auto& ix = *it->second;
            put("ln_volcov", ix.ln_volcov);
            put("cov_cc", ix.cov_cc);
            put("cov_re", ix.cov_re);
            put("cov_ghi", ix.cov_ghi);
            put("pos_sent", ix.pos_sent);
            put("neg_sent", ix.neg_sent);
        }
        if (auto it = firm_by_key.find({risk.firm_id, risk.month});
            it != firm_by_key.end()) {
            const auto& fc = *it->second;
            put("roa", fc.roa);
            put("ln_mktcap", fc.ln_mktcap);
            put("leverage", fc.leverage);
            put("ln_stockvol", fc.ln_stockvol);
            put("ln_intasset", fc.ln_intasset);
            put("mbv", fc.mbv);
        }
        if (auto it = macro_by_month.find(risk.month); it != macro_by_month.end()) {
            const auto& mm = *it->second;
            put("ln_pse", mm.ln_pse);
            put("ln_msci", mm.ln_msci);
            put("ln_ovx", mm.ln_ovx);
            put("ln_epu", mm.ln_epu);
            put("ln_covid_x_ps", mm.ln_covid_x_ps);
            put("cpu", mm.cpu);
            put("chneg", mm.chneg);
            put("mccc", mm.mccc);
        }
        merged.cells.push_back(std::move(cell));
    }
    std::sort(merged.cells.begin(), merged.cells.end(), [](const auto& a, const auto& b) {
        return std::tie(a.firm_id, a.month) < std::tie(b.firm_id, b.month);
    });
    return merged;
}

std::vector<MissingnessEntry> tally_missingness(
    const MergedPanel& merged, const std::vector<std::string>& variable_names,
    std::optional<MonthRange> window) {
    std::map<std::string, MissingnessEntry> tally;
    auto note_missing = [&](const std::string& variable, MonthKey month) {
        auto [it, fresh] = tally.try_emplace(variable);
        if (fresh) it->second.variable = variable;
        it->second.n_missing += 1;
        if (!it->second.first_month || month < *it->second.first_month)
            it->second.first_month = month;
        if (!it->second.last_month || *it->second.last_month < month)
            it->second.last_month = month;
    };

    for (const auto& cell : merged.cells) {
        if (window && !window->contains(cell.month)) continue;
        if (!cell.y_id || !cell.y_sys) note_missing("risk_estimate", cell.month);
        for (const auto& name : variable_names) {
            auto it = cell.vars.find(name);
            if (it == cell.vars.end() || !it->second) note_missing(name, cell.month);
        }
    }

    std::vector<MissingnessEntry> out;
    out.reserve(variable_names.size() + 1);
    MissingnessEntry risk;
    risk.variable = "risk_estimate";
    if (auto it = tally.find("risk_estimate"); it != tally.end()) risk = it->second;
    out.push_back(risk);
    for (const auto& name : variable_names) {
        auto it = tally.find(name);
        if (it != tally.end()) {
            out.push_back(it->second);
        } else {
            MissingnessEntry e;
            e.variable = name;
            out.push_back(e);
        }
    }
    return out;
}

AssembledPanel assemble_panel(const MergedPanel& merged,
                              const std::vector<std::string>& regressor_names,
                              std::optional<MonthRange> window) {
    AssembledPanel panel;
    panel.regressor_names = regressor_names;
    panel.missingness = tally_missingness(merged, regressor_names, window);

    for (const auto& cell : merged.cells) {
        if (window && !window->contains(cell.month)) continue;
        if (!cell.y_id || !cell.y_sys) continue;
        PanelRow row;
        row.regressors.reserve(regressor_names.size());
        bool complete = true;
        for (const auto& name : regressor_names) {
            auto it = cell.vars.find(name);
            if (it == cell.vars.end() || !it->second) {
                complete = false;
                break;
            }
            row.regressors.push_back(*it->second);
        }
        if (!complete) continue;
        row.firm_id = cell.firm_id;
        row.month = cell.month;
        row.y_id = *cell.y_id;
        row.y_sys = *cell.y_sys;
        panel.rows.push_back(std::move(row));
    }

    if (panel.rows.empty()) {
        std::string names;
        for (const auto& n : regressor_names) names += (names.empty() ? "" : ", ") + n;
        throw EmptyPanel("no complete rows for regressors " + names);
    }
    return panel;
}

std::vector<RawFirmMonth> read_firm_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {
        "firm_id", "month", "roa", "mktcap", "leverage", "stockvol", "intasset", "mbv"};
    if (!header || *header != kHeader)
        throw FormatError(1, "expected header firm_id,month,roa,mktcap,leverage,"
                             "stockvol,intasset,mbv");

    std::vector<RawFirmMonth> out;
    std::set<std::pair<std::string, MonthKey>> seen;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 8)
            throw FormatError(line, "expected 8 fields, got " + std::to_string(row->size()));
        RawFirmMonth r;
        r.firm_id = (*row)[0];
        if (r.firm_id.empty()) throw FormatError(line, "missing firm_id");
        try {
            r.month = MonthKey::parse((*row)[1]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        if (!seen.insert({r.firm_id, r.month}).second)
            throw FormatError(line, "duplicate covariates for " + r.firm_id + " in " +
                                        r.month.str());
        r.roa = parse_optional((*row)[2], line);
        r.mktcap = parse_optional((*row)[3], line);
        r.leverage = parse_optional((*row)[4], line);
        r.stockvol = parse_optional((*row)[5], line);
        r.intasset = parse_optional((*row)[6], line);
        r.mbv = parse_optional((*row)[7], line);
        out.push_back(r);
    }
    return out;
}

std::vector<RawMacroMonth> read_macro_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {
        "month", "pse", "msci", "ovx", "epu",
        "covid_deaths", "stringency", "cpu", "chneg", "mccc"};
    if (!header || *header != kHeader)
        throw FormatError(1, "expected header month,pse,msci,ovx,epu,covid_deaths,"
                             "stringency,cpu,chneg,mccc");

    std::vector<RawMacroMonth> out;
    std::set<MonthKey> seen;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 10)
            throw FormatError(line, "expected 10 fields, got " + std::to_string(row->size()));
        RawMacroMonth r;
        try {
            r.month = MonthKey::parse((*row)[0]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        if (!seen.insert(r.month).second)
            throw FormatError(line, "duplicate macro row for " + r.month.str());
        r.pse = parse_optional((*row)[1], line);
        r.msci = parse_optional((*row)[2], line);
        r.ovx = parse_optional((*row)[3], line);
        r.epu = parse_optional((*row)[4], line);
        r.covid_deaths = parse_optional((*row)[5], line);
        r.stringency = parse_optional((*row)[6], line);
        r.cpu = parse_optional((*row)[7], line);
        r.chneg = parse_optional((*row)[8], line);
        r.mccc = parse_optional((*row)[9], line);
        if (r.covid_deaths && *r.covid_deaths < 0)
            throw FormatError(line, "covid_deaths must be nonnegative");
        if (r.stringency && (*r.stringency < 0 || *r.stringency > 100))
            throw FormatError(line, "stringency must be in [0, 100]");
        out.push_back(r);
    }
    return out;
}

void write_missingness_csv(std::ostream& out, const std::vector<MissingnessEntry>& entries) {
    write_csv_row(out, {"variable", "n_missing", "first_month", "last_month"});
    for (const auto& e : entries) {
        write_csv_row(out, {e.variable, std::to_string(e.n_missing),
                            e.first_month ? e.first_month->str() : "",
                            e.last_month ? e.last_month->str() : ""});
    }
}

}  // namespace climalens::datahub
