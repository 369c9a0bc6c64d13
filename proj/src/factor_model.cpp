#include "climalens/factor_model.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <set>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"
#include "climalens/linreg.hpp"

namespace climalens::factor_model {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string normalize_header_cell(std::string s) {
    for (char& c : s) {
        if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
        if (c == '-') c = '_';
    }
    return s;
}

}  // namespace

std::vector<ExcessReturnDay> join_excess_returns(
    const std::vector<DailyReturnRecord>& returns,
    const std::vector<FactorRecord>& factors, int* n_unmatched) {
    std::map<Date, const FactorRecord*> by_date;
    for (const auto& f : factors) by_date[f.date] = &f;

    std::vector<ExcessReturnDay> out;
    int unmatched = 0;
    for (const auto& r : returns) {
        auto it = by_date.find(r.date);
        if (it == by_date.end()) {
            ++unmatched;
            continue;
        }
        const FactorRecord& f = *it->second;
        out.push_back({r.date, r.total_return - f.rf, f.mkt_rf, f.smb, f.hml});
    }
    if (n_unmatched) *n_unmatched = unmatched;
    if (out.empty())
        throw NoOverlap("no return dates match the factor series");
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.date < b.date; });
    return out;
}

FirmMonthRisk estimate_ff3(const std::string& firm_id, MonthKey month,
                           const std::vector<ExcessReturnDay>& days, int min_days) {
    FirmMonthRisk risk;
    risk.firm_id = firm_id;
    risk.month = month;
    risk.n_days = static_cast<int>(days.size());

    auto mark_insufficient = [&](const std::string& reason) {
        risk.quality = RiskQuality::Insufficient;
        risk.reason = reason;
        risk.beta_er = risk.beta_smb = risk.beta_hml = risk.alpha = kNaN;
        risk.sigma_eps = kNaN;
        risk.r2 = kNaN;
    };

    // Need n > 4 for the residual dof as well as the configured floor.
    int floor = std::max(min_days, 5);
    if (risk.n_days < floor) {
        mark_insufficient("only " + std::to_string(risk.n_days) + " days (need " +
                          std::to_string(floor) + ")");
        return risk;
    }

    Eigen::Index n = risk.n_days;
    linreg::DesignMatrix X;
    X.values.resize(n, 4);
    X.col_names = {"const", "mkt_rf", "smb", "hml"};
    X.intercept_included = true;
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& d = days[static_cast<size_t>(i)];
        X.values(i, 0) = 1.0;
        X.values(i, 1) = d.mkt_rf;
        X.values(i, 2) = d.smb;
        X.values(i, 3) = d.hml;
        y(i) = d.excess;
    }

    try {
        linreg::OlsFit fit = linreg::ols_fit(X, y);
        risk.alpha = fit.coef(0);
        risk.beta_er = fit.coef(1);
        risk.beta_smb = fit.coef(2);
        risk.beta_hml = fit.coef(3);
        risk.sigma_eps = std::sqrt(fit.sigma2);
        risk.r2 = fit.r2;
    } catch (const RankDeficient& e) {
        mark_insufficient(e.what());
    }
    return risk;
}

std::vector<FirmMonthRisk> risk_panel(const std::vector<DailyReturnRecord>& returns,
                                      const std::vector<FactorRecord>& factors,
                                      const MonthRange& window, int min_days) {
    std::map<std::string, std::vector<DailyReturnRecord>> by_firm;
    for (const auto& r : returns) by_firm[r.firm_id].push_back(r);

    std::vector<FirmMonthRisk> out;
    for (const auto& [firm, series] : by_firm) {
        std::vector<ExcessReturnDay> matched;
        try {
            matched = join_excess_returns(series, factors);
        } catch (const NoOverlap&) {
            continue;
        }
        std::map<MonthKey, std::vector<ExcessReturnDay>> by_month;
        for (const auto& d : matched) {
            MonthKey m = d.date.month_key();
            if (window.contains(m)) by_month[m].push_back(d);
        }
        for (const auto& [m, days] : by_month)
            out.push_back(estimate_ff3(firm, m, days, min_days));
    }
    return out;
}

std::vector<FactorRecord> read_factor_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    if (!header || header->size() != 5)
        throw FormatError(1, "expected header date,mkt_rf,smb,hml,rf");
    std::vector<std::string> norm;
    for (const auto& c : *header) norm.push_back(normalize_header_cell(c));
    if (norm != std::vector<std::string>{"date", "mkt_rf", "smb", "hml", "rf"})
        throw FormatError(1, "expected header date,mkt_rf,smb,hml,rf");

    std::vector<FactorRecord> out;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 5)
            throw FormatError(line, "expected 5 fields, got " + std::to_string(row->size()));
        FactorRecord f;
        try {
            f.date = Date::parse((*row)[0]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        f.mkt_rf = parse_real((*row)[1], line);
        f.smb = parse_real((*row)[2], line);
        f.hml = parse_real((*row)[3], line);
        f.rf = parse_real((*row)[4], line);
        if (!out.empty() && !(out.back().date < f.date))
            throw FormatError(line, "factor dates must be strictly increasing");
        out.push_back(f);
    }
    return out;
}

std::vector<DailyReturnRecord> read_returns_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {"firm_id", "date", "total_return"};
    if (!header || *header != kHeader)
        throw FormatError(1, "expected header firm_id,date,total_return");

    std::vector<DailyReturnRecord> out;
    std::set<std::pair<std::string, Date>> seen;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 3)
            throw FormatError(line, "expected 3 fields, got " + std::to_string(row->size()));
        DailyReturnRecord r;
        r.firm_id = (*row)[0];
        if (r.firm_id.empty()) throw FormatError(line, "missing firm_id");
        try {
            r.date = Date::parse((*row)[1]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        r.total_return = parse_real((*row)[2], line);
        if (!seen.insert({r.firm_id, r.date}).second)
            throw FormatError(line, "duplicate record for " + r.firm_id + " on " +
                                        r.date.str());
        out.push_back(r);
    }
    return out;
}

void write_risk_csv(std::ostream& out, const std::vector<FirmMonthRisk>& risks) {
    write_csv_row(out, {"firm_id", "month", "beta_er", "beta_smb", "beta_hml",
                        "alpha", "sigma_eps", "n_days", "r2", "quality"});
    for (const auto& r : risks) {
        bool ok = r.quality == RiskQuality::Ok;
        auto real = [&](double v) { return ok ? format_real(v) : std::string(); };
        write_csv_row(out, {r.firm_id, r.month.str(), real(r.beta_er),
                            real(r.beta_smb), real(r.beta_hml), real(r.alpha),
                            real(r.sigma_eps), std::to_string(r.n_days), real(r.r2),
                            ok ? "ok" : "insufficient"});
    }
}

std::vector<FirmMonthRisk> read_risk_csv(std::istream& in) {
    CsvReader reader(in);
    auto header = reader.next();
    static const std::vector<std::string> kHeader = {
        "firm_id", "month", "beta_er", "beta_smb", "beta_hml",
        "alpha",   "sigma_eps", "n_days", "r2", "quality"};
    if (!header || *header != kHeader)
        throw FormatError(1, "bad risk CSV header");

    std::vector<FirmMonthRisk> out;
    while (auto row = reader.next()) {
        int line = reader.record_line();
        if (row->size() != 10)
            throw FormatError(line, "expected 10 fields, got " + std::to_string(row->size()));
        FirmMonthRisk r;
        r.firm_id = (*row)[0];
        try {
            r.month = MonthKey::parse((*row)[1]);
        } catch (const FormatError& e) {
            throw FormatError(line, e.what());
        }
        const std::string& quality = (*row)[9];
        if (quality == "ok") {
            r.quality = RiskQuality::Ok;
        } else if (quality == "insufficient") {
            r.quality = RiskQuality::Insufficient;
        } else {
            throw FormatError(line, "bad quality '" + quality + "'");
        }
        bool ok = r.quality == RiskQuality::Ok;
        auto real = [&](const std::string& field) -> double {
            if (!ok && field.empty()) return kNaN;
            return parse_real(field, line);
        };
        r.beta_er = real((*row)[2]);
        r.beta_smb = real((*row)[3]);
        r.beta_hml = real((*row)[4]);
        r.alpha = real((*row)[5]);
        r.sigma_eps = real((*row)[6]);
        r.n_days = static_cast<int>(parse_int((*row)[7], line));
        r.r2 = real((*row)[8]);
        out.push_back(r);
    }
    return out;
}

}  // namespace climalens::factor_model
