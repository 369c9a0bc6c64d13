#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "climalens/month.hpp"

namespace climalens::factor_model {

// Daily research factors, percent units.
struct FactorRecord {
    Date date;
    double mkt_rf = 0;
    double smb = 0;
    double hml = 0;
    double rf = 0;
};

struct DailyReturnRecord {
    std::string firm_id;
    Date date;
    double total_return = 0;  // percent
};

// One matched trading day: the firm's excess return and the factor triple.
struct ExcessReturnDay {
    Date date;
    double excess = 0;
    double mkt_rf = 0;
    double smb = 0;
    double hml = 0;
};

enum class RiskQuality { Ok, Insufficient };

struct FirmMonthRisk {
    std::string firm_id;
    MonthKey month;
    double beta_er = 0;
    double beta_smb = 0;
    double beta_hml = 0;
    double alpha = 0;
    double sigma_eps = 0;
    int n_days = 0;
    double r2 = 0;
    RiskQuality quality = RiskQuality::Ok;
    std::string reason;  // set when quality is Insufficient
};

// Inner join of one firm's daily returns with the factor series on exact
// calendar date; unmatched days are dropped and counted in *n_unmatched
// when given. Throws NoOverlap when no date matches.
std::vector<ExcessReturnDay> join_excess_returns(
    const std::vector<DailyReturnRecord>& returns,
    const std::vector<FactorRecord>& factors, int* n_unmatched = nullptr);

// OLS of excess return on [1, mkt_rf, smb, hml] for one firm-month.
// Fewer than min_days matched days, or a rank-deficient factor block,
// yields quality=Insufficient with NaN estimates and a reason.
FirmMonthRisk estimate_ff3(const std::string& firm_id, MonthKey month,
                           const std::vector<ExcessReturnDay>& days,
                           int min_days = 15);

// Runs estimate_ff3 for every (firm, month-in-window) cell that has at
// least one matched day; output sorted by (firm_id, month).
std::vector<FirmMonthRisk> risk_panel(const std::vector<DailyReturnRecord>& returns,
                                      const std::vector<FactorRecord>& factors,
                                      const MonthRange& window, int min_days = 15);

// Factor CSV: header date,mkt_rf,smb,hml,rf; the published research-factor
// spelling Date,Mkt-RF,SMB,HML,RF and YYYYMMDD dates are also accepted.
std::vector<FactorRecord> read_factor_csv(std::istream& in);

// Returns CSV: header firm_id,date,total_return.
std::vector<DailyReturnRecord> read_returns_csv(std::istream& in);

// Risk CSV: firm_id,month,beta_er,beta_smb,beta_hml,alpha,sigma_eps,
// n_days,r2,quality. Estimates of insufficient rows are written empty.
void write_risk_csv(std::ostream& out, const std::vector<FirmMonthRisk>& risks);
std::vector<FirmMonthRisk> read_risk_csv(std::istream& in);

}  // namespace climalens::factor_model
