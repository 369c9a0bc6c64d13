#include "climalens/synth.hpp"

#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include "climalens/csvio.hpp"
#include "climalens/errors.hpp"

namespace climalens::synth {

double Rng::uniform() {
    // 53 random bits, offset to stay strictly inside (0, 1).
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

double Rng::normal() {
    double u1 = uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

int Rng::uniform_int(int lo, int hi) {
    auto span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int>(engine_() % span);
}

double c4(int nu) {
    if (nu < 1) throw ConfigError("c4 needs at least 1 degree of freedom");
    double v = nu;
    return std::exp(0.5 * (std::log(2.0) - std::log(v)) +
                    std::lgamma((v + 1.0) / 2.0) - std::lgamma(v / 2.0));
}

namespace {

int days_in_month(int year, int month) {
    static const int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    if (month == 2 && (year % 4 == 0 && (year % 100 != 0 || year % 400 == 0)))
        return 29;
    return kDays[month - 1];
}

int day_of_week(int year, int month, int day) {
    // Sakamoto's method, 0 = Sunday.
    static const int kOffset[] = {0, 3, 2, 5, 0, 3, 5, 1, 4, 6, 2, 4};
    if (month < 3) year -= 1;
    return (year + year / 4 - year / 100 + year / 400 + kOffset[month - 1] + day) % 7;
}

// Word pools paired to the shipped sample vocabularies and lexicon, so the
// generated corpus produces theme and sentiment hits.
const std::vector<std::string>& keyword_pool() {
    static const std::vector<std::string> pool = {
        "climate change", "global warming", "extreme weather",
        "renewable energy", "carbon tax"};
    return pool;
}

const std::vector<std::string>& filler_pool() {
    static const std::vector<std::string> pool = {
        "the",      "market",  "investors", "today",   "report",  "shares",
        "trading",  "prices",  "company",   "stocks",  "analysts", "quarter",
        "economy",  "outlook", "sector",    "interest", "rates",   "federal",
        "earnings", "forecast"};
    return pool;
}

const std::vector<std::string>& cc_pool() {
    static const std::vector<std::string> pool = {
        "climate change", "global warming", "carbon emissions", "extreme weather",
        "heat wave",      "drought",        "wildfires",        "sea levels"};
    return pool;
}

const std::vector<std::string>& re_pool() {
    static const std::vector<std::string> pool = {
        "renewable", "solar panels", "wind power", "clean energy", "geothermal"};
    return pool;
}

const std::vector<std::string>& ghi_pool() {
    static const std::vector<std::string> pool = {
        "paris agreement", "carbon tax", "epa", "climate policy", "green new deal"};
    return pool;
}

const std::vector<std::string>& pos_pool() {
    static const std::vector<std::string> pool = {
        "gain", "growth", "improve", "opportunity", "benefit", "success"};
    return pool;
}

const std::vector<std::string>& neg_pool() {
    static const std::vector<std::string> pool = {
        "crisis", "loss", "risk", "threat", "disaster", "decline"};
    return pool;
}

const std::string& pick(const std::vector<std::string>& pool, Rng& rng) {
    return pool[static_cast<size_t>(rng.uniform_int(0, static_cast<int>(pool.size()) - 1))];
}

std::string make_text(Rng& rng, const std::string& keyword) {
    std::string text = keyword;
    int extra = rng.uniform_int(16, 26);
    for (int w = 0; w < extra; ++w) {
        double u = rng.uniform();
        const std::vector<std::string>* pool;
        if (u < 0.62) pool = &filler_pool();
        else if (u < 0.72) pool = &cc_pool();
        else if (u < 0.78) pool = &re_pool();
        else if (u < 0.83) pool = &ghi_pool();
        else if (u < 0.90) pool = &pos_pool();
        else pool = &neg_pool();
        text += " " + pick(*pool, rng);
    }
    return text;
}

}  // namespace

std::vector<Date> trading_days(MonthKey month) {
    std::vector<Date> days;
    int n = days_in_month(month.year, month.month);
    for (int d = 1; d <= n; ++d) {
        int dow = day_of_week(month.year, month.month, d);
        if (dow >= 1 && dow <= 5) days.push_back({month.year, month.month, d});
    }
    return days;
}

SynthData generate(const SynthOptions& options) {
    Rng rng(options.seed);
    SynthData data;
    const std::vector<std::string> stations = {"BLOOMBERG", "CNBC", "FOXBUSINESS"};

    // Corpus first: realized monthly counts define the news series the
    // planted effects are built on.
    int n_months = options.window.n_months();
    std::vector<MonthKey> months;
    std::vector<double> ln_count(static_cast<size_t>(n_months));
    {
        MonthKey m = options.window.start;
        for (int t = 0; t < n_months; ++t, m = m.next()) months.push_back(m);
    }
    for (int t = 0; t < n_months; ++t) {
        double ln_target =
            5.5 + 0.45 * std::sin(0.6 * t) + 0.18 * rng.normal();
        int count = static_cast<int>(std::lround(std::exp(ln_target)));
        count = std::max(80, std::min(480, count));
        ln_count[static_cast<size_t>(t)] = std::log(static_cast<double>(count));

        for (int i = 0; i < count; ++i) {
            corpus::Snippet s;
            s.station = stations[static_cast<size_t>(rng.uniform_int(0, 2))];
            // 83-minute stride keeps timestamps unique within the month.
            int minutes = i * 83;
            s.timestamp = DateTime{{months[static_cast<size_t>(t)].year,
                                    months[static_cast<size_t>(t)].month,
                                    1 + minutes / 1440},
                                   (minutes / 60) % 24, minutes % 60};
            s.matched_keyword = pick(keyword_pool(), rng);
            s.text = make_text(rng, *s.matched_keyword);
            data.snippets.push_back(std::move(s));
        }
    }

    // Daily factors over every weekday in the window.
    for (const auto& m : months) {
        for (const Date& d : trading_days(m)) {
            factor_model::FactorRecord f;
            f.date = d;
            f.mkt_rf = 0.03 + 1.0 * rng.normal();
            f.smb = 0.5 * rng.normal();
            f.hml = 0.5 * rng.normal();
            f.rf = 0.008;
            data.factors.push_back(f);
        }
    }
    std::map<MonthKey, std::vector<const factor_model::FactorRecord*>> factors_by_month;
    for (const auto& f : data.factors)
        factors_by_month[f.date.month_key()].push_back(&f);

    // Firms: each has a base beta and base residual sd; the monthly news
    // level shifts both by the planted slopes.
    for (int i = 0; i < options.n_firms; ++i) {
        char firm_id[16];
        std::snprintf(firm_id, sizeof firm_id, "F%03d", i + 1);
        double base_beta = rng.uniform(0.4, 1.2);
        double base_sigma = rng.uniform(2.2, 3.0);
        double beta_smb = rng.uniform(0.0, 0.8);
        double beta_hml = rng.uniform(-0.5, 0.5);
        double alpha = 0.05 * rng.normal();

        for (int t = 0; t < n_months; ++t) {
            MonthKey m = months[static_cast<size_t>(t)];
            const auto& days = factors_by_month.at(m);
            double lnv = ln_count[static_cast<size_t>(t)];
            double beta = base_beta + options.volcov_effect_sys * lnv;
            double sigma_target = base_sigma + options.volcov_effect_idio * lnv;
            // Undo the small-sample bias of the residual-sd estimator so
            // the panel regression sees the target on average.
            double sigma = sigma_target / c4(static_cast<int>(days.size()) - 4);

            for (const auto* f : days) {
                double excess = alpha + beta * f->mkt_rf + beta_smb * f->smb +
                                beta_hml * f->hml + sigma * rng.normal();
                data.returns.push_back({firm_id, f->date, excess + f->rf});
            }

            datahub::RawFirmMonth cov;
            cov.firm_id = firm_id;
            cov.month = m;
            cov.roa = 2.0 + 1.5 * rng.normal();
            cov.mktcap = std::exp(13.774 + 1.2 * rng.normal());
            cov.leverage = rng.uniform(0.1, 0.6);
            cov.stockvol = std::exp(10.0 + 1.0 * rng.normal());
            cov.intasset = std::exp(12.0 + 1.5 * rng.normal());
            cov.mbv = rng.uniform(0.8, 4.0);
            data.firm_covariates.push_back(cov);
        }
    }

    // Macro noise series: random-walk levels for the log-return variables,
    // lognormal levels for EPU and CPU, a COVID block from 2020-01 on, and
    // the two alternative news indices that stop in mid-2018.
    double pse = 1000, msci = 2000, ovx = 35;
    double deaths = 0;
    const MonthKey covid_start{2020, 1};
    const MonthKey chneg_end{2018, 5};
    const MonthKey mccc_end{2018, 6};
    // One extra month ahead of the window so the first log return exists.
    MonthKey lead = options.window.start.prev();
    for (int t = -1; t < n_months; ++t) {
        MonthKey m = t < 0 ? lead : months[static_cast<size_t>(t)];
        pse *= std::exp(0.08 * rng.normal());
        msci *= std::exp(0.06 * rng.normal());
        ovx *= std::exp(0.10 * rng.normal());

        datahub::RawMacroMonth row;
        row.month = m;
        row.pse = pse;
        row.msci = msci;
        row.ovx = ovx;
        row.epu = std::exp(4.7 + 0.3 * rng.normal());
        if (!(m < covid_start)) {
            deaths += 40000.0 * rng.uniform(1.0, 2.0);
            row.covid_deaths = deaths;
            row.stringency = rng.uniform(40.0, 90.0);
        } else {
            row.covid_deaths = 0.0;
            row.stringency = 0.0;
        }
        row.cpu = std::exp(4.5 + 0.35 * rng.normal());
        if (!(chneg_end < m)) row.chneg = 0.05 * rng.normal();
        if (!(mccc_end < m)) row.mccc = 0.3 + 0.1 * rng.normal();
        data.macro.push_back(row);
    }
    return data;
}

void write_inputs(const SynthData& data, const std::string& dir) {
    {
        std::ostringstream out;
        write_csv_row(out, {"station", "timestamp", "keyword", "text"});
        for (const auto& s : data.snippets)
            write_csv_row(out, {s.station, s.timestamp.str(),
                                s.matched_keyword.value_or(""), s.text});
        write_file(dir + "/snippets.csv", out.str());
    }
    {
        std::ostringstream out;
        write_csv_row(out, {"date", "mkt_rf", "smb", "hml", "rf"});
        for (const auto& f : data.factors)
            write_csv_row(out, {f.date.str(), format_real(f.mkt_rf), format_real(f.smb),
                                format_real(f.hml), format_real(f.rf)});
        write_file(dir + "/factors.csv", out.str());
    }
    {
        std::ostringstream out;
        write_csv_row(out, {"firm_id", "date", "total_return"});
        for (const auto& r : data.returns)
            write_csv_row(out, {r.firm_id, r.date.str(), format_real(r.total_return)});
        write_file(dir + "/returns.csv", out.str());
    }
    {
        std::ostringstream out;
        write_csv_row(out, {"firm_id", "month", "roa", "mktcap", "leverage",
                            "stockvol", "intasset", "mbv"});
        auto opt = [](const std::optional<double>& v) {
            return v ? format_real(*v) : std::string();
        };
        for (const auto& c : data.firm_covariates)
            write_csv_row(out, {c.firm_id, c.month.str(), opt(c.roa), opt(c.mktcap),
                                opt(c.leverage), opt(c.stockvol), opt(c.intasset),
                                opt(c.mbv)});
        write_file(dir + "/firm.csv", out.str());
    }
    {
        std::ostringstream out;
        write_csv_row(out, {"month", "pse", "msci", "ovx", "epu", "covid_deaths",
                            "stringency", "cpu", "chneg", "mccc"});
        auto opt = [](const std::optional<double>& v) {
            return v ? format_real(*v) : std::string();
        };
        for (const auto& m : data.macro)
            write_csv_row(out, {m.month.str(), opt(m.pse), opt(m.msci), opt(m.ovx),
                                opt(m.epu), opt(m.covid_deaths), opt(m.stringency),
                                opt(m.cpu), opt(m.chneg), opt(m.mccc)});
        write_file(dir + "/macro.csv", out.str());
    }
}

void write_text_configs(const std::string& dir) {
    write_file(dir + "/keywords.txt",
               "climate change\n"
               "global warming\n"
               "extreme weather\n"
               "renewable energy\n"
               "carbon tax\n");
    write_file(dir + "/vocab_cc.txt",
               "climate change\n"
               "global warming\n"
               "carbon*\n"
               "extreme weather\n"
               "heat wave*\n"
               "drought*\n"
               "wildfire*\n"
               "sea level*\n");
    write_file(dir + "/vocab_re.txt",
               "renewable*\n"
               "solar*\n"
               "wind power\n"
               "clean energy\n"
               "geothermal*\n");
    write_file(dir + "/vocab_ghi.txt",
               "paris agreement\n"
               "carbon tax*\n"
               "epa\n"
               "climate policy\n"
               "green new deal\n");
    write_file(dir + "/lexicon.tsv",
               "gain\tpositive\t1\n"
               "gain\tnegative\t0\n"
               "growth\tpositive\t1\n"
               "improve\tpositive\t1\n"
               "opportunity\tpositive\t1\n"
               "benefit\tpositive\t1\n"
               "success\tpositive\t1\n"
               "crisis\tnegative\t1\n"
               "loss\tnegative\t1\n"
               "risk\tnegative\t1\n"
               "threat\tnegative\t1\n"
               "disaster\tnegative\t1\n"
               "decline\tnegative\t1\n"
               "market\tanticipation\t0\n");
}

}  // namespace climalens::synth
