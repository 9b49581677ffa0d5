#include "citerank/classify.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "citerank/csv.hpp"
#include "citerank/error.hpp"

namespace citerank {
namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t");
    return s.substr(first, last - first + 1);
}

double parse_count(std::string_view raw, std::size_t row, std::string_view column) {
    const auto text = trim(raw);
    double value = 0.0;
    const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (text.empty() || ec != std::errc{} || end != text.data() + text.size() || !std::isfinite(value)) {
        throw ParseError(row, std::string(column) + " value '" + std::string(text) + "' is not a number");
    }
    if (value < 0.0) throw ParseError(row, std::string(column) + " is negative");
    return value;
}

std::string normalize_period(std::string_view text) {
    std::string out;
    text = trim(text);
    for (std::size_t i = 0; i < text.size(); ++i) {
        // U+2013 and U+2014 in UTF-8
        if (i + 2 < text.size() && text[i] == '\xE2' && text[i + 1] == '\x80' &&
            (text[i + 2] == '\x93' || text[i + 2] == '\x94')) {
            out.push_back('-');
            i += 2;
        } else if (text[i] != ' ') {
            out.push_back(text[i]);
        }
    }
    return out;
}

} // namespace

std::vector<InstitutionPeriodRow> load_institution_table(std::istream& source, const InstitutionMapping& mapping) {
    const std::pair<const char*, const std::string*> required[] = {
        {"institution", &mapping.institution}, {"country", &mapping.country}, {"field", &mapping.field},
        {"period", &mapping.period},           {"counting", &mapping.counting}, {"P", &mapping.papers},
        {"p_top50", &mapping.top50},           {"p_top10", &mapping.top10},     {"p_top5", &mapping.top5},
        {"p_top1", &mapping.top1},
    };
    for (const auto& [key, name] : required) {
        if (name->empty()) throw SchemaError(std::string("mapping does not name a column for '") + key + "'");
    }

    csv::Reader reader(source, mapping.delimiter);
    std::size_t cols[std::size(required)];
    for (std::size_t i = 0; i < std::size(required); ++i) {
        const auto col = reader.column(*required[i].second);
        if (!col) {
            throw SchemaError("missing column '" + *required[i].second + "' (mapped as " + required[i].first + ")");
        }
        cols[i] = *col;
    }

    std::vector<InstitutionPeriodRow> rows;
    while (auto fields = reader.next()) {
        const auto row = reader.row();
        if (fields->size() != reader.header().size()) {
            throw ParseError(row, "expected " + std::to_string(reader.header().size()) + " fields, found " +
                                      std::to_string(fields->size()));
        }
        auto cell = [&](std::size_t i) { return trim((*fields)[cols[i]]); };
        InstitutionPeriodRow r;
        r.institution = std::string(cell(0));
        r.country = std::string(cell(1));
        r.field = std::string(cell(2));
        r.period = std::string(cell(3));
        const auto counting = std::string(cell(4));
        auto in = [&](const std::vector<std::string>& values) {
            return std::find(values.begin(), values.end(), counting) != values.end();
        };
        if (in(mapping.fractional_values)) {
            r.counting = Counting::fractional;
        } else if (in(mapping.full_values)) {
            r.counting = Counting::full;
        } else {
            throw ParseError(row, "unrecognized counting method '" + counting + "'");
        }
        r.papers = parse_count(cell(5), row, mapping.papers);
        r.top.top50 = parse_count(cell(6), row, mapping.top50);
        r.top.top10 = parse_count(cell(7), row, mapping.top10);
        r.top.top5 = parse_count(cell(8), row, mapping.top5);
        r.top.top1 = parse_count(cell(9), row, mapping.top1);
        // published tables round fractional counts; allow that much slack
        const double slack = 1e-6 * std::max(1.0, r.papers);
        if (r.top.top1 > r.top.top5 + slack || r.top.top5 > r.top.top10 + slack ||
            r.top.top10 > r.top.top50 + slack || r.top.top50 > r.papers + slack) {
            throw ParseError(row, "top-percentile counts must not increase toward narrower percentiles");
        }
        rows.push_back(std::move(r));
    }
    return rows;
}

std::vector<std::string> default_periods() {
    return {"2015–2018", "2016–2019", "2017–2020", "2018–2021"};
}

bool same_period(std::string_view a, std::string_view b) { return normalize_period(a) == normalize_period(b); }

EligibilityResult filter_eligible(const std::vector<InstitutionPeriodRow>& rows, double min_top1,
                                  const std::vector<std::string>& required_periods) {
    if (required_periods.empty()) throw DomainError("eligibility needs at least one required period");

    // (institution, field) in order of first appearance
    std::vector<std::pair<std::string, std::string>> keys;
    std::map<std::pair<std::string, std::string>, std::vector<const InstitutionPeriodRow*>> grouped;
    for (const auto& r : rows) {
        if (r.counting != Counting::fractional) continue;
        auto key = std::make_pair(r.institution, r.field);
        auto [it, inserted] = grouped.try_emplace(key);
        if (inserted) keys.push_back(key);
        it->second.push_back(&r);
    }

    EligibilityResult result;
    for (const auto& key : keys) {
        const auto& members = grouped.at(key);
        InstitutionRecord record{key.first, members.front()->country, key.second, {}};
        std::string reason;
        for (const auto& period : required_periods) {
            const auto hit = std::find_if(members.begin(), members.end(),
                                          [&](const auto* r) { return same_period(r->period, period); });
            if (hit == members.end()) {
                reason = "missing period " + period;
                break;
            }
            if ((*hit)->top.top1 < min_top1) {
                reason = "P_top1 = " + std::to_string((*hit)->top.top1) + " below " + std::to_string(min_top1) +
                         " in period " + period;
                break;
            }
            record.periods.push_back(**hit);
        }
        if (reason.empty()) {
            result.eligible.push_back(std::move(record));
        } else {
            result.excluded.push_back({key.first, key.second, std::move(reason)});
        }
    }
    return result;
}

MeanRatios mean_ratios(const std::vector<InstitutionPeriodRow>& rows) {
    MeanRatios out;
    for (const auto& r : rows) {
        if (!(r.papers > 0.0) || !(r.top.top50 > 0.0) || !(r.top.top10 > 0.0)) {
            out.warnings.push_back("period " + r.period + " of " + r.institution + " dropped: zero denominator");
            continue;
        }
        out.r1 += r.top.top10 / r.papers;
        out.r2 += r.top.top5 / r.top.top50;
        out.r3 += r.top.top1 / r.top.top10;
        ++out.periods_used;
    }
    if (out.periods_used == 0) throw InsufficientDataError("no period with positive denominators");
    const double n = static_cast<double>(out.periods_used);
    out.r1 /= n;
    out.r2 /= n;
    out.r3 /= n;
    return out;
}

std::string_view to_string(InstitutionType type) {
    switch (type) {
    case InstitutionType::A:
        return "A";
    case InstitutionType::B:
        return "B";
    case InstitutionType::C:
        return "C";
    }
    return "?";
}

InstitutionType parse_institution_type(std::string_view text) {
    if (text == "A") return InstitutionType::A;
    if (text == "B") return InstitutionType::B;
    if (text == "C") return InstitutionType::C;
    throw DomainError("unknown institution type '" + std::string(text) + "'");
}

SpreadDenominator parse_spread_denominator(std::string_view text) {
    if (text == "min") return SpreadDenominator::min;
    if (text == "max") return SpreadDenominator::max;
    if (text == "mean") return SpreadDenominator::mean;
    throw DomainError("unknown spread denominator '" + std::string(text) + "' (expected min, max or mean)");
}

std::string_view to_string(SpreadDenominator d) {
    switch (d) {
    case SpreadDenominator::min:
        return "min";
    case SpreadDenominator::max:
        return "max";
    case SpreadDenominator::mean:
        return "mean";
    }
    return "?";
}

double stability_spread(double r1, double r2, double r3, SpreadDenominator denominator) {
    if (!(r1 > 0.0 && r2 > 0.0 && r3 > 0.0)) throw DomainError("ratios must be positive to classify");
    const double hi = std::max({r1, r2, r3});
    const double lo = std::min({r1, r2, r3});
    double d = lo;
    if (denominator == SpreadDenominator::max) d = hi;
    if (denominator == SpreadDenominator::mean) d = (r1 + r2 + r3) / 3.0;
    return (hi - lo) / d;
}

InstitutionType classify(double r1, double r2, double r3, double stability_threshold, SpreadDenominator denominator) {
    if (!(stability_threshold >= 0.0)) throw DomainError("stability threshold must be non-negative");
    if (stability_spread(r1, r2, r3, denominator) <= stability_threshold) return InstitutionType::A;
    return r1 > r3 ? InstitutionType::B : InstitutionType::C;
}

InstitutionAssessment assess_ratios(std::string institution, std::string country, std::string field, double r1,
                                    double r2, double r3, const ClassifyOptions& options) {
    InstitutionAssessment a;
    a.institution = std::move(institution);
    a.country = std::move(country);
    a.field = std::move(field);
    a.r1 = r1;
    a.r2 = r2;
    a.r3 = r3;
    a.spread = stability_spread(r1, r2, r3, options.denominator);
    a.type = classify(r1, r2, r3, options.stability, options.denominator);
    a.periods_used = 1;
    return a;
}

InstitutionAssessment assess(const InstitutionRecord& record, const ClassifyOptions& options) {
    const auto means = mean_ratios(record.periods);
    auto a = assess_ratios(record.institution, record.country, record.field, means.r1, means.r2, means.r3, options);
    a.periods_used = means.periods_used;
    return a;
}

CountrySummary country_summary(const std::vector<InstitutionAssessment>& assessments) {
    CountrySummary s;
    for (const auto& a : assessments) {
        const auto t = static_cast<std::size_t>(a.type);
        ++s.by_field[a.field][a.country][t];
        ++s.totals[a.field][t];
        ++s.assessed;
    }
    return s;
}

Bottom50Share bottom50_share(const std::vector<InstitutionPeriodRow>& rows) {
    std::vector<double> shares;
    for (const auto& r : rows) {
        if (r.papers > 0.0) shares.push_back(1.0 - r.top.top50 / r.papers);
    }
    if (shares.empty()) throw InsufficientDataError("bottom-50% share needs a period with P > 0");
    Bottom50Share out;
    out.periods = shares.size();
    for (double s : shares) out.mean += s;
    out.mean /= static_cast<double>(shares.size());
    if (shares.size() > 1) {
        double ss = 0.0;
        for (double s : shares) ss += (s - out.mean) * (s - out.mean);
        out.sd = std::sqrt(ss / static_cast<double>(shares.size() - 1));
    }
    return out;
}

} // namespace citerank
