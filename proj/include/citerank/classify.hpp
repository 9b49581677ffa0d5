#pragma once

#include <array>
#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "citerank/percentile.hpp"

namespace citerank {

enum class Counting { fractional, full };

/// One row of a university ranking table: indicators of one institution in
/// one field and evaluation period.
struct InstitutionPeriodRow {
    std::string institution;
    std::string country;
    std::string field;
    std::string period;
    Counting counting = Counting::fractional;
    double papers = 0.0; // P
    TopCounts top;
};

/// Column names of an institution table. Every member must be non-empty.
struct InstitutionMapping {
    std::string institution = "University";
    std::string country = "Country";
    std::string field = "Field";
    std::string period = "Period";
    std::string counting = "Frac_counting";
    std::string papers = "P";
    std::string top50 = "P_top50";
    std::string top10 = "P_top10";
    std::string top5 = "P_top5";
    std::string top1 = "P_top1";
    char delimiter = ',';
    /// Cell values meaning fractional counting; others must be in full_values.
    std::vector<std::string> fractional_values = {"1", "fractional", "frac", "true"};
    std::vector<std::string> full_values = {"0", "full", "false"};
};

/// Throws SchemaError naming the first unmapped or absent column and
/// ParseError for negative or non-monotone counts.
std::vector<InstitutionPeriodRow> load_institution_table(std::istream& source, const InstitutionMapping& mapping);

/// The four evaluation periods averaged in the published tables.
std::vector<std::string> default_periods();

/// Period labels compare equal regardless of hyphen versus en-dash.
bool same_period(std::string_view a, std::string_view b);

/// Fractional-counting rows of one institution in one field, one per
/// required period, in the order of the required periods.
struct InstitutionRecord {
    std::string institution;
    std::string country;
    std::string field;
    std::vector<InstitutionPeriodRow> periods;
};

struct Exclusion {
    std::string institution;
    std::string field;
    std::string reason;
};

struct EligibilityResult {
    std::vector<InstitutionRecord> eligible;
    std::vector<Exclusion> excluded;
};

inline constexpr double kDefaultMinTop1 = 10.0;

/// Keeps an institution/field iff every required period has a fractional
/// row with P_top1% >= min_top1. Missing periods exclude, with a reason.
EligibilityResult filter_eligible(const std::vector<InstitutionPeriodRow>& rows, double min_top1 = kDefaultMinTop1,
                                  const std::vector<std::string>& required_periods = default_periods());

struct MeanRatios {
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    std::size_t periods_used = 0;
    std::vector<std::string> warnings;
};

/// Per-period ratios averaged across periods (mean of ratios). Periods with
/// a zero denominator are dropped with a warning.
MeanRatios mean_ratios(const std::vector<InstitutionPeriodRow>& rows);

enum class InstitutionType { A, B, C };
std::string_view to_string(InstitutionType type);
InstitutionType parse_institution_type(std::string_view text);

/// Denominator of the stability spread (max - min) / d.
enum class SpreadDenominator { min, max, mean };
SpreadDenominator parse_spread_denominator(std::string_view text);
std::string_view to_string(SpreadDenominator d);

inline constexpr double kDefaultStability = 0.15;

double stability_spread(double r1, double r2, double r3, SpreadDenominator denominator = SpreadDenominator::min);

/// A when the spread is within the threshold, otherwise B when R1 > R3
/// (ratios fall toward the top) and C when they rise.
/// Throws DomainError for non-positive ratios.
InstitutionType classify(double r1, double r2, double r3, double stability_threshold = kDefaultStability,
                         SpreadDenominator denominator = SpreadDenominator::min);

struct InstitutionAssessment {
    std::string institution;
    std::string country;
    std::string field;
    double r1 = 0.0;
    double r2 = 0.0;
    double r3 = 0.0;
    double spread = 0.0;
    InstitutionType type = InstitutionType::A;
    std::size_t periods_used = 0;
};

struct ClassifyOptions {
    double stability = kDefaultStability;
    SpreadDenominator denominator = SpreadDenominator::min;
};

InstitutionAssessment assess(const InstitutionRecord& record, const ClassifyOptions& options = {});

/// Assessment from already averaged ratios (published-table style input).
InstitutionAssessment assess_ratios(std::string institution, std::string country, std::string field, double r1,
                                    double r2, double r3, const ClassifyOptions& options = {});

/// Type counts per field and country, plus per-field totals.
struct CountrySummary {
    using Counts = std::array<std::size_t, 3>; // A, B, C
    std::map<std::string, std::map<std::string, Counts>> by_field; // field -> country -> counts
    std::map<std::string, Counts> totals;                          // field -> counts
    std::size_t assessed = 0;
};

CountrySummary country_summary(const std::vector<InstitutionAssessment>& assessments);

/// Per-period bottom-50% shares of one institution: mean and sample
/// standard deviation across periods.
struct Bottom50Share {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t periods = 0;
};

Bottom50Share bottom50_share(const std::vector<InstitutionPeriodRow>& rows);

} // namespace citerank
