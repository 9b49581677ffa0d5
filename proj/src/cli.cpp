#include "citerank/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <set>
#include <sstream>

#include "citerank/csv.hpp"
#include "citerank/error.hpp"
#include "citerank/percentile.hpp"
#include "citerank/tails.hpp"

namespace citerank::cli {
namespace {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

std::string fixed(double value, int digits) {
    if (!std::isfinite(value)) return "nan";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, value);
    return buf;
}

std::string ratio_text(const std::optional<double>& r) { return r ? fixed(*r, 6) : "N/C"; }

Json ratio_json(const std::optional<double>& r) { return r ? Json(*r) : Json(nullptr); }

std::string level_name(double level) {
    std::ostringstream s;
    s << level;
    return s.str();
}

std::string safe_name(std::string_view label) {
    std::string out;
    for (unsigned char c : label) out.push_back(std::isalnum(c) || c == '-' || c == '_' ? static_cast<char>(c) : '_');
    return out.empty() ? "_" : out;
}

std::string_view command_name(Command c) {
    switch (c) {
    case Command::indicators:
        return "indicators";
    case Command::doublerank:
        return "doublerank";
    case Command::histogram:
        return "histogram";
    case Command::classify:
        return "classify";
    case Command::summary:
        return "summary";
    case Command::synth:
        return "synth";
    }
    return "?";
}

// ---------------------------------------------------------------- output

struct Emitter {
    const RunConfig& config;
    RunResult& result;

    std::vector<std::pair<std::string, std::string>> metadata() const {
        std::vector<std::pair<std::string, std::string>> m{
            {"tool", std::string(kToolName) + " " + kVersion},
            {"command", std::string(command_name(config.command))},
            {"config_digest", config_digest(config)},
            {"tie_policy", std::string(to_string(config.tie_policy))},
            {"thresholds", "stability=" + fixed(config.stability, 4) + " denominator=" +
                               std::string(to_string(config.denominator)) + " min_top1=" + fixed(config.min_top1, 4) +
                               " window=" + (config.window ? fixed(*config.window, 4) : std::string("default")) +
                               " tolerance=" + fixed(config.tolerance, 4) + " r3_min_top1=" +
                               fixed(config.r3_min_top1, 4)},
            {"seed", std::to_string(config.seed)},
        };
        if (config.timestamp) {
            const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
            std::tm utc{};
            gmtime_r(&now, &utc);
            std::ostringstream s;
            s << std::put_time(&utc, "%Y-%m-%dT%H:%M:%SZ");
            m.emplace_back("timestamp", s.str());
        }
        return m;
    }

    std::ofstream open(const std::string& name) {
        const auto path = config.out_dir / name;
        std::ofstream out(path, std::ios::binary);
        if (!out) throw DomainError("cannot write " + path.string());
        result.files.push_back(path);
        return out;
    }

    void csv(const std::string& stem, const std::vector<std::string>& header,
             const std::vector<std::vector<std::string>>& rows) {
        auto out = open(stem + ".csv");
        for (const auto& [k, v] : metadata()) out << "# " << k << ": " << v << '\n';
        out << csv::join(header) << '\n';
        for (const auto& r : rows) out << csv::join(r) << '\n';
    }

    void json(const std::string& stem, Json body) {
        auto out = open(stem + ".json");
        Json doc;
        Json meta;
        for (const auto& [k, v] : metadata()) meta[k] = v;
        doc["metadata"] = std::move(meta);
        for (auto& [k, v] : body.items()) doc[k] = v;
        out << doc.dump(2) << '\n';
    }

    // table in the configured format; JSON rows are objects keyed by header
    void table(const std::string& stem, const std::vector<std::string>& header,
               const std::vector<std::vector<std::string>>& rows, const Json& json_rows) {
        if (config.format == Format::csv) {
            csv(stem, header, rows);
        } else {
            json(stem, Json{{"rows", json_rows}});
        }
    }
};

// ---------------------------------------------------------------- inputs

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open input '" + path + "'");
    return in;
}

const std::string& single_input(const RunConfig& config) {
    if (config.inputs.size() != 1) throw DomainError("this command takes exactly one --input");
    return config.inputs.front();
}

RankedCorpus load_ranked(const RunConfig& config) {
    auto in = open_input(single_input(config));
    return rank_global(load_corpus(in, config.schema), config.tie_policy);
}

std::vector<std::string> selected_groups(const RunConfig& config, const RankedCorpus& corpus, bool with_global) {
    if (!config.groups.empty()) {
        for (const auto& g : config.groups) {
            if (!corpus.has_group(g)) throw LookupError("unknown group '" + g + "'");
        }
        return config.groups;
    }
    std::vector<std::string> groups;
    if (with_global) groups.emplace_back(kGlobal);
    for (auto& g : corpus.group_labels()) groups.push_back(std::move(g));
    return groups;
}

// ---------------------------------------------------------------- commands

void run_indicators(const RunConfig& config, Emitter& emit) {
    const auto corpus = load_ranked(config);
    const IndicatorOptions options{config.strict_ties ? TieCounting::strict : TieCounting::fractional,
                                   config.r3_min_top1};
    std::vector<PercentileThreshold> thresholds;
    for (double level : config.percentiles) thresholds.push_back(percentile_threshold(corpus, level));

    std::vector<std::string> header{"group", "P"};
    for (double level : config.percentiles) header.push_back("P_top" + level_name(level));
    for (const char* h : {"R1", "R2", "R3", "bottom50", "flags"}) header.emplace_back(h);

    std::vector<std::vector<std::string>> rows;
    Json json_rows = Json::array();
    for (const auto& group : selected_groups(config, corpus, true)) {
        const auto set = indicator_set(corpus, group, options);
        std::vector<std::string> row{group, std::to_string(set.papers)};
        Json j{{"group", group}, {"P", set.papers}};
        for (const auto& t : thresholds) {
            const double count = top_percentile_count(corpus, group, t, options.counting);
            row.push_back(fixed(count, 3));
            j["P_top" + level_name(t.level)] = count;
        }
        const double b50 = bottom50_share(set);
        row.push_back(ratio_text(set.ratios.r1));
        row.push_back(ratio_text(set.ratios.r2));
        row.push_back(ratio_text(set.ratios.r3));
        row.push_back(fixed(b50, 6));
        row.push_back(describe_flags(set.flags));
        j["R1"] = ratio_json(set.ratios.r1);
        j["R2"] = ratio_json(set.ratios.r2);
        j["R3"] = ratio_json(set.ratios.r3);
        j["bottom50"] = b50;
        j["flags"] = describe_flags(set.flags);
        rows.push_back(std::move(row));
        json_rows.push_back(std::move(j));
    }
    emit.table("indicators", header, rows, json_rows);

    std::vector<std::vector<std::string>> trows;
    Json tjson = Json::array();
    for (const auto& t : thresholds) {
        trows.push_back({level_name(t.level), std::to_string(t.c_star), std::to_string(t.full_weight_above),
                         std::to_string(t.tied), fixed(t.tie_fraction, 6)});
        tjson.push_back({{"level", t.level},
                         {"c_star", t.c_star},
                         {"full_weight_above", t.full_weight_above},
                         {"tied", t.tied},
                         {"tie_fraction", t.tie_fraction}});
    }
    emit.table("thresholds", {"level", "c_star", "full_weight_above", "tied", "tie_fraction"}, trows, tjson);
}

void run_doublerank(const RunConfig& config, Emitter& emit) {
    const auto corpus = load_ranked(config);
    const auto groups = selected_groups(config, corpus, false);
    if (groups.empty()) throw InsufficientDataError("corpus has no groups to analyse");
    const double G = static_cast<double>(corpus.global_size());

    for (const auto& group : groups) {
        const auto series = double_rank_series(corpus, group);
        const auto set = indicator_set(corpus, group, {TieCounting::fractional, config.r3_min_top1});
        const double lo_count = config.anchors == AnchorPair::all_and_top10 ? set.top.top10 : set.top.top1;
        if (!(lo_count > 0.0)) {
            throw InsufficientDataError("group '" + group + "' has no papers at the lower reference anchor");
        }
        const auto ref = reference_from_indicators(set, config.anchors, G);
        const double window = config.window.value_or(std::min(kDefaultDeviationWindow, ref.anchor_lo.fraction));
        const auto report = upper_tail_deviation(series, ref, window, config.tolerance);

        std::vector<std::vector<std::string>> rows;
        Json points = Json::array();
        for (const auto& p : series.points) {
            const double l_ref = expected_local_rank(ref, p.global_rank);
            rows.push_back({fixed(p.global_rank, 1), fixed(p.local_rank, 0), fixed(l_ref, 6)});
            points.push_back({{"g", p.global_rank}, {"l_actual", p.local_rank}, {"l_reference", l_ref}});
        }
        emit.table("doublerank_" + safe_name(group), {"g", "l_actual", "l_reference"}, rows, points);

        Json dev;
        dev["group"] = group;
        dev["anchors"] = std::string(to_string(config.anchors));
        dev["reference"] = {{"alpha", ref.alpha},
                            {"coeff", ref.coeff},
                            {"anchor_hi", {{"fraction", ref.anchor_hi.fraction}, {"count", ref.anchor_hi.count}}},
                            {"anchor_lo", {{"fraction", ref.anchor_lo.fraction}, {"count", ref.anchor_lo.count}}},
                            {"G", ref.global_size}};
        dev["deviation"] = {{"window", report.window},
                            {"points", report.points},
                            {"mean_log_residual", report.mean_log_residual},
                            {"max_abs_log_residual", report.max_abs_log_residual},
                            {"tolerance", report.tolerance},
                            {"verdict", std::string(to_string(report.verdict))}};
        dev["ratios"] = {{"R1", ratio_json(set.ratios.r1)},
                         {"R2", ratio_json(set.ratios.r2)},
                         {"R3", ratio_json(set.ratios.r3)}};
        if (set.ratios.complete() && *set.ratios.r1 > 0.0) {
            const auto gap = ratio_equality_gap(set.ratios);
            dev["ratio_gap"] = {{"gap_12", gap.gap_12}, {"gap_13", gap.gap_13}};
        } else {
            dev["ratio_gap"] = nullptr;
        }
        Json breakthrough = Json::array();
        for (double x : {0.0002, 0.0001}) {
            if (x < ref.anchor_lo.fraction) {
                breakthrough.push_back(
                    {{"fraction", x}, {"expected", extrapolate_breakthrough(ref, x)}, {"extrapolated", true}});
            }
        }
        dev["breakthrough"] = std::move(breakthrough);
        emit.json("deviation_" + safe_name(group), std::move(dev));
    }
}

void run_histogram(const RunConfig& config, Emitter& emit) {
    const auto corpus = load_ranked(config);
    const LogBinSpec spec;
    auto citations_of = [&](const std::string& group) {
        std::vector<CitationCount> c;
        for (auto pos : corpus.group(group)) c.push_back(corpus.citations()[pos]);
        return c;
    };
    std::optional<LogBinHistogram> reference;
    if (config.reference_group) {
        if (!corpus.has_group(*config.reference_group)) throw LookupError("unknown group '" + *config.reference_group + "'");
        reference = log_binned_histogram(citations_of(*config.reference_group), spec);
    }
    std::vector<std::string> groups = config.groups.empty() ? std::vector<std::string>{std::string(kGlobal)} : config.groups;

    for (const auto& group : groups) {
        if (!corpus.has_group(group)) throw LookupError("unknown group '" + group + "'");
        const auto cites = citations_of(group);
        auto hist = log_binned_histogram(cites, spec);
        if (reference) hist = scale_to_reference(hist, *reference, config.anchor_bin);

        std::optional<LowerTailExcess> excess;
        LognormalParams model;
        if (config.fit) {
            model = estimate_lognormal(std::span<const CitationCount>(cites));
            if (config.model_mu) model.mu = *config.model_mu;
            if (config.model_sigma) model.sigma = *config.model_sigma;
            excess = lower_tail_excess(hist, model);
        }

        std::vector<std::vector<std::string>> rows;
        Json bins = Json::array();
        for (std::size_t i = 0; i < hist.bins.size(); ++i) {
            const auto& b = hist.bins[i];
            const std::string expected = excess ? fixed(excess->expected[i], 3) : "";
            rows.push_back({b.label, std::to_string(b.lower), std::to_string(b.upper), fixed(b.weight, 3), expected});
            Json j{{"bin_label", b.label}, {"lower", b.lower}, {"upper", b.upper}, {"weight", b.weight}};
            j["expected_weight"] = excess ? Json(excess->expected[i]) : Json(nullptr);
            bins.push_back(std::move(j));
        }
        emit.table("histogram_" + safe_name(group), {"bin_label", "lower", "upper", "weight", "expected_weight"}, rows,
                   bins);

        if (excess) {
            Json per_bin = Json::array();
            for (std::size_t i = 0; i < excess->excess.size(); ++i) {
                per_bin.push_back({{"bin_label", hist.bins[i].label}, {"excess", excess->excess[i]}});
            }
            emit.json("excess_" + safe_name(group),
                      Json{{"group", group},
                           {"model", {{"mu", model.mu}, {"sigma", model.sigma}, {"n", model.n},
                                      {"excluded_zeros", model.excluded_zeros}}},
                           {"mode_bin", hist.bins.size() > excess->mode_bin ? Json(hist.bins[excess->mode_bin].label)
                                                                            : Json(nullptr)},
                           {"mode_undefined", excess->mode_undefined},
                           {"excess", per_bin},
                           {"total_excess", excess->total_excess},
                           {"excess_fraction", excess->excess_fraction}});
        }
    }
}

std::vector<InstitutionAssessment> load_ratio_table(const RunConfig& config, const std::string& path,
                                                    const ClassifyOptions& options) {
    auto in = open_input(path);
    csv::Reader reader(in, config.mapping.delimiter);
    auto need = [&](const std::string& name) {
        auto c = reader.column(name);
        if (!c) throw SchemaError("missing column '" + name + "'");
        return *c;
    };
    const auto ci = need(config.mapping.institution);
    const auto cc = need(config.mapping.country);
    const auto cf = reader.column(config.mapping.field);
    const auto c1 = need("R1"), c2 = need("R2"), c3 = need("R3");
    std::vector<InstitutionAssessment> out;
    while (auto f = reader.next()) {
        if (f->size() != reader.header().size()) throw ParseError(reader.row(), "wrong field count");
        auto num = [&](std::size_t c) {
            try {
                std::size_t used = 0;
                const double v = std::stod((*f)[c], &used);
                if (used != (*f)[c].size()) throw std::invalid_argument("trailing");
                return v;
            } catch (const std::exception&) {
                throw ParseError(reader.row(), "ratio '" + (*f)[c] + "' is not a number");
            }
        };
        out.push_back(assess_ratios((*f)[ci], (*f)[cc], cf ? (*f)[*cf] : std::string(), num(c1), num(c2), num(c3),
                                    options));
    }
    return out;
}

void run_classify(const RunConfig& config, Emitter& emit) {
    const ClassifyOptions options{config.stability, config.denominator};
    std::vector<InstitutionAssessment> assessments;
    std::vector<Exclusion> excluded;

    if (config.ratios_input) {
        for (const auto& path : config.inputs) {
            auto part = load_ratio_table(config, path, options);
            assessments.insert(assessments.end(), part.begin(), part.end());
        }
    } else {
        std::vector<InstitutionPeriodRow> rows;
        for (const auto& path : config.inputs) {
            auto in = open_input(path);
            auto part = load_institution_table(in, config.mapping);
            rows.insert(rows.end(), part.begin(), part.end());
        }
        if (!config.fields.empty()) {
            std::erase_if(rows, [&](const auto& r) {
                return std::find(config.fields.begin(), config.fields.end(), r.field) == config.fields.end();
            });
        }
        auto eligible = filter_eligible(rows, config.min_top1, config.periods);
        for (const auto& record : eligible.eligible) assessments.push_back(assess(record, options));
        excluded = std::move(eligible.excluded);
    }
    if (config.inputs.empty()) throw DomainError("classify needs at least one --input");

    std::vector<std::vector<std::string>> rows;
    Json json_rows = Json::array();
    for (const auto& a : assessments) {
        rows.push_back({a.institution, a.country, a.field, fixed(a.r1, 6), fixed(a.r2, 6), fixed(a.r3, 6),
                        fixed(a.spread, 6), std::string(to_string(a.type))});
        json_rows.push_back({{"institution", a.institution},
                             {"country", a.country},
                             {"field", a.field},
                             {"R1", a.r1},
                             {"R2", a.r2},
                             {"R3", a.r3},
                             {"spread", a.spread},
                             {"type", std::string(to_string(a.type))},
                             {"periods_used", a.periods_used}});
    }
    emit.table("assessments", {"institution", "country", "field", "R1", "R2", "R3", "spread", "type"}, rows,
               json_rows);

    if (!config.ratios_input) {
        std::vector<std::vector<std::string>> xrows;
        Json xjson = Json::array();
        for (const auto& x : excluded) {
            xrows.push_back({x.institution, x.field, x.reason});
            xjson.push_back({{"institution", x.institution}, {"field", x.field}, {"reason", x.reason}});
            emit.result.warnings.push_back("excluded " + x.institution + " (" + x.field + "): " + x.reason);
        }
        emit.table("exclusions", {"institution", "field", "reason"}, xrows, xjson);
    }
}

void run_summary(const RunConfig& config, Emitter& emit) {
    if (config.inputs.empty()) throw DomainError("summary needs at least one --input");
    std::vector<InstitutionAssessment> assessments;
    for (const auto& path : config.inputs) {
        auto in = open_input(path);
        csv::Reader reader(in, ',');
        auto need = [&](const char* name) {
            auto c = reader.column(name);
            if (!c) throw SchemaError(std::string("missing column '") + name + "'");
            return *c;
        };
        const auto ci = need("institution"), cc = need("country"), cf = need("field"), ct = need("type");
        while (auto f = reader.next()) {
            if (f->size() != reader.header().size()) throw ParseError(reader.row(), "wrong field count");
            InstitutionAssessment a;
            a.institution = (*f)[ci];
            a.country = (*f)[cc];
            a.field = (*f)[cf];
            try {
                a.type = parse_institution_type((*f)[ct]);
            } catch (const DomainError& e) {
                throw ParseError(reader.row(), e.what());
            }
            assessments.push_back(std::move(a));
        }
    }
    const auto summary = country_summary(assessments);

    std::vector<std::string> fields;
    std::set<std::string> countries;
    for (const auto& [field, by_country] : summary.by_field) {
        fields.push_back(field);
        for (const auto& [country, _] : by_country) countries.insert(country);
    }
    std::vector<std::string> header{"country"};
    for (const auto& f : fields) {
        for (const char* t : {"A", "B", "C"}) header.push_back(f + " Type " + t);
    }
    std::vector<std::vector<std::string>> rows;
    Json json_rows = Json::array();
    auto emit_row = [&](const std::string& label, auto&& counts_for) {
        std::vector<std::string> row{label};
        Json j{{"country", label}};
        for (const auto& f : fields) {
            const CountrySummary::Counts counts = counts_for(f);
            Json jf;
            for (std::size_t t = 0; t < 3; ++t) {
                row.push_back(std::to_string(counts[t]));
                jf[std::string(to_string(static_cast<InstitutionType>(t)))] = counts[t];
            }
            j[f] = std::move(jf);
        }
        rows.push_back(std::move(row));
        json_rows.push_back(std::move(j));
    };
    for (const auto& country : countries) {
        emit_row(country, [&](const std::string& f) {
            const auto& by_country = summary.by_field.at(f);
            const auto it = by_country.find(country);
            return it == by_country.end() ? CountrySummary::Counts{0, 0, 0} : it->second;
        });
    }
    emit_row("Total", [&](const std::string& f) { return summary.totals.at(f); });
    emit.table("country_summary", header, rows, json_rows);
}

void run_synth(const RunConfig& config, Emitter& emit) {
    auto spec = config.synth;
    spec.seed = config.seed;
    spec.policy = config.tie_policy;
    RankedCorpus corpus = config.mu_shift ? make_lognormal_shift_corpus(spec, *config.mu_shift)
                                          : make_power_law_corpus(spec);
    if (config.inject == "inflate") {
        const auto extra = config.extra ? config.extra : corpus.group(spec.group).size();
        corpus = inject_inflated_lower_tail(corpus, spec.group, extra, config.seed + 1,
                                            config.group_only ? InjectionScope::group_only
                                                              : InjectionScope::group_and_global);
    } else if (config.inject == "deflate") {
        auto result = inject_deflated_lower_tail(corpus, spec.group, config.remove_fraction, config.seed + 1);
        if (result.warning) emit.result.warnings.push_back(*result.warning);
        corpus = std::move(result.corpus);
    } else if (config.inject == "shift") {
        corpus = inject_upper_tail_shift(corpus, spec.group, config.top_m, config.factor);
    } else if (config.inject != "none") {
        throw DomainError("unknown injection '" + config.inject + "' (expected none, inflate, deflate or shift)");
    }

    auto out = emit.open("corpus.csv");
    for (const auto& [k, v] : emit.metadata()) out << "# " << k << ": " << v << '\n';
    write_corpus(out, corpus.papers(), config.schema);
}

// ---------------------------------------------------------------- config files

void apply_schema_file(RunConfig& config) {
    if (config.schema_path.empty()) return;
    std::ifstream in(config.schema_path);
    if (!in) throw SchemaError("cannot open schema file '" + config.schema_path + "'");
    Json j;
    try {
        j = Json::parse(in);
    } catch (const std::exception& e) {
        throw SchemaError("schema file '" + config.schema_path + "' is not valid JSON: " + e.what());
    }
    auto str = [&](const char* key, std::string& target) {
        if (j.contains(key)) target = j.at(key).get<std::string>();
    };
    auto chr = [&](const char* key, char& target) {
        if (!j.contains(key)) return;
        const auto s = j.at(key).get<std::string>();
        if (s.size() > 1) throw SchemaError(std::string(key) + " must be a single character");
        target = s.empty() ? '\0' : s[0];
    };
    try {
        str("id_column", config.schema.id_column);
        str("citations_column", config.schema.citations_column);
        if (j.contains("group_columns")) config.schema.group_columns = j.at("group_columns").get<std::vector<std::string>>();
        chr("delimiter", config.schema.delimiter);
        chr("label_separator", config.schema.label_separator);

        auto& m = config.mapping;
        str("institution", m.institution);
        str("country", m.country);
        str("field", m.field);
        str("period", m.period);
        str("counting", m.counting);
        str("P", m.papers);
        str("p_top50", m.top50);
        str("p_top10", m.top10);
        str("p_top5", m.top5);
        str("p_top1", m.top1);
        chr("delimiter", m.delimiter);
        if (j.contains("fractional_values")) m.fractional_values = j.at("fractional_values").get<std::vector<std::string>>();
        if (j.contains("full_values")) m.full_values = j.at("full_values").get<std::vector<std::string>>();
    } catch (const nlohmann::json::exception& e) {
        throw SchemaError("schema file '" + config.schema_path + "': " + e.what());
    }
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream s(text);
    while (std::getline(s, item, ',')) {
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

} // namespace

std::string canonical_config(const RunConfig& c) {
    Json j;
    j["command"] = std::string(command_name(c.command));
    j["inputs"] = c.inputs;
    j["schema_path"] = c.schema_path;
    j["format"] = c.format == Format::csv ? "csv" : "json";
    j["seed"] = c.seed;
    j["schema"] = {{"id", c.schema.id_column},
                   {"citations", c.schema.citations_column},
                   {"groups", c.schema.group_columns},
                   {"delimiter", std::string(1, c.schema.delimiter)},
                   {"label_separator", std::string(1, c.schema.label_separator)}};
    j["tie_policy"] = std::string(to_string(c.tie_policy));
    j["groups"] = c.groups;
    j["percentiles"] = c.percentiles;
    j["strict_ties"] = c.strict_ties;
    j["r3_min_top1"] = c.r3_min_top1;
    j["anchors"] = std::string(to_string(c.anchors));
    j["window"] = c.window ? Json(*c.window) : Json(nullptr);
    j["tolerance"] = c.tolerance;
    j["reference_group"] = c.reference_group ? Json(*c.reference_group) : Json(nullptr);
    j["anchor_bin"] = c.anchor_bin;
    j["fit"] = c.fit;
    j["model_mu"] = c.model_mu ? Json(*c.model_mu) : Json(nullptr);
    j["model_sigma"] = c.model_sigma ? Json(*c.model_sigma) : Json(nullptr);
    const auto& m = c.mapping;
    j["mapping"] = {m.institution, m.country, m.field, m.period, m.counting, m.papers, m.top50, m.top10, m.top5, m.top1,
                    std::string(1, m.delimiter), m.fractional_values, m.full_values};
    j["ratios_input"] = c.ratios_input;
    j["stability"] = c.stability;
    j["denominator"] = std::string(to_string(c.denominator));
    j["min_top1"] = c.min_top1;
    j["periods"] = c.periods;
    j["fields"] = c.fields;
    j["synth"] = {{"G", c.synth.global_size},   {"P", c.synth.group_size},     {"alpha", c.synth.alpha},
                  {"mu", c.synth.lognormal.mu}, {"sigma", c.synth.lognormal.sigma}, {"group", c.synth.group}};
    j["mu_shift"] = c.mu_shift ? Json(*c.mu_shift) : Json(nullptr);
    j["inject"] = {{"kind", c.inject},   {"extra", c.extra},   {"remove_fraction", c.remove_fraction},
                   {"top_m", c.top_m},   {"factor", c.factor}, {"group_only", c.group_only}};
    return j.dump();
}

std::string config_digest(const RunConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical_config(config)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

RunResult run(const RunConfig& config) {
    std::error_code ec;
    fs::create_directories(config.out_dir, ec);
    if (ec || !fs::is_directory(config.out_dir)) {
        throw DomainError("output directory '" + config.out_dir.string() + "' is not usable");
    }
    RunResult result;
    Emitter emit{config, result};
    switch (config.command) {
    case Command::indicators:
        run_indicators(config, emit);
        break;
    case Command::doublerank:
        run_doublerank(config, emit);
        break;
    case Command::histogram:
        run_histogram(config, emit);
        break;
    case Command::classify:
        run_classify(config, emit);
        break;
    case Command::summary:
        run_summary(config, emit);
        break;
    case Command::synth:
        run_synth(config, emit);
        break;
    }
    return result;
}

int exit_code_for(const std::exception& error) {
    if (dynamic_cast<const CLI::Error*>(&error)) return kUsage;
    if (dynamic_cast<const SchemaError*>(&error) || dynamic_cast<const ParseError*>(&error) ||
        dynamic_cast<const IngestionError*>(&error)) {
        return kParse;
    }
    if (dynamic_cast<const DomainError*>(&error) || dynamic_cast<const LookupError*>(&error)) return kUsage;
    if (dynamic_cast<const InsufficientDataError*>(&error)) return kInsufficient;
    if (dynamic_cast<const InvariantError*>(&error)) return kInvariant;
    return kInternal;
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    RunConfig config;
    if (const char* env = std::getenv("CITERANK_OUT")) config.out_dir = env;

    CLI::App app{"Percentile citation indicators, double-rank deviations and institution types"};
    app.set_version_flag("--version", std::string(kToolName) + " " + kVersion);
    app.require_subcommand(1, 1);

    std::string format = "csv", tie_policy = "mean", anchors = "P:top10", denominator = "min";
    std::string percentiles, periods;
    std::optional<std::string> id_column, citations_column, group_columns, delimiter;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--input", config.inputs, "Input file (repeatable where noted)");
        sub->add_option("--schema", config.schema_path, "JSON schema / column mapping file");
        sub->add_option("--out", config.out_dir, "Output directory (default $CITERANK_OUT or .)");
        sub->add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
        sub->add_option("--seed", config.seed, "Seed for stochastic steps");
        sub->add_flag("--timestamp", config.timestamp, "Add a generation timestamp to output metadata");
        sub->add_option("--tie-policy", tie_policy, "Global rank ties: mean or min");
    };
    auto corpus_flags = [&](CLI::App* sub) {
        sub->add_option("--group", config.groups, "Group label (repeatable)");
        sub->add_option("--id-column", id_column);
        sub->add_option("--citations-column", citations_column);
        sub->add_option("--group-columns", group_columns, "Comma-separated group columns");
        sub->add_option("--delimiter", delimiter);
        sub->add_option("--min-top1-r3", config.r3_min_top1, "P_top1% below this makes R3 not calculable");
    };

    auto* indicators = app.add_subcommand("indicators", "P and P_top x% per group, diagnostic ratios (CSV/JSON)");
    common(indicators);
    corpus_flags(indicators);
    indicators->add_option("--percentiles", percentiles, "Comma-separated levels, default 50,10,5,1");
    indicators->add_flag("--strict-ties", config.strict_ties, "Count every paper at the threshold fully");

    auto* doublerank = app.add_subcommand("doublerank", "Double-rank series, power-law reference, upper-tail verdict");
    common(doublerank);
    corpus_flags(doublerank);
    doublerank->add_option("--anchors", anchors, "P:top10 or top10:top1");
    doublerank->add_option("--window", config.window, "Top fraction examined (default 0.02)");
    doublerank->add_option("--tolerance", config.tolerance, "Mean log-residual tolerance");

    auto* histogram = app.add_subcommand("histogram", "Log-binned citation histogram with optional lognormal model");
    common(histogram);
    corpus_flags(histogram);
    histogram->add_option("--reference-group", config.reference_group, "Scale onto this group's histogram");
    histogram->add_option("--anchor-bin", config.anchor_bin, "Bin label used for scaling");
    histogram->add_flag("--fit", config.fit, "Fit a lognormal and report lower-tail excess");
    histogram->add_option("--model-mu", config.model_mu);
    histogram->add_option("--model-sigma", config.model_sigma);

    auto* classify_cmd = app.add_subcommand("classify", "Type A/B/C classification of institutions");
    common(classify_cmd);
    classify_cmd->add_option("--stability", config.stability, "Stability threshold (default 0.15)");
    classify_cmd->add_option("--denominator", denominator, "Spread denominator: min, max or mean");
    classify_cmd->add_option("--min-top1", config.min_top1, "Eligibility: minimum P_top1% in every period");
    classify_cmd->add_option("--periods", periods, "Comma-separated required periods");
    classify_cmd->add_option("--field", config.fields, "Restrict to field (repeatable)");
    classify_cmd->add_flag("--ratios", config.ratios_input, "Input holds averaged R1,R2,R3 columns");

    auto* summary = app.add_subcommand("summary", "Per-country Type counts from assessments");
    common(summary);

    auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus, optionally with an injected deviation");
    common(synth);
    synth->add_option("--global-size", config.synth.global_size, "G");
    synth->add_option("--group-size", config.synth.group_size, "Target P");
    synth->add_option("--alpha", config.synth.alpha, "Double-rank exponent");
    synth->add_option("--mu", config.synth.lognormal.mu);
    synth->add_option("--sigma", config.synth.lognormal.sigma);
    synth->add_option("--group", config.synth.group, "Group label");
    synth->add_option("--mu-shift", config.mu_shift, "Use the statistical generator with this log-space shift");
    synth->add_option("--inject", config.inject, "none, inflate, deflate or shift");
    synth->add_option("--extra", config.extra, "Inflation: papers added (default P)");
    synth->add_option("--remove-fraction", config.remove_fraction, "Deflation: share removed below the median");
    synth->add_option("--top-m", config.top_m, "Shift: papers affected");
    synth->add_option("--factor", config.factor, "Shift: citation multiplier");
    synth->add_flag("--group-only", config.group_only, "Inflation leaves the global pool unchanged");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsage;
    }

    try {
        for (auto [sub, cmd] : {std::pair{indicators, Command::indicators}, {doublerank, Command::doublerank},
                                {histogram, Command::histogram}, {classify_cmd, Command::classify},
                                {summary, Command::summary}, {synth, Command::synth}}) {
            if (sub->parsed()) config.command = cmd;
        }
        config.format = format == "json" ? Format::json : Format::csv;
        config.tie_policy = parse_rank_policy(tie_policy);
        config.anchors = parse_anchor_pair(anchors);
        config.denominator = parse_spread_denominator(denominator);
        apply_schema_file(config);
        if (id_column) config.schema.id_column = *id_column;
        if (citations_column) config.schema.citations_column = *citations_column;
        if (group_columns) config.schema.group_columns = split_list(*group_columns);
        if (delimiter) {
            if (delimiter->size() != 1) throw DomainError("--delimiter must be a single character");
            config.schema.delimiter = (*delimiter)[0];
        }
        if (!percentiles.empty()) {
            config.percentiles.clear();
            for (const auto& p : split_list(percentiles)) {
                try {
                    config.percentiles.push_back(std::stod(p));
                } catch (const std::exception&) {
                    throw DomainError("percentile level '" + p + "' is not a number");
                }
            }
        }
        if (!periods.empty()) config.periods = split_list(periods);

        const auto result = run(config);
        for (const auto& w : result.warnings) err << "warning: " << w << '\n';
        for (const auto& f : result.files) out << f.string() << '\n';
        return kOk;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e);
    }
}

} // namespace citerank::cli
