#pragma once
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <string>

#include "json.hpp"

#include "cubespec/census.hpp"
#include "cubespec/lo.hpp"
#include "cubespec/montecarlo.hpp"
#include "cubespec/structure.hpp"

// Report serialization.  Every payload is built as a flat ordered JSON
// object (or an array of them); the CSV emission is derived from the same
// object with the same number formatting, so the two formats always carry
// identical values.

namespace cubespec {

using ojson = nlohmann::ordered_json;

inline std::string fmt_fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

// Rounds through the fixed-decimal text form, so stored JSON numbers print
// exactly like their CSV cells.
inline double round_fixed(double v, int decimals) {
    return std::strtod(fmt_fixed(v, decimals).c_str(), nullptr);
}

inline std::string csv_escape(const std::string& s) {
    bool needs = s.find_first_of(",\"\n") != std::string::npos;
    if (!needs)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

inline std::string csv_cell(const ojson& v) {
    if (v.is_string())
        return csv_escape(v.get<std::string>());
    return v.dump();
}

// CSV of a flat object (one header line + one row), of an array of flat
// objects (header + one row each), or of {"...meta...", "rows": [...]} where
// meta fields become leading comment lines.
inline std::string to_csv(const ojson& payload) {
    auto row_block = [](const ojson& rows) {
        std::string out;
        if (rows.empty())
            return out;
        bool first = true;
        for (auto it = rows.front().begin(); it != rows.front().end(); ++it) {
            if (!first)
                out += ',';
            out += csv_escape(it.key());
            first = false;
        }
        out += '\n';
        for (const auto& r : rows) {
            first = true;
            for (auto it = r.begin(); it != r.end(); ++it) {
                if (!first)
                    out += ',';
                out += csv_cell(it.value());
                first = false;
            }
            out += '\n';
        }
        return out;
    };
    if (payload.is_array())
        return row_block(payload);
    if (payload.contains("rows") && payload["rows"].is_array()) {
        std::string out;
        for (auto it = payload.begin(); it != payload.end(); ++it) {
            if (it.key() == "rows")
                continue;
            out += "# " + it.key() + " = " + csv_cell(it.value()) + "\n";
        }
        out += row_block(payload["rows"]);
        return out;
    }
    ojson arr = ojson::array({payload});
    return row_block(arr);
}

inline std::string emit(const ojson& payload, const std::string& format) {
    if (format == "json")
        return payload.dump(2) + "\n";
    return to_csv(payload);
}

// ------------------------------------------------------------- builders ----

inline ojson census_json(const CensusReport& r) {
    ojson j;
    j["d"] = r.d;
    j["mode"] = r.mode == CensusReport::Mode::full_enumeration ? "full" : "sorted-columns";
    j["total"] = r.total;
    j["singular"] = r.singular;
    j["ps"] = round_fixed(r.ps, 7);
    j["ps_num"] = r.ps_exact.get_num().get_str();
    j["ps_den"] = r.ps_exact.get_den().get_str();
    for (int k = 0; k <= r.d; ++k)
        j["rank_" + std::to_string(k)] = r.by_rank[static_cast<size_t>(k)];
    j["class_R"] = r.by_class.r;
    j["class_S1"] = r.by_class.s1;
    j["class_S2"] = r.by_class.s2;
    j["class_S3"] = r.by_class.s3;
    j["class_S4"] = r.by_class.s4;
    j["rowfam_R"] = r.by_class_rows.r;
    j["rowfam_S1"] = r.by_class_rows.s1;
    j["rowfam_S2"] = r.by_class_rows.s2;
    j["rowfam_S3"] = r.by_class_rows.s3;
    j["rowfam_S4"] = r.by_class_rows.s4;
    j["g_count"] = r.e.g_count;
    j["sum_v"] = r.e.sum_v;
    j["e_num"] = r.e.e.get_num().get_str();
    j["e_den"] = r.e.e.get_den().get_str();
    j["e"] = r.e.e.get_d();
    j["workers"] = r.workers;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline ojson mc_json(const McEstimate& r) {
    ojson j;
    j["d"] = r.d;
    j["samples"] = r.samples;
    j["hits"] = r.hits;
    j["estimate"] = r.estimate;
    j["p"] = round_fixed(r.estimate, 7);
    j["ci_low"] = r.ci.low;
    j["ci_high"] = r.ci.high;
    j["seed"] = r.seed;
    j["workers"] = r.workers;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline ojson exact_e_json(const ExactE& r) {
    ojson j;
    j["d"] = r.d;
    j["g_count"] = r.g_count;
    j["sum_v"] = r.sum_v;
    j["e_num"] = r.e.get_num().get_str();
    j["e_den"] = r.e.get_den().get_str();
    j["e"] = r.e.get_d();
    return j;
}

inline ojson sample_e_json(const EEstimate& r) {
    ojson j;
    j["d"] = r.d;
    j["attempts"] = r.attempts;
    j["accepted"] = r.accepted;
    j["rejected"] = r.rejected;
    j["rejection_rate"] = static_cast<double>(r.rejected) / static_cast<double>(r.attempts);
    j["mean_v"] = r.mean_v;
    j["ci_low"] = r.ci_low;
    j["ci_high"] = r.ci_high;
    j["seed"] = r.seed;
    j["workers"] = r.workers;
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline ojson classify_json(int d, const MatrixClass& c) {
    ojson j;
    j["d"] = d;
    j["label"] = label_name(c.label);
    j["rank"] = c.rank;
    j["strong_rank"] = c.strong_rank;
    if (c.kernel_support)
        j["kernel_support"] = *c.kernel_support;
    else
        j["kernel_support"] = nullptr;
    j["n_threshold"] = d >= 2 ? n_threshold(d).n_d : 1;
    return j;
}

inline ojson span_json(const SpanSummary& s) {
    ojson j;
    j["d"] = s.d;
    std::string normal;
    for (size_t i = 0; i < s.normal.size(); ++i) {
        if (i)
            normal += ' ';
        normal += s.normal[i].get_str();
    }
    j["normal"] = normal;
    j["point_count"] = s.point_count;
    j["method"] = s.method == SpanSummary::Method::brute_force ? "brute-force" : "meet-in-middle";
    return j;
}

inline ojson theorem1_json(const Theorem1Report& r) {
    ojson j;
    j["d"] = r.d;
    j["mode"] = r.exact ? "exact" : "sampled";
    j["ps"] = r.lhs;
    j["e"] = r.e_value;
    j["rhs"] = r.rhs;
    j["ratio"] = round_fixed(r.ratio, 6);
    if (r.exact) {
        j["ps_num"] = r.lhs_exact.get_num().get_str();
        j["ps_den"] = r.lhs_exact.get_den().get_str();
        j["e_num"] = r.e_exact.get_num().get_str();
        j["e_den"] = r.e_exact.get_den().get_str();
        j["rhs_num"] = r.rhs_exact.get_num().get_str();
        j["rhs_den"] = r.rhs_exact.get_den().get_str();
    } else {
        j["samples"] = r.samples;
        j["seed"] = r.seed;
    }
    j["wall_seconds"] = r.wall_seconds;
    return j;
}

inline ojson table_json(const std::vector<TableRow>& rows) {
    ojson arr = ojson::array();
    for (const auto& r : rows) {
        ojson j;
        j["d"] = r.d;
        j["mode"] = r.exact ? "exact" : "mc";
        j["trials"] = r.trials;
        j["singular"] = r.singular;
        j["p"] = round_fixed(r.p, 7);
        j["curve"] = round_fixed(r.curve, 6);
        j["ratio"] = round_fixed(r.ratio, 3);
        j["ci_low"] = round_fixed(r.ci.low, 7);
        j["ci_high"] = round_fixed(r.ci.high, 7);
        arr.push_back(j);
    }
    return arr;
}

inline ojson lemma_json(const LemmaSumResult& r) {
    ojson j;
    j["d"] = r.d;
    j["k_range"] = r.empty ? "empty" : "3.." + std::to_string(r.k_hi);
    j["method"] = r.exact ? "exact-rational" : "log-domain";
    j["log2_value"] = r.log2_value;
    j["log2_bound"] = -static_cast<double>(r.d);
    j["holds"] = r.holds;
    j["largest_term_k"] = r.largest_term_k;
    j["largest_term_log2"] = r.largest_term_log2;
    j["per_term_bound_log2"] = -static_cast<double>(r.d) - std::log2(static_cast<double>(r.d));
    j["per_term_all_hold"] = r.per_term_all_hold;
    j["per_term_first_violation_k"] = r.first_violation_k;
    j["per_term_violations"] = r.violation_count;
    return j;
}

inline ojson lemma_scan_json(const LemmaScan& s) {
    ojson j;
    j["from"] = s.from;
    j["to"] = s.to;
    j["smallest_trivial_hold"] = s.smallest_trivial_hold ? ojson(*s.smallest_trivial_hold) : ojson(nullptr);
    j["smallest_nonempty_hold"] = s.smallest_nonempty_hold ? ojson(*s.smallest_nonempty_hold) : ojson(nullptr);
    j["estimated_crossover"] = s.estimate_found ? ojson(s.estimated_crossover) : ojson(nullptr);
    ojson rows = ojson::array();
    for (const auto& r : s.rows) {
        ojson row;
        row["d"] = r.d;
        row["empty"] = r.empty;
        row["holds"] = r.holds;
        row["log2_value"] = r.log2_value;
        row["log2_gap"] = r.log2_gap;
        rows.push_back(row);
    }
    j["rows"] = rows;
    return j;
}

inline ojson identity_json(const IdentityReport& r) {
    ojson j;
    j["d"] = r.d;
    j["class_R"] = r.census.by_class.r;
    j["class_S1"] = r.census.by_class.s1;
    j["class_S2"] = r.census.by_class.s2;
    j["class_S3"] = r.census.by_class.s3;
    j["class_S4"] = r.census.by_class.s4;
    j["g_count"] = r.census.e.g_count;
    j["e_num"] = r.census.e.e.get_num().get_str();
    j["e_den"] = r.census.e.e.get_den().get_str();
    j["r_predicted_num"] = r.r_predicted.get_num().get_str();
    j["r_predicted_den"] = r.r_predicted.get_den().get_str();
    j["s1_predicted_num"] = r.s1_predicted.get_num().get_str();
    j["s1_predicted_den"] = r.s1_predicted.get_den().get_str();
    j["identity_r_exact"] = r.identity_r_exact;
    j["identity_s1_exact"] = r.identity_s1_exact;
    j["ratio_s2"] = r.ratio_s2;
    j["ratio_s1_vs_s2"] = r.ratio_s1_vs_s2;
    j["ratio_s3"] = r.ratio_s3;
    j["ratio_s4"] = r.ratio_s4;
    return j;
}

// -------------------------------------------------------------- ledger -----

inline std::string iso_utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

// Appends one JSON object per run: what was asked, what came out, how long
// it took.  Always JSON lines, independent of the report format.
inline void append_run_record(const std::string& path, const std::string& command, const ojson& parameters,
                              const ojson& result, double wall_seconds) {
    ojson rec;
    rec["schema_version"] = 1;
    rec["timestamp"] = iso_utc_now();
    rec["command"] = command;
    rec["parameters"] = parameters;
    rec["result"] = result;
    rec["wall_seconds"] = wall_seconds;
    std::ofstream out(path, std::ios::app);
    if (!out)
        throw InputError("cannot open ledger file: " + path);
    out << rec.dump() << '\n';
}

} // namespace cubespec
