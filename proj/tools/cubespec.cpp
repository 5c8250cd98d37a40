#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "cubespec/format.hpp"
#include "cubespec/hyperplane.hpp"
#include "cubespec/lo.hpp"
#include "cubespec/montecarlo.hpp"
#include "cubespec/parallel.hpp"

using namespace cubespec;

namespace {

struct Global {
    std::string format = "csv";
    std::string output;
    std::string ledger;
    int workers = 0; // 0: CUBESPEC_WORKERS or hardware
};

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void deliver(const Global& g, const std::string& command, const ojson& parameters, const ojson& payload,
             double wall_seconds) {
    std::string text = emit(payload, g.format);
    if (!g.output.empty()) {
        std::ofstream out(g.output);
        if (!out)
            throw InputError("cannot open output file: " + g.output);
        out << text;
    } else {
        std::cout << text;
    }
    if (!g.ledger.empty())
        append_run_record(g.ledger, command, parameters, payload, wall_seconds);
}

BinaryMatrix read_matrix(const std::string& file) {
    if (file.empty())
        return parse_matrix(std::cin);
    std::ifstream in(file);
    if (!in)
        throw InputError("cannot open matrix file: " + file);
    return parse_matrix(in);
}

IntegerVector parse_int_list(const std::string& text) {
    std::string cleaned = text;
    for (char& c : cleaned)
        if (c == ',')
            c = ' ';
    std::vector<mpz_class> vals;
    std::istringstream in(cleaned);
    std::string tok;
    while (in >> tok) {
        try {
            vals.emplace_back(tok);
        } catch (const std::invalid_argument&) {
            throw InputError("not an integer: '" + tok + "'");
        }
    }
    if (vals.empty())
        throw InputError("empty integer list");
    IntegerVector v(vals.size());
    for (size_t i = 0; i < vals.size(); ++i)
        v[i] = vals[i];
    return v;
}

int fail(const Global& g, const char* type, const std::exception& e, int code) {
    if (g.format == "json") {
        ojson err;
        err["error"] = ojson{{"type", type}, {"message", e.what()}};
        std::cout << err.dump(2) << "\n";
    }
    std::cerr << "error (" << type << "): " << e.what() << "\n";
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"0/1 matrix toolkit: singularity censuses and sampling, hyperplane point counts,\n"
                 "dependency-structure classification, and subset-sum concentration bounds"};
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
    app.add_option("--output", g.output, "write the report to this file instead of stdout");
    app.add_option("--ledger", g.ledger, "append a JSON-lines run record to this file");
    app.add_option("--workers", g.workers, "worker threads (0: CUBESPEC_WORKERS or hardware)")
        ->capture_default_str();

    // census
    auto* census = app.add_subcommand("census", "exact census of all d x d 0/1 matrices");
    int census_dim = 0;
    bool census_sym = false;
    census->add_option("--dim", census_dim, "matrix dimension")->required();
    census->add_flag("--symmetry", census_sym, "enumerate sorted column multisets with weights");
    census->callback([&] {
        int w = default_workers(g.workers);
        CensusReport r = census_sym ? enumerate_symmetric(census_dim, w) : enumerate_full(census_dim, w);
        deliver(g, "census", ojson{{"dim", census_dim}, {"symmetry", census_sym}, {"workers", w}},
                census_json(r), r.wall_seconds);
    });

    // sample-ps
    auto* sample_ps = app.add_subcommand("sample-ps", "Monte Carlo estimate of the singularity probability");
    int sp_dim = 0;
    std::uint64_t sp_samples = 1000000, sp_seed = 1;
    sample_ps->add_option("--dim", sp_dim, "matrix dimension")->required();
    sample_ps->add_option("--samples", sp_samples, "number of sampled matrices")->capture_default_str();
    sample_ps->add_option("--seed", sp_seed, "RNG seed")->capture_default_str();
    sample_ps->callback([&] {
        int w = default_workers(g.workers);
        McEstimate r = estimate_ps(sp_dim, sp_samples, sp_seed, w);
        deliver(g, "sample-ps",
                ojson{{"dim", sp_dim}, {"samples", sp_samples}, {"seed", sp_seed}, {"workers", w}},
                mc_json(r), r.wall_seconds);
    });

    // exact-e
    auto* exacte = app.add_subcommand("exact-e", "exact expected 0/1-point count of a spanned hyperplane");
    int ee_dim = 0;
    exacte->add_option("--dim", ee_dim, "ambient dimension")->required();
    exacte->callback([&] {
        int w = default_workers(g.workers);
        Timer t;
        ExactE r = exact_E(ee_dim, w);
        deliver(g, "exact-e", ojson{{"dim", ee_dim}, {"workers", w}}, exact_e_json(r), t.seconds());
    });

    // sample-e
    auto* samplee = app.add_subcommand("sample-e", "sampled expected 0/1-point count of a spanned hyperplane");
    int se_dim = 0;
    std::uint64_t se_samples = 100000, se_seed = 1;
    samplee->add_option("--dim", se_dim, "ambient dimension")->required();
    samplee->add_option("--samples", se_samples, "number of sampled generating sets")->capture_default_str();
    samplee->add_option("--seed", se_seed, "RNG seed")->capture_default_str();
    samplee->callback([&] {
        int w = default_workers(g.workers);
        EEstimate r = sample_E(se_dim, se_samples, se_seed, w);
        deliver(g, "sample-e",
                ojson{{"dim", se_dim}, {"samples", se_samples}, {"seed", se_seed}, {"workers", w}},
                sample_e_json(r), r.wall_seconds);
    });

    // classify
    auto* classify_cmd = app.add_subcommand("classify", "rank, strong rank, and structural class of a matrix");
    std::string classify_file;
    classify_cmd->add_option("--file", classify_file, "matrix file (default: stdin, rows of 0/1 digits)");
    classify_cmd->callback([&] {
        Timer t;
        BinaryMatrix m = read_matrix(classify_file);
        MatrixClass c = classify(m);
        deliver(g, "classify", ojson{{"rows", m.rows()}, {"cols", m.cols()}}, classify_json(m.rows(), c),
                t.seconds());
    });

    // span-count
    auto* span = app.add_subcommand("span-count", "0/1 points on a hyperplane: normal vector or spanning set");
    std::string span_normal, span_file;
    span->add_option("--normal", span_normal, "normal vector, e.g. \"1 -1 0 2\"");
    span->add_option("--file", span_file, "d x (d-1) generating set (default: stdin when --normal absent)");
    span->callback([&] {
        Timer t;
        if (!span_normal.empty()) {
            IntegerVector a = parse_int_list(span_normal);
            SpanSummary s;
            s.d = static_cast<int>(a.size());
            s.point_count = count_points(a);
            s.method = a.size() <= 14 ? SpanSummary::Method::brute_force : SpanSummary::Method::meet_in_middle;
            s.normal = std::move(a);
            deliver(g, "span-count", ojson{{"normal", span_normal}}, span_json(s), t.seconds());
        } else {
            BinaryMatrix m = read_matrix(span_file);
            SpanSummary s = v_of_set(m);
            deliver(g, "span-count", ojson{{"rows", m.rows()}, {"cols", m.cols()}}, span_json(s), t.seconds());
        }
    });

    // lo-bound
    auto* lo = app.add_subcommand("lo-bound", "subset-sum concentration bounds, optionally for a vector");
    int lo_n = 0, lo_t = -1;
    std::string lo_vector;
    lo->add_option("--n", lo_n, "number of entries");
    lo->add_option("--t", lo_t, "number of nonzero entries (default: n)");
    lo->add_option("--vector", lo_vector, "integer entries, e.g. \"1 1 0 2\": also reports the attained peak");
    lo->callback([&] {
        Timer t;
        ojson j;
        if (!lo_vector.empty()) {
            IntegerVector a = parse_int_list(lo_vector);
            int n = static_cast<int>(a.size());
            int nz = 0;
            for (size_t i = 0; i < a.size(); ++i)
                nz += a[i] != 0;
            LevelMultiplicity peak = max_level_multiplicity(a);
            j["n"] = n;
            j["t"] = nz;
            j["peak_value"] = peak.value.get_str();
            j["peak_multiplicity"] = peak.multiplicity;
            if (nz >= 1) {
                mpz_class bound = lo_level_bound(n, nz);
                j["level_bound"] = bound.get_str();
                j["attained"] = mpz_class(peak.multiplicity) == bound;
            } else {
                j["level_bound"] = nullptr;
                j["attained"] = nullptr;
            }
            deliver(g, "lo-bound", ojson{{"vector", lo_vector}}, j, t.seconds());
        } else {
            if (lo_n < 1)
                throw InputError("lo-bound needs --n or --vector");
            int tt = lo_t < 0 ? lo_n : lo_t;
            j["n"] = lo_n;
            j["t"] = tt;
            j["interval_bound"] = lo_interval_bound(lo_n).get_str();
            j["level_bound"] = lo_level_bound(lo_n, tt).get_str();
            deliver(g, "lo-bound", ojson{{"n", lo_n}, {"t", tt}}, j, t.seconds());
        }
    });

    // lemma-sum
    auto* lemma = app.add_subcommand("lemma-sum", "dependency-count term sum versus the 2^-d target");
    int lemma_dim = 0;
    std::vector<int> lemma_scan_range;
    lemma->add_option("--dim", lemma_dim, "single dimension");
    lemma->add_option("--scan", lemma_scan_range, "dimension range FROM TO")->expected(2);
    lemma->callback([&] {
        Timer t;
        if (!lemma_scan_range.empty()) {
            LemmaScan s = lemma_scan(lemma_scan_range[0], lemma_scan_range[1]);
            deliver(g, "lemma-sum", ojson{{"from", lemma_scan_range[0]}, {"to", lemma_scan_range[1]}},
                    lemma_scan_json(s), t.seconds());
        } else {
            if (lemma_dim == 0)
                throw InputError("lemma-sum needs --dim or --scan");
            LemmaSumResult r = lemma_sum(lemma_dim);
            deliver(g, "lemma-sum", ojson{{"dim", lemma_dim}}, lemma_json(r), t.seconds());
        }
    });

    // theorem1
    auto* thm = app.add_subcommand("theorem1", "singularity probability versus its expectation form");
    int th_dim = 0;
    bool th_exact = false;
    std::uint64_t th_samples = 1000000, th_seed = 1;
    thm->add_option("--dim", th_dim, "matrix dimension")->required();
    thm->add_flag("--exact", th_exact, "census-backed exact comparison (d <= 5)");
    thm->add_option("--samples", th_samples, "samples per side in sampled mode")->capture_default_str();
    thm->add_option("--seed", th_seed, "RNG seed")->capture_default_str();
    thm->callback([&] {
        int w = default_workers(g.workers);
        Theorem1Report r =
            th_exact ? theorem1_exact(th_dim, w) : theorem1_sampled(th_dim, th_samples, th_seed, w);
        ojson params{{"dim", th_dim}, {"exact", th_exact}, {"workers", w}};
        if (!th_exact) {
            params["samples"] = th_samples;
            params["seed"] = th_seed;
        }
        deliver(g, "theorem1", params, theorem1_json(r), r.wall_seconds);
    });

    // table
    auto* table = app.add_subcommand("table", "singularity probability by dimension: exact then sampled");
    int tb_from = 1, tb_to = 10;
    std::uint64_t tb_samples = 1000000, tb_seed = 1;
    table->add_option("--from", tb_from, "first dimension")->capture_default_str();
    table->add_option("--to", tb_to, "last dimension")->capture_default_str();
    table->add_option("--samples", tb_samples, "samples per Monte Carlo row")->capture_default_str();
    table->add_option("--seed", tb_seed, "RNG seed")->capture_default_str();
    table->callback([&] {
        int w = default_workers(g.workers);
        Timer t;
        std::vector<TableRow> rows = reproduce_table(tb_from, tb_to, tb_samples, tb_seed, w);
        deliver(g, "table",
                ojson{{"from", tb_from}, {"to", tb_to}, {"samples", tb_samples}, {"seed", tb_seed}, {"workers", w}},
                table_json(rows), t.seconds());
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const InputError& e) {
        return fail(g, "InputError", e, 2);
    } catch (const DimensionTooLarge& e) {
        return fail(g, "DimensionTooLarge", e, 1);
    } catch (const TooExpensive& e) {
        return fail(g, "TooExpensive", e, 1);
    } catch (const RankDeficient& e) {
        return fail(g, "RankDeficient", e, 1);
    } catch (const NotIndependent& e) {
        return fail(g, "NotIndependent", e, 1);
    } catch (const std::exception& e) {
        return fail(g, "InternalError", e, 1);
    }
    return 0;
}
