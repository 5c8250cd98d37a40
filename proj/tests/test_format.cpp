#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "cubespec/format.hpp"

using namespace cubespec;

TEST_CASE("fixed-decimal rounding drives both output formats", "[format]") {
    CHECK(fmt_fixed(0.66015625, 7) == "0.6601562");
    CHECK(fmt_fixed(0.5, 7) == "0.5000000");
    CHECK(round_fixed(0.66015625, 7) == 0.6601562);
    CHECK(ojson(round_fixed(0.66015625, 7)).dump() == "0.6601562");
    CHECK(ojson(round_fixed(0.625, 7)).dump() == "0.625");
}

TEST_CASE("csv escaping", "[format]") {
    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a,b") == "\"a,b\"");
    CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("csv layouts: flat object, array, rows with metadata", "[format]") {
    ojson flat;
    flat["a"] = 1;
    flat["b"] = "x,y";
    CHECK(to_csv(flat) == "a,b\n1,\"x,y\"\n");

    ojson arr = ojson::array();
    arr.push_back({{"d", 1}, {"p", 0.5}});
    arr.push_back({{"d", 2}, {"p", 0.625}});
    CHECK(to_csv(arr) == "d,p\n1,0.5\n2,0.625\n");

    ojson meta;
    meta["from"] = 3;
    meta["rows"] = arr;
    std::string csv = to_csv(meta);
    CHECK(csv.find("# from = 3\n") == 0);
    CHECK(csv.find("d,p\n") != std::string::npos);
}

TEST_CASE("json and csv emission carry identical numbers", "[format]") {
    McEstimate est;
    est.d = 4;
    est.samples = 1000;
    est.hits = 655;
    est.estimate = 0.655;
    est.ci = wilson_interval(655, 1000);
    est.seed = 42;
    est.workers = 1;
    est.wall_seconds = 0.001;
    ojson j = mc_json(est);
    std::string json_text = emit(j, "json");
    std::string csv_text = emit(j, "csv");

    // the CSV cell for "p" must be exactly the JSON literal
    std::string p_literal = j["p"].dump();
    CHECK(json_text.find("\"p\": " + p_literal) != std::string::npos);
    CHECK(csv_text.find(p_literal) != std::string::npos);
}

TEST_CASE("census payload has the frozen field set", "[format]") {
    CensusReport c = enumerate_full(2);
    ojson j = census_json(c);
    CHECK(j["d"] == 2);
    CHECK(j["mode"] == "full");
    CHECK(j["total"] == 16);
    CHECK(j["singular"] == 10);
    CHECK(j["ps"] == 0.625);
    CHECK(j["ps_num"] == "5");
    CHECK(j["ps_den"] == "8");
    CHECK(j["rank_0"] == 1);
    CHECK(j["rank_1"] == 9);
    CHECK(j["rank_2"] == 6);
    CHECK(j["class_R"] == 6);
    CHECK(j["class_S1"] == 3);
    CHECK(j["class_S3"] == 7);
    CHECK(j["rowfam_S1"] == 3);
    CHECK(j["g_count"] == 3);
    CHECK(j["e_num"] == "2");
    CHECK(j["e_den"] == "1");
}

TEST_CASE("classify payload reports a nullable kernel support", "[format]") {
    BinaryMatrix m = BinaryMatrix::identity(3);
    ojson full_rank = classify_json(3, classify(m));
    CHECK(full_rank["label"] == "R");
    CHECK(full_rank["kernel_support"].is_null());

    BinaryMatrix s1 = BinaryMatrix::from_columns(3, std::vector<std::uint64_t>{0b001, 0b001, 0b010});
    ojson dup = classify_json(3, classify(s1));
    CHECK(dup["label"] == "S1");
    CHECK(dup["kernel_support"] == 2);
    CHECK(dup["n_threshold"] == 1);
}

TEST_CASE("run records append as json lines", "[format]") {
    std::string path = "ledger_test.jsonl";
    std::remove(path.c_str());
    append_run_record(path, "census", ojson{{"dim", 2}}, ojson{{"singular", 10}}, 0.25);
    append_run_record(path, "census", ojson{{"dim", 3}}, ojson{{"singular", 338}}, 0.5);

    std::ifstream in(path);
    REQUIRE(in.good());
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
        ojson rec = ojson::parse(line);
        CHECK(rec["schema_version"] == 1);
        CHECK(rec["command"] == "census");
        CHECK(rec.contains("timestamp"));
        CHECK(rec.contains("parameters"));
        CHECK(rec.contains("result"));
        CHECK(rec.contains("wall_seconds"));
        ++n;
    }
    CHECK(n == 2);
    std::remove(path.c_str());

    CHECK_THROWS_AS(append_run_record("/nonexistent-dir/x.jsonl", "census", ojson{}, ojson{}, 0.0),
                    InputError);
}

TEST_CASE("span and lemma payloads", "[format]") {
    BinaryMatrix g = BinaryMatrix::from_columns(3, std::vector<std::uint64_t>{0b011, 0b101});
    ojson s = span_json(v_of_set(g));
    CHECK(s["normal"] == "-1 1 1");
    CHECK(s["point_count"] == 3);

    ojson l = lemma_json(lemma_sum(10));
    CHECK(l["d"] == 10);
    CHECK(l["k_range"] == "empty");
    CHECK(l["holds"] == true);

    ojson l29 = lemma_json(lemma_sum(29));
    CHECK(l29["k_range"] == "3..3");
    CHECK(l29["holds"] == false);
}

TEST_CASE("kernel support equivalence summary", "[format]") {
    BinaryMatrix m = BinaryMatrix::from_columns(3, std::vector<std::uint64_t>{0b001, 0b010, 0b011});
    KernelSupportCheck chk = kernel_support_check(m);
    CHECK(chk.iff_holds);
    CHECK(chk.support == 3);
    CHECK(chk.strong_rank == 2);
    CHECK(chk.support_matches);
    CHECK(chk.deletion_independent == std::vector<bool>{true, true, true});
}
