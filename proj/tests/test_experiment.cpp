#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "kljn/errors.hpp"
#include "kljn/experiment.hpp"

using namespace kljn;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

ExperimentSpec small_source_spec(double m, std::size_t runs) {
    ExperimentSpec spec;
    spec.attack = AttackId::StatSource;
    spec.m = m;
    spec.runs = runs;
    spec.master_seed = 5;
    return spec;
}

} // namespace

TEST_CASE("spec text form round-trips every field") {
    ExperimentSpec spec;
    spec.attack = AttackId::Nonlinearity;
    spec.scheme = Scheme::FCK1;
    spec.config.r_h = 12345.5;
    spec.config.r_l = 678.25;
    spec.config.t_eff = 3.25e17;
    spec.config.bandwidth = 750.0;
    spec.config.samples_per_bep = 2000;
    spec.r_ha = 1.0;
    spec.r_la = 2.0;
    spec.r_hb = 3.0;
    spec.r_lb = 4.0;
    spec.u2_la = 0.125;
    spec.m = 1.5;
    spec.delta_bits = 3;
    spec.b = 6e-3;
    spec.c = -5e-5;
    spec.gamma = 17;
    spec.oversample_factor = 8;
    spec.unilateral = true;
    spec.runs = 321;
    spec.ensemble_count = 7;
    spec.master_seed = 99;
    spec.output_path = "out.json";
    spec.output_format = OutputFormat::Json;
    spec.m_list = {0.0, 0.5, 10.0};
    spec.t_eff_list = {1e14, 1e18};
    spec.gamma_list = {10, 1000};

    const std::string text = serialize_spec(spec);
    const ExperimentSpec back = parse_spec(text);
    CHECK(serialize_spec(back) == text);
    CHECK(back.attack == spec.attack);
    CHECK(back.scheme == spec.scheme);
    CHECK(back.config.t_eff == spec.config.t_eff);
    CHECK(back.u2_la == spec.u2_la);
    CHECK(back.m_list == spec.m_list);
    CHECK(back.t_eff_list == spec.t_eff_list);
    CHECK(back.gamma_list == spec.gamma_list);
    CHECK(back.unilateral == spec.unilateral);
    CHECK(back.output_path == spec.output_path);
}

TEST_CASE("spec text form: comments tolerated, unknown keys rejected") {
    const ExperimentSpec spec = parse_spec(
        "# an experiment\n"
        "attack=det-ohm\n"
        "\n"
        "  # indented comment\n"
        "runs=50\n");
    CHECK(spec.attack == AttackId::DetOhm);
    CHECK(spec.runs == 50);
    CHECK_THROWS_AS(parse_spec("attack=det-ohm\nbogus=3\n"),
                    invalid_argument_error);
    CHECK_THROWS_AS(parse_spec("attack=no-such-attack\n"),
                    invalid_argument_error);
}

TEST_CASE("spec validation rules") {
    ExperimentSpec spec;
    spec.runs = 0;
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    spec = ExperimentSpec{};
    spec.attack = AttackId::Nonlinearity;
    spec.gamma = 0;
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);
    spec.gamma = spec.config.samples_per_bep + 1;
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    spec = ExperimentSpec{};
    spec.attack = AttackId::DetOhm;
    spec.m_list = {0.0, 1.0};
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    spec = ExperimentSpec{};
    spec.attack = AttackId::DetOhm;
    spec.scheme = Scheme::VMG;
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    spec = ExperimentSpec{};
    spec.attack = AttackId::StatSource;
    spec.t_eff_list = {1e18};
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    spec = ExperimentSpec{};
    spec.ensemble_count = 0;
    CHECK_THROWS_AS(validate(spec), invalid_argument_error);

    CHECK_NOTHROW(validate(ExperimentSpec{}));
}

TEST_CASE("reports are byte-identical across worker counts") {
    const ExperimentSpec spec = small_source_spec(1.0, 60);

    setenv("KLJN_LAB_THREADS", "1", 1);
    const MonteCarloReport rep1 = run_experiment(spec);
    const std::string csv1 = report_to_csv(rep1);
    const std::string json1 = report_to_json(rep1);

    setenv("KLJN_LAB_THREADS", "4", 1);
    const MonteCarloReport rep4 = run_experiment(spec);
    CHECK(report_to_csv(rep4) == csv1);
    CHECK(report_to_json(rep4) == json1);

    const MonteCarloReport again = run_experiment(spec);
    CHECK(report_to_csv(again) == csv1);
    unsetenv("KLJN_LAB_THREADS");
}

TEST_CASE("CSV tables parse back to the same rows") {
    const MonteCarloReport rep = run_experiment(small_source_spec(0.5, 40));
    REQUIRE(!rep.rows.empty());
    REQUIRE(!rep.per_run.empty());

    const std::vector<ReportRow> rows = parse_report_csv(report_to_csv(rep));
    REQUIRE(rows.size() == rep.rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        // Parsed rows gain the attack and scheme columns up front.
        REQUIRE(rows[i].params.size() == rep.rows[i].params.size() + 2);
        CHECK(rows[i].params[0] ==
              std::make_pair(std::string("attack"),
                             to_string(rep.spec.attack)));
        CHECK(rows[i].params[1] ==
              std::make_pair(std::string("scheme"),
                             to_string(rep.spec.scheme)));
        for (std::size_t k = 0; k < rep.rows[i].params.size(); ++k)
            CHECK(rows[i].params[k + 2] == rep.rows[i].params[k]);
        CHECK(rows[i].runs == rep.rows[i].runs);
        CHECK(rows[i].p == rep.rows[i].p);       // shortest-round-trip floats
        CHECK(rows[i].sigma == rep.rows[i].sigma);
    }

    const std::vector<RunRow> runs = parse_runs_csv(runs_to_csv(rep));
    REQUIRE(runs.size() == rep.per_run.size());
    for (std::size_t i = 0; i < runs.size(); ++i) {
        CHECK(runs[i].run == rep.per_run[i].run);
        CHECK(runs[i].truth == rep.per_run[i].truth);
        CHECK(runs[i].guess == rep.per_run[i].guess);
        CHECK(runs[i].correct == rep.per_run[i].correct);
        CHECK(runs[i].decision_step == rep.per_run[i].decision_step);
    }
}

TEST_CASE("write_report produces sibling run detail for CSV, one JSON file") {
    MonteCarloReport rep = run_experiment(small_source_spec(0.5, 20));

    rep.spec.output_format = OutputFormat::Csv;
    const std::string csv_path = "/tmp/kljn_lab_test_report.csv";
    const std::vector<std::string> csv_files = write_report(rep, csv_path);
    REQUIRE(csv_files.size() == 2);
    CHECK(csv_files[0] == csv_path);
    CHECK(csv_files[1] == "/tmp/kljn_lab_test_report.runs.csv");
    CHECK(slurp(csv_files[0]) == report_to_csv(rep));
    CHECK(slurp(csv_files[1]) == runs_to_csv(rep));

    rep.spec.output_format = OutputFormat::Json;
    const std::string json_path = "/tmp/kljn_lab_test_report.json";
    const std::vector<std::string> json_files = write_report(rep, json_path);
    REQUIRE(json_files.size() == 1);
    CHECK(slurp(json_files[0]) == report_to_json(rep));

    CHECK_THROWS_AS(write_report(rep, ""), invalid_argument_error);
    for (const std::string& p : {csv_files[0], csv_files[1], json_files[0]})
        std::remove(p.c_str());
}

TEST_CASE("pristine source copies read the bit every time") {
    const MonteCarloReport rep = run_experiment(small_source_spec(0.0, 100));
    REQUIRE(rep.rows.size() == 1);
    CHECK(rep.rows[0].p == 1.0);
    CHECK(rep.rows[0].sigma == 0.0);
    CHECK(rep.rows[0].runs == 100);
    CHECK(rep.per_run.size() == 100);
    for (const RunRow& r : rep.per_run) {
        CHECK(r.correct == 1);
        CHECK((r.truth == "HL" || r.truth == "LH"));
        CHECK(r.guess == r.truth);
    }
}

TEST_CASE("nonlinearity sweep: one row per temperature-window pair") {
    ExperimentSpec spec;
    spec.attack = AttackId::Nonlinearity;
    spec.b = 6e-3;
    spec.runs = 50;
    spec.master_seed = 9;
    spec.t_eff_list = {1e14, 1e18};
    spec.gamma_list = {10, 1000};
    const MonteCarloReport rep = run_experiment(spec);
    REQUIRE(rep.rows.size() == 4);

    auto param = [&](const ReportRow& row, const std::string& key) {
        for (const auto& kv : row.params)
            if (kv.first == key) return kv.second;
        FAIL("missing param ", key);
        return std::string();
    };
    CHECK(param(rep.rows[0], "teff") == param(rep.rows[1], "teff"));
    CHECK(param(rep.rows[2], "teff") == param(rep.rows[3], "teff"));
    CHECK(param(rep.rows[0], "teff") != param(rep.rows[2], "teff"));
    CHECK(param(rep.rows[0], "gamma") == "10");
    CHECK(param(rep.rows[1], "gamma") == "1000");
    for (const ReportRow& row : rep.rows) {
        CHECK(row.p >= 0.0);
        CHECK(row.p <= 1.0);
        CHECK(row.sigma >= 0.0);
        CHECK(row.runs == 50);
        CHECK(row.diagnostics.count("u_w_eff") == 1);
        CHECK(row.diagnostics.count("i_w_eff") == 1);
    }
    // The hot wire with the full window leaks; the cold one does not.
    CHECK(rep.rows[3].p > 0.9);
    CHECK(rep.rows[1].p < 0.7);
}
