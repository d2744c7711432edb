#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "tatereg/runners.hpp"

using namespace tatereg;

namespace {

const char* kTorsion = R"(kind hilbert-torsion
precision 40

[field]
p 5

[curve]
q 5

[params]
expected_shape 4 4 1
)";

} // namespace

TEST_CASE("scenario parsing: sections, keys, values") {
    Scenario s = Scenario::parse_text(kTorsion, "inline");
    CHECK(s.kind() == "hilbert-torsion");
    CHECK(s.get_long("field", "p") == 5);
    CHECK(s.precision() == 40);
    CHECK(s.get_longs("params", "expected_shape") ==
          std::vector<long>{4, 4, 1});
    CHECK(s.get_long_or("params", "absent", 7) == 7);
}

TEST_CASE("malformed files give positioned parse errors") {
    try {
        Scenario::parse_text("kind x\n[broken\np 5\n");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("line 2") != std::string::npos);
    }
    CHECK_THROWS_AS(Scenario::parse_text("justakey\n"), parse_error);
    CHECK_THROWS_AS(Scenario::parse_text("# only a comment\n"), parse_error);
    // duplicate keys are rejected
    CHECK_THROWS_AS(Scenario::parse_text("kind x\nkind y\n"), parse_error);
    // unknown kind surfaces at dispatch
    Scenario s = Scenario::parse_text("kind no-such-kind\n");
    CHECK_THROWS_AS(run_scenario(s), parse_error);
}

TEST_CASE("constant expressions") {
    Scenario s = Scenario::parse_text(kTorsion, "inline");
    Field F(s.field_desc());
    CHECK(s.eval_constant(F, "5^3").ord() == 3);
    CHECK(s.eval_constant(F, "-1").eq_to_prec(-F.one()));
    CHECK(s.eval_constant(F, "2*pi^2").ord() == 2);
    CHECK(s.eval_constant(F, "zeta(4,1)").pow(4).eq_to_prec(F.one()));
    CHECK(s.eval_constant(F, "teich(2)").eq_to_prec(
        F.from_integer(2).teichmuller()));
    CHECK(s.eval_constant(F, "(5^2)/5").ord() == 1);
    CHECK_THROWS_AS(s.eval_constant(F, "5 + 5"), parse_error);
    CHECK_THROWS_AS(s.eval_constant(F, "zeta(4"), parse_error);
}

TEST_CASE("reports are deterministic modulo the duration field") {
    Scenario s = Scenario::parse_text(kTorsion, "inline");
    Report r1 = run_scenario(s);
    Report r2 = run_scenario(s);
    CHECK(r1.to_json(true) == r2.to_json(true));
    CHECK(r1.all_passed());
    CHECK(r1.count("pass") > 0);
}

TEST_CASE("failures are recorded, not thrown") {
    std::string bad = kTorsion;
    bad.replace(bad.find("4 4 1"), 5, "4 4 2");
    Scenario s = Scenario::parse_text(bad, "inline");
    Report r = run_scenario(s);
    CHECK(!r.all_passed());
    CHECK(r.count("fail") >= 1);
    CHECK(r.count("pass") >= 1); // the other checks still ran
}

TEST_CASE("precondition failures surface as failed checks") {
    const char* wild = R"(kind hilbert-torsion
[field]
p 5
[curve]
q 5
[params]
expected_shape 4 4 1
)";
    // a field with p-power roots of unity makes the torsion wild
    std::string text = wild;
    text.replace(text.find("p 5"), 3, "p 5\neisenstein 5 10 10 5 1");
    Scenario s = Scenario::parse_text(text, "inline");
    Report r = run_scenario(s);
    CHECK(r.count("unsupported") + r.count("fail") >= 1);
}

TEST_CASE("suite over a directory: ordering, isolation, exit contract") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "tatereg_suite_test";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "b_ok.scn") << kTorsion;
    std::string bad = kTorsion;
    bad.replace(bad.find("4 4 1"), 5, "4 4 2");
    std::ofstream(dir / "a_bad.scn") << bad;
    SuiteResult res = run_suite(dir.string());
    REQUIRE(res.reports.size() == 2);
    // sorted by file name
    CHECK(res.reports[0].scenario_path.find("a_bad") != std::string::npos);
    CHECK(res.fail >= 1);
    CHECK(res.pass >= 1);
    CHECK(!res.ok());
    // empty directory: zero checks, not ok, warning in the aggregate
    fs::path empty = fs::temp_directory_path() / "tatereg_empty_test";
    fs::remove_all(empty);
    fs::create_directories(empty);
    SuiteResult none = run_suite(empty.string());
    CHECK(none.reports.empty());
    CHECK(!none.ok());
    CHECK(none.to_json().find("warning") != std::string::npos);
    fs::remove_all(dir);
    fs::remove_all(empty);
}

TEST_CASE("environment precision override is honored") {
    setenv("TATEREG_PRECISION", "52", 1);
    Scenario s = Scenario::parse_text("kind weil-reciprocity\n[field]\np 5\n",
                                      "inline");
    CHECK(s.precision() == 52);
    s.override_precision(60);
    CHECK(s.precision() == 60);
    unsetenv("TATEREG_PRECISION");
    CHECK(s.precision() == 60);
}
