#include "cox2q/scenario.hpp"

#include <doctest.h>

#include <sstream>
#include <string>

using namespace cox2q;

TEST_SUITE_BEGIN("scenario");

TEST_CASE("header is the pinned schema") {
    CHECK(std::string(kCsvHeader) ==
          "scenario_id,family,cv,c,rho,lambda,method,metric,value,ci_half_width,seed");
}

TEST_CASE("numbers print in shortest round-trip form") {
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(1.0 / 3.0) == "0.3333333333333333");
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(1e-8) == "1e-08");
}

TEST_CASE("rows serialize with empty cells for absent fields") {
    ScenarioRow full;
    full.scenario_id = "fig2:I:cv4:c4:rho0.5";
    full.family = "I";
    full.cv = 4.0;
    full.c = 4;
    full.rho = 0.5;
    full.lambda = 2.0;
    full.method = "sim";
    full.metric = "min_tr";
    full.value = 2.12;
    full.ci_half_width = 0.01;
    full.seed = 42;

    ScenarioRow sparse;
    sparse.scenario_id = "t1:cv2";
    sparse.family = "I";
    sparse.cv = 2.0;
    sparse.method = "exact";
    sparse.metric = "mu2";
    sparse.value = 0.4;

    std::ostringstream out;
    write_csv(out, {full, sparse});
    const std::string text = out.str();

    const std::string expect_header(kCsvHeader);
    REQUIRE(text.substr(0, expect_header.size()) == expect_header);
    CHECK(text ==
          "scenario_id,family,cv,c,rho,lambda,method,metric,value,ci_half_width,seed\n"
          "fig2:I:cv4:c4:rho0.5,I,4,4,0.5,2,sim,min_tr,2.12,0.01,42\n"
          "t1:cv2,I,2,,,,exact,mu2,0.4,,\n");
}

TEST_SUITE_END();
