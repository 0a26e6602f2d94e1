#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "lrf/csv_io.hpp"
#include "lrf/design_document.hpp"

using doctest::Approx;
using namespace lrf;

namespace {

DesignSpec make_spec(int kx, int kappa, double p, std::optional<double> q = std::nullopt, int kt = 1, double ts = 1.0) {
    return DesignSpec{.weight = WeightSpec::make(kappa, p),
                      .model_order = kx,
                      .derivative_count = kt,
                      .delay = q,
                      .sample_period = ts};
}

}  // namespace

TEST_SUITE("io") {

TEST_CASE("column reader") {
    std::istringstream in("n,x\n0,1.5\n\n1,-2e3\n2, 7 \n");
    CsvColumnReader reader(in);
    CHECK(*reader.next() == 1.5);
    CHECK(*reader.header() == "x");
    CHECK(*reader.next() == -2000.0);
    CHECK(*reader.next() == 7.0);
    CHECK_FALSE(reader.next().has_value());

    std::istringstream first("n,x\n0,1.5\n1,2.5\n");
    CHECK(read_column(first, 0) == std::vector<double>{0.0, 1.0});

    std::istringstream bare("3\n4\n");
    CHECK(read_column(bare) == std::vector<double>{3.0, 4.0});
    std::istringstream empty("");
    CHECK(read_column(empty).empty());
}

TEST_CASE("column reader errors carry line numbers") {
    std::istringstream in("x\n1\n2\nabc\n");
    try {
        read_column(in);
        FAIL("expected an error");
    } catch (const CsvError& e) {
        CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    std::istringstream nan_in("1\nnan\n");
    CHECK_THROWS_AS(read_column(nan_in), CsvError);
    std::istringstream narrow("a,b\n1,2\n3\n");
    CHECK_THROWS_AS(read_column(narrow, 1), CsvError);
}

TEST_CASE("number formatting round-trips") {
    for (double v : {0.1, 1.0 / 3.0, -2.5e-300, 123456789.123456789, 0.0}) {
        CHECK(*parse_number(format_number(v)) == v);
    }
    std::ostringstream out;
    const double row[] = {1.0, 0.5};
    write_row(out, row);
    CHECK(out.str() == "1,0.5\n");
    CHECK_FALSE(parse_number("1.0x").has_value());
    CHECK_FALSE(parse_number("").has_value());
    CHECK(*parse_number("+4") == 4.0);
}

TEST_CASE("design document round trip is lossless") {
    const auto doc = make_design_document(make_spec(3, 2, 0.8, std::nullopt, 3, 0.01));
    const auto text = to_json(doc);
    const auto back = from_json(text);
    CHECK(to_json(back) == text);
    CHECK_FALSE(back.requested_delay.has_value());
    const auto& a = doc.realization;
    const auto& b = back.realization;
    CHECK(a.delay() == b.delay());
    CHECK(a.vrf == b.vrf);
    CHECK(a.transforms.derivative_output == b.transforms.derivative_output);
    CHECK(a.transforms.first_moment_output == b.transforms.first_moment_output);
    CHECK(a.transforms.second_moment_output == b.transforms.second_moment_output);
    CHECK(a.first_rho == b.first_rho);
    CHECK(a.residual_scale == b.residual_scale);
    CHECK(back.f_c == doc.f_c);
    CHECK(back.vrf_report.candidates.size() == doc.vrf_report.candidates.size());
}

TEST_CASE("design document summary values") {
    const auto doc = make_design_document(make_spec(2, 0, 0.8));
    CHECK(doc.realization.delay() == Approx(8.5));
    CHECK(std::abs(doc.realization.vrf(0, 0) - 0.056) < 0.001);
    CHECK(std::abs(*doc.f_c - 0.042) < 0.001);
    CHECK(doc.group_delay_dc == Approx(8.5).epsilon(1e-6));

    const auto fixed = make_design_document(make_spec(2, 3, 0.8, 8.5));
    CHECK(*fixed.requested_delay == 8.5);
    CHECK(fixed.vrf_report.q_optimal == Approx(22.407).epsilon(1e-4));
    CHECK(fixed.realization.delay() == 8.5);
}

TEST_CASE("loader rejects malformed documents") {
    CHECK_THROWS_AS(from_json("{"), std::invalid_argument);
    CHECK_THROWS_AS(from_json("{\"format\": \"other\"}"), std::invalid_argument);
    auto text = to_json(make_design_document(make_spec(2, 0, 0.8)));
    const auto pos = text.find("\"kx\": 2");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 7, "\"kx\": 3");
    CHECK_THROWS_AS(from_json(text), std::invalid_argument);
}

}
