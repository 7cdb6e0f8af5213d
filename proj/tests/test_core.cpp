#include <doctest.h>

#include <cmath>

#include "dismet/core.hpp"
#include "dismet/rng.hpp"
#include "test_util.hpp"

using namespace dismet;

TEST_CASE("validate_pair accepts matching row counts and passes data through untouched") {
    Matrix v(3, 2);
    v.data = {0.1, 0.2, 0.3, 0.4, 0.5, 0.6};
    Matrix z(3, 4, 0.25);
    FactorMatrix f = make_factor_matrix(v);
    CodeMatrix c = make_code_matrix(z);
    ValidatedPair p = validate_pair(f, c);
    CHECK(&p.factors == &f);
    CHECK(&p.codes == &c);
    for (std::size_t i = 0; i < v.data.size(); ++i) CHECK(f.values.data[i] == v.data[i]);
}

TEST_CASE("validate_pair rejects row mismatch") {
    FactorMatrix f = make_factor_matrix(Matrix(3, 2, 0.5));
    CodeMatrix c = make_code_matrix(Matrix(4, 4, 0.5));
    CHECK_THROWS_AS(validate_pair(f, c), dimension_mismatch_error);
}

TEST_CASE("validate_pair reports the location of a non-finite entry") {
    Matrix v(3, 2, 0.5);
    v.at(1, 1) = std::nan("");
    FactorMatrix f = make_factor_matrix(v);
    CodeMatrix c = make_code_matrix(Matrix(3, 2, 0.5));
    try {
        validate_pair(f, c);
        FAIL("expected non_finite_data_error");
    } catch (const non_finite_data_error& e) {
        std::string msg = e.what();
        CHECK(msg.find("row 1") != std::string::npos);
        CHECK(msg.find("column 1") != std::string::npos);
    }
}

TEST_CASE("rescale_by_chance endpoints and midpoint") {
    CHECK(rescale_by_chance(1.0, 0.125) == doctest::Approx(1.0));
    CHECK(rescale_by_chance(0.125, 0.125) == doctest::Approx(0.0));
    CHECK(rescale_by_chance(0.5625, 0.125) == doctest::Approx(0.5));
    CHECK(rescale_by_chance(0.05, 0.125) == 0.0);  // below chance clamps
    CHECK_THROWS_AS(rescale_by_chance(0.5, 1.0), invalid_parameter_error);
}

TEST_CASE("rescale_by_chance is monotone and maps [chance,1] onto [0,1]") {
    Rng rng(7);
    for (int rep = 0; rep < 200; ++rep) {
        double chance = rng.next_double() * 0.9;
        double a = chance + rng.next_double() * (1.0 - chance);
        double b = chance + rng.next_double() * (1.0 - chance);
        if (a > b) std::swap(a, b);
        double ra = rescale_by_chance(a, chance);
        double rb = rescale_by_chance(b, chance);
        CHECK(ra <= rb + 1e-15);
        CHECK(ra >= 0.0);
        CHECK(rb <= 1.0);
    }
}

TEST_CASE("categorical factors must be nonnegative integers") {
    Matrix v(2, 1);
    v.data = {0.0, 1.5};
    CHECK_THROWS_AS(make_factor_matrix(v, {"f"}, {FactorKind::Categorical}), invalid_parameter_error);
    v.data = {0.0, 3.0};
    CHECK_NOTHROW(make_factor_matrix(v, {"f"}, {FactorKind::Categorical}));
}
