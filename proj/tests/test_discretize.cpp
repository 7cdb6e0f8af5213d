#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "dismet/discretize.hpp"
#include "dismet/rng.hpp"
#include "dismet/synthgen.hpp"
#include "test_util.hpp"

using namespace dismet;

TEST_CASE("discretize_column fixed-bounds arithmetic") {
    std::vector<double> x = {0.0, 0.5, 0.999};
    std::vector<int> idx = discretize_column(x, BinningSpec::fixed(10, 0.0, 1.0));
    CHECK(idx == std::vector<int>{0, 5, 9});
}

TEST_CASE("value exactly at the upper bound maps to the last bin") {
    std::vector<double> x = {1.0};
    CHECK(discretize_column(x, BinningSpec::fixed(10, 0.0, 1.0))[0] == 9);
}

TEST_CASE("constant column maps entirely to bin 0") {
    std::vector<double> x(17, 0.42);
    std::vector<int> idx = discretize_column(x, BinningSpec::empirical(10));
    CHECK(std::all_of(idx.begin(), idx.end(), [](int b) { return b == 0; }));
}

TEST_CASE("empty input is an error") {
    std::vector<double> x;
    CHECK_THROWS_AS(discretize_column(x, BinningSpec::empirical(10)), insufficient_data_error);
}

TEST_CASE("discretization is monotone") {
    Rng rng(11);
    std::vector<double> x(500);
    for (double& v : x) v = rng.next_double() * 3.0 - 1.0;
    std::sort(x.begin(), x.end());
    std::vector<int> idx = discretize_column(x, BinningSpec::empirical(7));
    for (std::size_t i = 1; i < idx.size(); ++i) CHECK(idx[i - 1] <= idx[i]);
}

TEST_CASE("affine rescaling with matching fixed bounds yields identical bins") {
    Rng rng(13);
    std::vector<double> x(300), y(300);
    const double a = 2.5, b = -0.75;
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = rng.next_double();
        y[i] = a * x[i] + b;
    }
    std::vector<int> ix = discretize_column(x, BinningSpec::fixed(8, 0.0, 1.0));
    std::vector<int> iy = discretize_column(y, BinningSpec::fixed(8, b, a + b));
    int mismatches = 0;
    for (std::size_t i = 0; i < x.size(); ++i) mismatches += ix[i] != iy[i] ? 1 : 0;
    // Exact equality up to floating rounding at bin edges.
    CHECK(mismatches <= 1);
}

TEST_CASE("bin_populations counts and handles empty input") {
    std::vector<int> idx = {0, 0, 1};
    CHECK(bin_populations(idx, 2) == std::vector<long long>{2, 1});
    std::vector<int> empty;
    CHECK(bin_populations(empty, 3) == std::vector<long long>{0, 0, 0});
    std::vector<int> bad = {3};
    CHECK_THROWS_AS(bin_populations(bad, 3), invalid_parameter_error);
}

TEST_CASE("uniform samples fill equal-width bins to binomial accuracy") {
    Rng rng(18);
    std::vector<double> x(20000);
    for (double& v : x) v = rng.next_double();
    std::vector<int> idx = discretize_column(x, BinningSpec::fixed(10, 0.0, 1.0));
    std::vector<long long> pops = bin_populations(idx, 10);
    CHECK(std::accumulate(pops.begin(), pops.end(), 0LL) == 20000);
    // 3 sigma of Binomial(20000, 0.1).
    double sigma = std::sqrt(20000 * 0.1 * 0.9);
    for (long long c : pops) CHECK(std::abs(static_cast<double>(c) - 2000.0) < 3.0 * sigma);
}

TEST_CASE("strong nonlinearity concentrates code mass in the middle bins") {
    Generated g = gen_tangent(1, 1000, 1.0, 42);
    std::vector<int> idx = discretize_column(g.codes.values.column(0), BinningSpec::fixed(10, 0.0, 1.0));
    std::vector<long long> pops = bin_populations(idx, 10);
    double middle = static_cast<double>(pops[4] + pops[5]) / 1000.0;
    CHECK(middle > 0.6);
}

TEST_CASE("categorical factors bypass binning") {
    Matrix v(4, 1);
    v.data = {0.0, 2.0, 1.0, 2.0};
    FactorMatrix f = make_factor_matrix(v, {"cls"}, {FactorKind::Categorical});
    BinnedFactors b = discretize_factors(f, BinningSpec::empirical(10));
    CHECK(b.indices[0] == std::vector<int>{0, 2, 1, 2});
    CHECK(b.num_bins[0] == 3);
}
