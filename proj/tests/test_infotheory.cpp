#include <doctest.h>

#include <cmath>

#include "dismet/infotheory.hpp"
#include "dismet/rng.hpp"
#include "test_util.hpp"

using namespace dismet;

namespace {

// Independent oracle: direct sum over all cells from first principles.
double brute_force_mi(const JointHistogram& h) {
    double n = static_cast<double>(h.total);
    double mi = 0.0;
    for (int r = 0; r < h.rows; ++r) {
        for (int c = 0; c < h.cols; ++c) {
            if (h.at(r, c) == 0) continue;
            double pij = h.at(r, c) / n;
            double pi = 0.0, pj = 0.0;
            for (int cc = 0; cc < h.cols; ++cc) pi += h.at(r, cc);
            for (int rr = 0; rr < h.rows; ++rr) pj += h.at(rr, c);
            pi /= n;
            pj /= n;
            mi += pij * std::log(pij / (pi * pj));
        }
    }
    return mi;
}

JointHistogram random_table(Rng& rng, int rows, int cols, int max_count) {
    JointHistogram h;
    h.rows = rows;
    h.cols = cols;
    h.counts.resize(static_cast<std::size_t>(rows) * cols);
    h.total = 0;
    for (long long& c : h.counts) {
        c = static_cast<long long>(rng.next_below(static_cast<std::size_t>(max_count + 1)));
        h.total += c;
    }
    if (h.total == 0) {
        h.counts[0] = 1;
        h.total = 1;
    }
    return h;
}

}  // namespace

TEST_CASE("entropy of basic histograms") {
    std::vector<long long> uniform(10, 5);
    CHECK(entropy(uniform) == doctest::Approx(std::log(10.0)).epsilon(1e-12));
    std::vector<long long> single = {0, 7, 0};
    CHECK(entropy(single) == doctest::Approx(0.0));
    std::vector<long long> skew = {3, 1};
    CHECK(entropy(skew) == doctest::Approx(0.562335).epsilon(1e-5));
    std::vector<long long> empty = {0, 0};
    CHECK_THROWS_AS(entropy(empty), insufficient_data_error);
}

TEST_CASE("mutual information of a variable with itself equals its entropy") {
    std::vector<int> x = {0, 1, 0, 1, 0, 1};
    JointHistogram h = JointHistogram::from_indices(x, x, 2, 2);
    CHECK(mutual_information(h) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
}

TEST_CASE("product-form table has zero mutual information") {
    // counts[i][j] = row_i * col_j gives exact independence.
    JointHistogram h;
    h.rows = 3;
    h.cols = 2;
    h.counts = {2, 4, 3, 6, 1, 2};
    h.total = 18;
    CHECK(mutual_information(h) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("mutual information matches the brute-force oracle on the worked table") {
    JointHistogram h;
    h.rows = 2;
    h.cols = 2;
    h.counts = {2, 1, 1, 2};
    h.total = 6;
    CHECK(mutual_information(h) == doctest::Approx(brute_force_mi(h)).epsilon(1e-12));
}

TEST_CASE("mutual information matches brute-force summation on random 4x4 tables") {
    Rng rng(101);
    for (int rep = 0; rep < 1000; ++rep) {
        JointHistogram h = random_table(rng, 4, 4, 9);
        CHECK(mutual_information(h) == doctest::Approx(brute_force_mi(h)).epsilon(1e-10));
    }
}

TEST_CASE("joint entropy identity H(X,Y) = H(X) + H(Y) - I(X,Y)") {
    Rng rng(103);
    for (int rep = 0; rep < 1000; ++rep) {
        JointHistogram h = random_table(rng, 3, 5, 7);
        double lhs = joint_entropy(h);
        double rhs = entropy(h.row_marginal()) + entropy(h.col_marginal()) - mutual_information(h);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("joint entropy of basic tables") {
    // Perfectly correlated two-level variables.
    std::vector<int> x = {0, 1, 0, 1};
    JointHistogram a = JointHistogram::from_indices(x, x, 2, 2);
    CHECK(joint_entropy(a) == doctest::Approx(std::log(2.0)));
    // Independent uniform two-level variables.
    std::vector<int> u = {0, 0, 1, 1};
    std::vector<int> v = {0, 1, 0, 1};
    JointHistogram b = JointHistogram::from_indices(u, v, 2, 2);
    CHECK(joint_entropy(b) == doctest::Approx(2.0 * std::log(2.0)));
}

TEST_CASE("MI is bounded by both marginal entropies and symmetric under transpose") {
    Rng rng(107);
    for (int rep = 0; rep < 300; ++rep) {
        JointHistogram h = random_table(rng, 4, 3, 8);
        double mi = mutual_information(h);
        CHECK(mi <= entropy(h.row_marginal()) + 1e-12);
        CHECK(mi <= entropy(h.col_marginal()) + 1e-12);
        JointHistogram t;
        t.rows = h.cols;
        t.cols = h.rows;
        t.total = h.total;
        t.counts.resize(h.counts.size());
        for (int r = 0; r < h.rows; ++r) {
            for (int c = 0; c < h.cols; ++c) {
                t.counts[static_cast<std::size_t>(c) * t.cols + r] = h.at(r, c);
            }
        }
        CHECK(mutual_information(t) == doctest::Approx(mi).epsilon(1e-12));
    }
}

TEST_CASE("MI is invariant under bin relabeling") {
    Rng rng(109);
    JointHistogram h = random_table(rng, 4, 4, 9);
    double base = mutual_information(h);
    // Swap rows 0 and 2, columns 1 and 3.
    JointHistogram p = h;
    for (int c = 0; c < 4; ++c) {
        std::swap(p.counts[static_cast<std::size_t>(0) * 4 + c], p.counts[static_cast<std::size_t>(2) * 4 + c]);
    }
    for (int r = 0; r < 4; ++r) {
        std::swap(p.counts[static_cast<std::size_t>(r) * 4 + 1], p.counts[static_cast<std::size_t>(r) * 4 + 3]);
    }
    CHECK(mutual_information(p) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("pairwise MI matrix: identity representation is diagonal-dominant") {
    auto [f, z] = test::identity_pair(20000, 8, 211);
    ImportanceMatrix mi = pairwise_mi_matrix(f, z, BinningSpec::fixed(10, 0.0, 1.0));
    double expected = std::log(10.0);
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            if (i == j) {
                CHECK(mi.at(i, j) == doctest::Approx(expected).epsilon(0.01));
            } else {
                CHECK(mi.at(i, j) < 0.05);
            }
        }
    }
}

TEST_CASE("pairwise MI matrix: pure-noise codes carry almost no information") {
    Matrix v = test::random_uniform(20000, 4, 307);
    Matrix n = test::random_uniform(20000, 4, 308);
    ImportanceMatrix mi = pairwise_mi_matrix(test::factors_from(v), test::codes_from(n),
                                             BinningSpec::fixed(10, 0.0, 1.0));
    for (double w : mi.weights.data) CHECK(w < 0.05);
}

TEST_CASE("single factor equal to its own code: MI equals the binned entropy") {
    Matrix v = test::random_uniform(5000, 1, 401);
    Matrix z = v;
    MiBundle b = compute_mi_bundle(test::factors_from(v), test::codes_from(z),
                                   BinningSpec::fixed(10, 0.0, 1.0), BinningSpec::fixed(10, 0.0, 1.0));
    CHECK(b.mi.at(0, 0) == doctest::Approx(b.factor_entropies[0]).epsilon(1e-12));
}
