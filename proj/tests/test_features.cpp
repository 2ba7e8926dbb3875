#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <map>

#include "test_util.hpp"
#include "wavpers/errors.hpp"
#include "wavpers/features.hpp"
#include "wavpers/path_signature.hpp"
#include "wavpers/spectral.hpp"

using namespace wavpers;
using wavpers::testing::path_graph;
using wavpers::testing::single_edge_graph;

namespace {

/// Independent tensor-algebra oracle: multiplication by explicit word
/// splitting over digit strings, exp by scalar series on a level-1 element.
struct OracleTensor {
    // words keyed by strings over '0'/'1', plus the empty word ""
    std::map<std::string, double> c;

    static OracleTensor one() {
        OracleTensor t;
        t.c[""] = 1.0;
        return t;
    }
};

OracleTensor oracle_mul(const OracleTensor& x, const OracleTensor& y) {
    OracleTensor out;
    for (const auto& [u, cu] : x.c)
        for (const auto& [v, cv] : y.c) {
            if (u.size() + v.size() > 4) continue;
            out.c[u + v] += cu * cv;
        }
    return out;
}

OracleTensor oracle_exp(double a, double b) {
    OracleTensor z;
    z.c["0"] = a;
    z.c["1"] = b;
    OracleTensor out = OracleTensor::one();
    OracleTensor power = OracleTensor::one();
    double factorial = 1.0;
    for (int k = 1; k <= 4; ++k) {
        power = oracle_mul(power, z);
        factorial *= k;
        for (const auto& [w, cw] : power.c) out.c[w] += cw / factorial;
    }
    return out;
}

OracleTensor oracle_signature(const std::vector<std::array<double, 2>>& path) {
    OracleTensor sig = OracleTensor::one();
    for (std::size_t i = 0; i + 1 < path.size(); ++i)
        sig = oracle_mul(sig, oracle_exp(path[i + 1][0] - path[i][0],
                                         path[i + 1][1] - path[i][1]));
    return sig;
}

double tensor_entry(const TruncatedTensor& t, const std::string& word) {
    int value = 0;
    for (char ch : word) value = (value << 1) | (ch == '1');
    return t.at(static_cast<int>(word.size()), value);
}

std::vector<std::array<double, 2>> random_path(int n, Rng& rng) {
    std::vector<std::array<double, 2>> p(n);
    for (auto& q : p) q = {rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)};
    return p;
}

} // namespace

TEST_CASE("tensor product agrees with the word-splitting oracle") {
    Rng rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        const auto p = random_path(2 + static_cast<int>(rng.uniform_index(4)), rng);
        const TruncatedTensor sig = signature(p);
        const OracleTensor expect = oracle_signature(p);
        for (const auto& [word, value] : expect.c) {
            CHECK(tensor_entry(sig, word) == doctest::Approx(value).epsilon(1e-12));
        }
    }
}

TEST_CASE("chen identity: signatures multiply under concatenation") {
    Rng rng(5);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = random_path(2 + static_cast<int>(rng.uniform_index(4)), rng);
        auto q = random_path(2 + static_cast<int>(rng.uniform_index(4)), rng);
        // concatenate by translating q to start at p's endpoint
        std::vector<std::array<double, 2>> joined = p;
        const double dx = p.back()[0] - q.front()[0];
        const double dy = p.back()[1] - q.front()[1];
        for (std::size_t i = 1; i < q.size(); ++i)
            joined.push_back({q[i][0] + dx, q[i][1] + dy});

        const TruncatedTensor lhs = signature(joined);
        const TruncatedTensor rhs = tensor_mul(signature(p), signature(q));
        for (int i = 0; i < TruncatedTensor::kSize; ++i)
            CHECK(std::abs(lhs.c[i] - rhs.c[i]) < 1e-10);

        // and at the log level
        const TruncatedTensor log_lhs = tensor_log(lhs);
        const TruncatedTensor log_rhs = tensor_log(rhs);
        for (int i = 0; i < TruncatedTensor::kSize; ++i)
            CHECK(std::abs(log_lhs.c[i] - log_rhs.c[i]) < 1e-10);
    }
}

TEST_CASE("time reversal inverts the signature") {
    Rng rng(7);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = random_path(3 + static_cast<int>(rng.uniform_index(4)), rng);
        auto reversed = p;
        std::reverse(reversed.begin(), reversed.end());
        const TruncatedTensor prod = tensor_mul(signature(reversed), signature(p));
        const TruncatedTensor id = TruncatedTensor::one();
        for (int i = 0; i < TruncatedTensor::kSize; ++i)
            CHECK(std::abs(prod.c[i] - id.c[i]) < 1e-10);
    }
}

TEST_CASE("log signature of a straight line is the increment at level one") {
    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const double ax = rng.uniform(-1.0, 1.0), ay = rng.uniform(-1.0, 1.0);
        std::vector<std::array<double, 2>> p;
        const int segments = 1 + static_cast<int>(rng.uniform_index(5));
        double acc = 0.0;
        p.push_back({0.0, 0.0});
        for (int s = 0; s < segments; ++s) {
            acc += rng.uniform(0.1, 1.0);
            p.push_back({ax * acc, ay * acc});
        }
        EigenPath path{p};
        const Eigen::VectorXd ls = log_signature(path);
        REQUIRE(ls.size() == 8);
        CHECK(ls[0] == doctest::Approx(ax * acc).epsilon(1e-12));
        CHECK(ls[1] == doctest::Approx(ay * acc).epsilon(1e-12));
        for (int i = 2; i < 8; ++i) CHECK(std::abs(ls[i]) < 1e-12);
    }
}

TEST_CASE("single segment log signature is the increment") {
    EigenPath p{{{0.0, 0.0}, {0.4, -1.2}}};
    const Eigen::VectorXd ls = log_signature(p);
    CHECK(ls[0] == doctest::Approx(0.4));
    CHECK(ls[1] == doctest::Approx(-1.2));
    for (int i = 2; i < 8; ++i) CHECK(std::abs(ls[i]) < 1e-14);
}

TEST_CASE("log signature depends only on increments") {
    Rng rng(13);
    auto p = random_path(6, rng);
    auto shifted = p;
    for (auto& q : shifted) {
        q[0] += 2.5;
        q[1] -= 1.5;
    }
    const Eigen::VectorXd a = log_signature(EigenPath{p});
    const Eigen::VectorXd b = log_signature(EigenPath{shifted});
    CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("lyndon level dimensions are 2, 1, 2, 3") {
    // encoded in the output layout: total 8 with the level boundaries below
    Rng rng(17);
    auto p = random_path(5, rng);
    const TruncatedTensor lie = tensor_log(signature(p));
    const Eigen::VectorXd coords = lyndon_coordinates(lie);
    REQUIRE(coords.size() == 8);
    // level-1 coordinates are exactly the level-1 tensor entries
    CHECK(coords[0] == doctest::Approx(lie.at(1, 0)));
    CHECK(coords[1] == doctest::Approx(lie.at(1, 1)));
    // level-2 bracket [1,2] has coefficient equal to the (1,2) entry
    CHECK(coords[2] == doctest::Approx(lie.at(2, 0b01)).epsilon(1e-12));
}

TEST_CASE("eigen path encodings") {
    SpectralData s;
    s.eigenvalues = Eigen::VectorXd(3);
    s.eigenvalues << 0.0, 1.0, 2.0;
    s.eigenvectors = Eigen::MatrixXd::Identity(3, 3);

    const EigenPath delay = eigen_path(s, PathMode::delay);
    REQUIRE(delay.points.size() == 2);
    CHECK(delay.points[0] == std::array<double, 2>{0.0, 1.0});
    CHECK(delay.points[1] == std::array<double, 2>{1.0, 2.0});

    SpectralData two;
    two.eigenvalues = Eigen::VectorXd(2);
    two.eigenvalues << 0.0, 2.0;
    two.eigenvectors = Eigen::MatrixXd::Identity(2, 2);
    const EigenPath timed = eigen_path(two, PathMode::time);
    REQUIRE(timed.points.size() == 2);
    CHECK(timed.points[0] == std::array<double, 2>{0.0, 0.0});
    CHECK(timed.points[1] == std::array<double, 2>{2.0, 2.0});

    const EigenPath timed3 = eigen_path(s, PathMode::time);
    CHECK(timed3.points.back()[1] == doctest::Approx(2.0));

    SpectralData one;
    one.eigenvalues = Eigen::VectorXd(1);
    one.eigenvalues << 0.0;
    one.eigenvectors = Eigen::MatrixXd::Identity(1, 1);
    CHECK_THROWS_AS(eigen_path(one, PathMode::delay), numerical_error);
}

TEST_CASE("hks extrema ordering and symmetric edge") {
    const SpectralData s = eigendecompose(normalised_laplacian(single_edge_graph()));
    const Eigen::Vector4d e = hks_extrema(s);
    CHECK(e[0] >= e[1]); // max >= min at t = 10
    CHECK(e[2] >= e[3]); // max >= min at t = 0.1
    const double expected = 0.5 * (1.0 + std::exp(-20.0));
    CHECK(e[0] == doctest::Approx(expected).epsilon(1e-12));
    CHECK(e[1] == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("single isolated vertex carries the unit diagonal spectrum") {
    Graph g;
    g.n_vertices = 1;
    const SpectralData s = eigendecompose(normalised_laplacian(g));
    REQUIRE(s.n() == 1);
    CHECK(s.eigenvalues[0] == doctest::Approx(1.0)); // unit diagonal row
    const Eigen::Vector4d e = hks_extrema(s);
    CHECK(e[0] == doctest::Approx(std::exp(-10.0)));
    CHECK(e[1] == doctest::Approx(std::exp(-10.0)));
    CHECK(e[2] == doctest::Approx(std::exp(-0.1)));
    CHECK(e[3] == doctest::Approx(std::exp(-0.1)));
}

TEST_CASE("feature vectors have the documented dimensions") {
    const SpectralData s = eigendecompose(normalised_laplacian(path_graph(6)));

    const DatasetProfile bio = DatasetProfile::for_dataset("MUTAG");
    CHECK_FALSE(bio.include_hks_extrema);
    CHECK(bio.path_mode == PathMode::delay);
    CHECK(feature_vector(s, bio).size() == 8);

    const DatasetProfile social = DatasetProfile::for_dataset("IMDB-B");
    CHECK(social.include_hks_extrema);
    CHECK(social.path_mode == PathMode::time);
    CHECK(feature_vector(s, social).size() == 12);

    // deterministic recomputation
    const Eigen::VectorXd a = feature_vector(s, social);
    const Eigen::VectorXd b = feature_vector(s, social);
    CHECK((a - b).cwiseAbs().maxCoeff() == 0.0);
}
