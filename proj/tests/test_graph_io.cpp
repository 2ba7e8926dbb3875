#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <unistd.h>

#include "test_util.hpp"
#include "wavpers/errors.hpp"
#include "wavpers/tudataset.hpp"

using namespace wavpers;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("wavpers_test_" +
                                                  std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& content) {
    std::ofstream out(p);
    out << content;
}

void write_dataset_files(const fs::path& dir, const std::string& name, const std::string& a,
                         const std::string& ind, const std::string& lab) {
    write_file(dir / (name + "_A.txt"), a);
    write_file(dir / (name + "_graph_indicator.txt"), ind);
    write_file(dir / (name + "_graph_labels.txt"), lab);
}

} // namespace

TEST_CASE("symmetric duplicate edge collapses to one undirected edge") {
    TempDir tmp;
    write_dataset_files(tmp.path, "TWO", "1, 2\n2, 1\n", "1\n1\n", "-1\n");
    Dataset d = load_tudataset(tmp.path.string(), "TWO");
    CHECK(d.size() == 1);
    CHECK(d.graphs[0].n_vertices == 2);
    CHECK(d.graphs[0].n_edges() == 1);
    CHECK(d.labels[0] == 0);
    CHECK(d.load_stats.duplicate_edges_collapsed == 1);
}

TEST_CASE("self loops are dropped and counted") {
    TempDir tmp;
    write_dataset_files(tmp.path, "LOOP", "1, 1\n1, 2\n2, 1\n", "1\n1\n", "1\n");
    Dataset d = load_tudataset(tmp.path.string(), "LOOP");
    CHECK(d.graphs[0].n_edges() == 1);
    CHECK(d.load_stats.self_loops_dropped == 1);
}

TEST_CASE("labels remap with the smaller raw label to zero") {
    TempDir tmp;
    write_dataset_files(tmp.path, "LBL", "1, 2\n3, 4\n", "1\n1\n2\n2\n", "1\n-1\n");
    Dataset d = load_tudataset(tmp.path.string(), "LBL");
    CHECK(d.labels[0] == 1); // raw 1
    CHECK(d.labels[1] == 0); // raw -1
}

TEST_CASE("missing file raises an error naming the file") {
    TempDir tmp;
    try {
        load_tudataset(tmp.path.string(), "NOPE");
        FAIL("expected data_error");
    } catch (const data_error& e) {
        CHECK(std::string(e.what()).find("NOPE_A.txt") != std::string::npos);
    }
}

TEST_CASE("edge across graphs reports the offending line") {
    TempDir tmp;
    write_dataset_files(tmp.path, "XG", "1, 2\n2, 3\n", "1\n1\n2\n", "0\n1\n");
    try {
        load_tudataset(tmp.path.string(), "XG");
        FAIL("expected data_error");
    } catch (const data_error& e) {
        const std::string msg = e.what();
        CHECK(msg.find(":2") != std::string::npos);
        CHECK(msg.find("different graphs") != std::string::npos);
    }
}

TEST_CASE("vertex index out of range is a format error") {
    TempDir tmp;
    write_dataset_files(tmp.path, "OOR", "1, 9\n", "1\n1\n", "0\n");
    CHECK_THROWS_AS(load_tudataset(tmp.path.string(), "OOR"), data_error);
}

TEST_CASE("round trip through the three-file format") {
    Rng rng(11);
    Dataset d;
    d.name = "RT";
    for (int i = 0; i < 7; ++i) {
        d.graphs.push_back(testing::random_connected_graph(3 + static_cast<int>(rng.uniform_index(5)),
                                                           0.3, rng));
        d.labels.push_back(static_cast<int>(rng.uniform_index(2)));
    }
    // ensure both labels appear so the remap is the identity
    d.labels[0] = 0;
    d.labels[1] = 1;

    TempDir tmp;
    save_tudataset(d, tmp.path.string());
    Dataset back = load_tudataset(tmp.path.string(), "RT");

    REQUIRE(back.size() == d.size());
    CHECK(back.labels == d.labels);
    for (int i = 0; i < d.size(); ++i) {
        CHECK(back.graphs[i].n_vertices == d.graphs[i].n_vertices);
        CHECK(back.graphs[i].edges == d.graphs[i].edges);
    }
}

TEST_CASE("degree sum equals twice the edge count") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const Graph g = testing::random_graph(2 + static_cast<int>(rng.uniform_index(10)), 0.4,
                                              rng);
        const auto deg = g.degrees();
        int sum = 0;
        for (int d : deg) sum += d;
        CHECK(sum == 2 * g.n_edges());
    }
}

TEST_CASE("disjoint union offsets are prefix sums") {
    Dataset d;
    auto add = [&](int n) {
        Graph g;
        g.n_vertices = n;
        d.graphs.push_back(g);
        d.labels.push_back(0);
    };
    add(3);
    CHECK(disjoint_union_offsets(d) == std::vector<int>{0});
    add(5);
    add(2);
    CHECK(disjoint_union_offsets(d) == std::vector<int>{0, 3, 8});
}

TEST_CASE("MUTAG and friends load with the published sizes" *
          doctest::skip(!testing::dataset_on_disk("MUTAG"))) {
    Dataset mutag = load_tudataset(testing::data_root(), "MUTAG");
    CHECK(mutag.size() == 188);

    // the stacked dimension matches the indicator line count
    std::ifstream ind(fs::path(testing::data_root()) / "MUTAG" / "MUTAG_graph_indicator.txt");
    if (!ind.is_open())
        ind.open(fs::path(testing::data_root()) / "MUTAG_graph_indicator.txt");
    REQUIRE(ind.is_open());
    int lines = 0;
    std::string line;
    while (std::getline(ind, line))
        if (!line.empty()) ++lines;
    CHECK(mutag.total_vertices() == lines);

    if (testing::dataset_on_disk("COX2")) {
        CHECK(load_tudataset(testing::data_root(), "COX2").size() == 467);
    }
    if (testing::dataset_on_disk("NCI1")) {
        CHECK(load_tudataset(testing::data_root(), "NCI1").size() == 4110);
    }
}
