#include "wavpers/tudataset.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "wavpers/errors.hpp"

namespace fs = std::filesystem;

namespace wavpers {

namespace {

fs::path locate(const std::string& root, const std::string& name, const std::string& suffix) {
    fs::path flat = fs::path(root) / (name + suffix);
    if (fs::exists(flat)) return flat;
    fs::path nested = fs::path(root) / name / (name + suffix);
    if (fs::exists(nested)) return nested;
    throw data_error("missing dataset file: " + flat.string());
}

std::vector<std::string> read_lines(const fs::path& p) {
    std::ifstream in(p);
    if (!in) throw data_error("cannot open " + p.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    // trailing blank lines are tolerated
    while (!lines.empty() && lines.back().find_first_not_of(" \t") == std::string::npos)
        lines.pop_back();
    return lines;
}

long parse_int(const std::string& s, const fs::path& file, std::size_t lineno) {
    try {
        std::size_t pos = 0;
        long v = std::stol(s, &pos);
        while (pos < s.size() && (s[pos] == ' ' || s[pos] == '\t')) ++pos;
        if (pos != s.size()) throw std::invalid_argument("trailing junk");
        return v;
    } catch (const std::exception&) {
        throw data_error(file.string() + ":" + std::to_string(lineno) +
                         ": expected an integer, got \"" + s + "\"");
    }
}

} // namespace

Dataset load_tudataset(const std::string& root_path, const std::string& name) {
    const fs::path a_file = locate(root_path, name, "_A.txt");
    const fs::path ind_file = locate(root_path, name, "_graph_indicator.txt");
    const fs::path lab_file = locate(root_path, name, "_graph_labels.txt");

    Dataset d;
    d.name = name;

    // graph indicator: vertex -> graph id (1-based)
    const auto ind_lines = read_lines(ind_file);
    std::vector<int> graph_of; // per global vertex, 0-based graph index
    std::map<long, int> graph_ids;
    for (std::size_t i = 0; i < ind_lines.size(); ++i) {
        long gid = parse_int(ind_lines[i], ind_file, i + 1);
        auto [it, inserted] = graph_ids.try_emplace(gid, static_cast<int>(graph_ids.size()));
        graph_of.push_back(it->second);
    }
    const int n_graphs = static_cast<int>(graph_ids.size());
    d.graphs.resize(n_graphs);

    // local vertex index within its graph, in file order
    std::vector<int> local_index(graph_of.size());
    for (std::size_t v = 0; v < graph_of.size(); ++v)
        local_index[v] = d.graphs[graph_of[v]].n_vertices++;

    // labels
    const auto lab_lines = read_lines(lab_file);
    if (static_cast<int>(lab_lines.size()) != n_graphs)
        throw data_error(lab_file.string() + ": expected " + std::to_string(n_graphs) +
                         " labels, found " + std::to_string(lab_lines.size()));
    std::vector<long> raw_labels(n_graphs);
    std::set<long> distinct;
    for (int i = 0; i < n_graphs; ++i) {
        raw_labels[i] = parse_int(lab_lines[i], lab_file, i + 1);
        distinct.insert(raw_labels[i]);
    }
    if (distinct.size() > 2)
        throw data_error(lab_file.string() + ": more than two distinct labels");
    const long low = *distinct.begin();
    d.labels.resize(n_graphs);
    for (int i = 0; i < n_graphs; ++i) d.labels[i] = raw_labels[i] == low ? 0 : 1;

    // edges
    const auto edge_lines = read_lines(a_file);
    std::vector<std::set<std::pair<int, int>>> edge_sets(n_graphs);
    for (std::size_t ln = 0; ln < edge_lines.size(); ++ln) {
        const std::string& line = edge_lines[ln];
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::size_t comma = line.find(',');
        if (comma == std::string::npos)
            throw data_error(a_file.string() + ":" + std::to_string(ln + 1) +
                             ": expected \"i, j\"");
        long u1 = parse_int(line.substr(0, comma), a_file, ln + 1);
        long v1 = parse_int(line.substr(comma + 1), a_file, ln + 1);
        if (u1 < 1 || v1 < 1 || u1 > static_cast<long>(graph_of.size()) ||
            v1 > static_cast<long>(graph_of.size()))
            throw data_error(a_file.string() + ":" + std::to_string(ln + 1) +
                             ": vertex index out of range");
        int gu = graph_of[u1 - 1];
        int gv = graph_of[v1 - 1];
        if (gu != gv)
            throw data_error(a_file.string() + ":" + std::to_string(ln + 1) +
                             ": edge endpoints belong to different graphs");
        int lu = local_index[u1 - 1];
        int lv = local_index[v1 - 1];
        if (lu == lv) {
            ++d.load_stats.self_loops_dropped;
            continue;
        }
        if (lu > lv) std::swap(lu, lv);
        if (!edge_sets[gu].emplace(lu, lv).second) ++d.load_stats.duplicate_edges_collapsed;
    }
    for (int g = 0; g < n_graphs; ++g)
        d.graphs[g].edges.assign(edge_sets[g].begin(), edge_sets[g].end());

    for (const auto& g : d.graphs) g.validate();
    return d;
}

void save_tudataset(const Dataset& d, const std::string& root_path) {
    const fs::path dir = fs::path(root_path) / d.name;
    fs::create_directories(dir);

    std::vector<int> offsets(d.graphs.size());
    int acc = 0;
    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
        offsets[i] = acc;
        acc += d.graphs[i].n_vertices;
    }

    std::ofstream a(dir / (d.name + "_A.txt"));
    std::ofstream ind(dir / (d.name + "_graph_indicator.txt"));
    std::ofstream lab(dir / (d.name + "_graph_labels.txt"));
    if (!a || !ind || !lab) throw data_error("cannot write dataset files under " + dir.string());

    for (std::size_t i = 0; i < d.graphs.size(); ++i) {
        const Graph& g = d.graphs[i];
        for (auto [u, v] : g.edges) {
            long gu = offsets[i] + u + 1;
            long gv = offsets[i] + v + 1;
            a << gu << ", " << gv << "\n" << gv << ", " << gu << "\n";
        }
        for (int v = 0; v < g.n_vertices; ++v) ind << (i + 1) << "\n";
        lab << d.labels[i] << "\n";
    }
}

} // namespace wavpers
