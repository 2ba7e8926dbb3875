#ifndef WAVPERS_CONE_HPP
#define WAVPERS_CONE_HPP

#include <array>
#include <vector>

#include <Eigen/Core>

#include "wavpers/graph.hpp"

namespace wavpers {

/// One cell of the coned graph. Vertices are graph indices; the apex is
/// index n_vertices. `verts` is ascending, padded with -1.
struct ConeSimplex {
    double value = 0.0;
    int dim = 0;
    std::array<int, 3> verts{-1, -1, -1};
    int critical_vertex = -1; // vertex whose f value this cell's value equals
    bool coned = false;       // contains the apex
};

/// The graph plus an apex: per graph edge one triangle, per vertex one apex
/// edge. Plain cells carry max f over their vertices; coned cells carry
/// 2R - min f; the apex sits at -R. Cells are sorted by
/// (value, dim, vertex tuple), which is a valid filtration order.
struct ConeComplex {
    int n_vertices = 0;
    double radius = 0.0;
    std::vector<ConeSimplex> simplices;

    int apex() const { return n_vertices; }
};

/// R defaults to sup|f| + 1.
ConeComplex build_cone(const Graph& g, const Eigen::VectorXd& f);
ConeComplex build_cone(const Graph& g, const Eigen::VectorXd& f, double radius);

/// True when every cell's value is >= each of its faces' values.
bool filtration_is_monotone(const ConeComplex& c);

} // namespace wavpers

#endif // WAVPERS_CONE_HPP
