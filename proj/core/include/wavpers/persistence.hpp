#ifndef WAVPERS_PERSISTENCE_HPP
#define WAVPERS_PERSISTENCE_HPP

#include <iosfwd>
#include <vector>

#include <Eigen/Core>

#include "wavpers/cone.hpp"
#include "wavpers/graph.hpp"

namespace wavpers {

/// A finite birth/death pair of the coned filtration, before decoding.
/// Attribution records the vertex whose f value each endpoint equals and
/// whether the endpoint cell contains the apex.
struct ConePair {
    int degree = 0; // homological degree of the created class
    double birth = 0.0;
    double death = 0.0;
    int birth_vertex = -1;
    bool birth_coned = false;
    int death_vertex = -1;
    bool death_coned = false;
};

/// Persistence pairs of the cone filtration by boundary-matrix reduction
/// over GF(2) with the clearing optimisation. The unique unbounded
/// degree-0 class (created by the apex) is discarded.
std::vector<ConePair> ordinary_persistence(const ConeComplex& c);

/// One diagram point with per-coordinate vertex attribution:
/// coordinate == sign * f(vertex) + offset with offset 0 or 2R depending on
/// the decode branch, so gradients flow as sign * cotangent.
struct DiagramPoint {
    double birth = 0.0;
    double death = 0.0;
    int birth_vertex = -1;
    int birth_sign = 1;
    int death_vertex = -1;
    int death_sign = 1;

    double persistence() const { return death - birth; }
};

/// The four non-trivial barcodes of a vertex function on a graph.
/// ext1 points carry birth >= death; rel1 points carry birth > death.
struct ExtendedDiagram {
    std::vector<DiagramPoint> ord0;
    std::vector<DiagramPoint> ext0;
    std::vector<DiagramPoint> ext1;
    std::vector<DiagramPoint> rel1;
    double radius = 0.0;
    bool generic = true; // all vertex values distinct

    std::size_t total_points() const {
        return ord0.size() + ext0.size() + ext1.size() + rel1.size();
    }
};

/// Splits cone pairs by position relative to R and reflects coned
/// coordinates by 2R. Zero-length ord/rel points are dropped; ext points
/// are always kept. A coordinate within 1e-9 of R is refused.
ExtendedDiagram decode(const std::vector<ConePair>& pairs, double radius);

/// build_cone + ordinary_persistence + decode.
ExtendedDiagram extended_persistence(const Graph& g, const Eigen::VectorXd& f);
ExtendedDiagram extended_persistence(const Graph& g, const Eigen::VectorXd& f, double radius);

/// Cotangents arriving at diagram coordinates, mirroring the diagram shape.
struct PointCotangent {
    double birth = 0.0;
    double death = 0.0;
};

struct DiagramCotangent {
    std::vector<PointCotangent> ord0;
    std::vector<PointCotangent> ext0;
    std::vector<PointCotangent> ext1;
    std::vector<PointCotangent> rel1;

    static DiagramCotangent zeros_like(const ExtendedDiagram& d) {
        DiagramCotangent c;
        c.ord0.resize(d.ord0.size());
        c.ext0.resize(d.ext0.size());
        c.ext1.resize(d.ext1.size());
        c.rel1.resize(d.rel1.size());
        return c;
    }
};

/// Pulls diagram-coordinate cotangents back to the vertex function:
/// grad_f[v] accumulates sign * cotangent over all coordinates attributed
/// to v. At non-generic f this is the tie-broken one-sided derivative.
Eigen::VectorXd diagram_gradient(const ExtendedDiagram& d, const DiagramCotangent& ct,
                                 int n_vertices);

/// Text form, one `<quadrant> <birth> <death> <bvertex> <bsign> <dvertex>
/// <dsign>` line per point.
void write_diagram(std::ostream& os, const ExtendedDiagram& d);
ExtendedDiagram read_diagram(std::istream& is);

} // namespace wavpers

#endif // WAVPERS_PERSISTENCE_HPP
