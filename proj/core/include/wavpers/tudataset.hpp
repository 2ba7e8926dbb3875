#ifndef WAVPERS_TUDATASET_HPP
#define WAVPERS_TUDATASET_HPP

#include <string>

#include "wavpers/graph.hpp"

namespace wavpers {

/// Reads `<root>/<name>/<name>_A.txt`, `_graph_indicator.txt` and
/// `_graph_labels.txt`. Edges are 1-based "i, j" pairs and are collapsed to
/// unordered pairs; self-loops are dropped and counted. Raw labels are
/// remapped to {0,1} with the smaller raw label mapped to 0.
/// Optional files (node/edge labels, attributes) are ignored.
Dataset load_tudataset(const std::string& root_path, const std::string& name);

/// Writes the three-file format back out (each edge in both orientations,
/// 1-based). Reloading the result yields an identical Dataset.
void save_tudataset(const Dataset& d, const std::string& root_path);

} // namespace wavpers

#endif // WAVPERS_TUDATASET_HPP
