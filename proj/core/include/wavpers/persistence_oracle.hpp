#ifndef WAVPERS_PERSISTENCE_ORACLE_HPP
#define WAVPERS_PERSISTENCE_ORACLE_HPP

#include <Eigen/Core>

#include "wavpers/graph.hpp"
#include "wavpers/persistence.hpp"

namespace wavpers {

/// Independent computation of the four extended barcodes: builds the full
/// sequence of absolute and relative homology spaces at every critical
/// value, computes composite ranks over GF(2) from explicit cycle and
/// boundary spaces, and recovers interval multiplicities by
/// inclusion-exclusion on the rank function. No cone construction is
/// involved. Intended for small graphs (chain spaces are stored as 64-bit
/// masks, so at most 64 edges / 64 vertices). Attribution fields of the
/// returned points are left unset.
ExtendedDiagram oracle_extended_persistence(const Graph& g, const Eigen::VectorXd& f);

/// Multiset equality of all four quadrants with coordinates compared
/// within tol.
bool diagrams_match(const ExtendedDiagram& a, const ExtendedDiagram& b, double tol);

} // namespace wavpers

#endif // WAVPERS_PERSISTENCE_ORACLE_HPP
