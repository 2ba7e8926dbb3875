#ifndef WAVPERS_FOLDS_HPP
#define WAVPERS_FOLDS_HPP

#include <cstdint>
#include <vector>

#include "wavpers/graph.hpp"

namespace wavpers {

/// Random partition of n items into n_folds disjoint index sets whose sizes
/// differ by at most one. Deterministic per seed.
std::vector<std::vector<int>> make_folds(int n_items, int n_folds, std::uint64_t seed);

/// Ten folds over the dataset's graphs.
std::vector<std::vector<int>> make_folds(const Dataset& d, std::uint64_t seed);

} // namespace wavpers

#endif // WAVPERS_FOLDS_HPP
