#include "wavpers/folds.hpp"

#include <numeric>

#include "wavpers/errors.hpp"
#include "wavpers/rng.hpp"

namespace wavpers {

std::vector<std::vector<int>> make_folds(int n_items, int n_folds, std::uint64_t seed) {
    if (n_items < n_folds) throw data_error("make_folds: fewer items than folds");
    std::vector<int> order(n_items);
    std::iota(order.begin(), order.end(), 0);
    Rng rng(seed);
    rng.shuffle(order);

    std::vector<std::vector<int>> folds(n_folds);
    const int base = n_items / n_folds;
    const int extra = n_items % n_folds; // first `extra` folds get one more
    int at = 0;
    for (int f = 0; f < n_folds; ++f) {
        const int size = base + (f < extra ? 1 : 0);
        folds[f].assign(order.begin() + at, order.begin() + at + size);
        at += size;
    }
    return folds;
}

std::vector<std::vector<int>> make_folds(const Dataset& d, std::uint64_t seed) {
    return make_folds(d.size(), 10, seed);
}

} // namespace wavpers
