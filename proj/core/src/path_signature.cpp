#include "wavpers/path_signature.hpp"

#include <map>
#include <string>

#include "wavpers/errors.hpp"

namespace wavpers {

TruncatedTensor tensor_mul(const TruncatedTensor& x, const TruncatedTensor& y) {
    TruncatedTensor out;
    for (int lx = 0; lx <= TruncatedTensor::kLevels; ++lx) {
        for (int ly = 0; lx + ly <= TruncatedTensor::kLevels; ++ly) {
            const int lo = lx + ly;
            for (int wx = 0; wx < TruncatedTensor::level_size(lx); ++wx) {
                const double xv = x.at(lx, wx);
                if (xv == 0.0) continue;
                for (int wy = 0; wy < TruncatedTensor::level_size(ly); ++wy) {
                    out.at(lo, (wx << ly) | wy) += xv * y.at(ly, wy);
                }
            }
        }
    }
    return out;
}

TruncatedTensor tensor_exp_segment(double a, double b) {
    TruncatedTensor out;
    out.c[0] = 1.0;
    double factorial = 1.0;
    for (int level = 1; level <= TruncatedTensor::kLevels; ++level) {
        factorial *= level;
        for (int word = 0; word < TruncatedTensor::level_size(level); ++word) {
            double prod = 1.0;
            for (int pos = 0; pos < level; ++pos)
                prod *= (word >> (level - 1 - pos)) & 1 ? b : a;
            out.at(level, word) = prod / factorial;
        }
    }
    return out;
}

TruncatedTensor tensor_log(const TruncatedTensor& x) {
    if (x.c[0] != 1.0) throw numerical_error("tensor_log: scalar part must be 1");
    TruncatedTensor z = x;
    z.c[0] = 0.0;
    // log(1+z) = z - z^2/2 + z^3/3 - z^4/4; z is nilpotent past level 4
    TruncatedTensor out = z;
    TruncatedTensor power = z;
    const double signs[3] = {-0.5, 1.0 / 3.0, -0.25};
    for (int k = 0; k < 3; ++k) {
        power = tensor_mul(power, z);
        for (int i = 0; i < TruncatedTensor::kSize; ++i) out.c[i] += signs[k] * power.c[i];
    }
    return out;
}

TruncatedTensor signature(const std::vector<std::array<double, 2>>& path) {
    TruncatedTensor sig = TruncatedTensor::one();
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const double a = path[i + 1][0] - path[i][0];
        const double b = path[i + 1][1] - path[i][1];
        sig = tensor_mul(sig, tensor_exp_segment(a, b));
    }
    return sig;
}

namespace {

using WordCoeffs = std::map<std::string, double>; // letters '0' and '1'

bool is_lyndon(const std::string& w) {
    for (std::size_t i = 1; i < w.size(); ++i)
        if (w.substr(i) <= w) return false;
    return true;
}

/// Standard factorisation bracketing: split at the longest proper Lyndon
/// suffix, recurse, expand commutators into words.
WordCoeffs bracket_expansion(const std::string& w) {
    if (w.size() == 1) return {{w, 1.0}};
    std::size_t split = 1;
    for (std::size_t i = 1; i < w.size(); ++i) {
        if (is_lyndon(w.substr(i))) {
            split = i;
            break;
        }
    }
    const WordCoeffs left = bracket_expansion(w.substr(0, split));
    const WordCoeffs right = bracket_expansion(w.substr(split));
    WordCoeffs out;
    for (const auto& [u, cu] : left)
        for (const auto& [v, cv] : right) {
            out[u + v] += cu * cv;
            out[v + u] -= cu * cv;
        }
    return out;
}

std::vector<std::string> lyndon_words(int level) {
    std::vector<std::string> words;
    for (int value = 0; value < (1 << level); ++value) {
        std::string w(level, '0');
        for (int pos = 0; pos < level; ++pos)
            if ((value >> (level - 1 - pos)) & 1) w[pos] = '1';
        if (is_lyndon(w)) words.push_back(w);
    }
    return words; // already lexicographic
}

int word_index(const std::string& w) {
    int v = 0;
    for (char ch : w) v = (v << 1) | (ch == '1');
    return v;
}

/// Solves the tiny normal-equations system A^T A c = A^T t in place.
Eigen::VectorXd solve_normal(const Eigen::MatrixXd& a, const Eigen::VectorXd& t) {
    Eigen::MatrixXd ata = a.transpose() * a;
    Eigen::VectorXd atb = a.transpose() * t;
    const int n = static_cast<int>(ata.rows());
    // Gaussian elimination with partial pivoting
    for (int col = 0; col < n; ++col) {
        int piv = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(ata(r, col)) > std::abs(ata(piv, col))) piv = r;
        ata.row(col).swap(ata.row(piv));
        std::swap(atb[col], atb[piv]);
        if (ata(col, col) == 0.0) throw numerical_error("lyndon projection: singular system");
        for (int r = 0; r < n; ++r) {
            if (r == col) continue;
            const double factor = ata(r, col) / ata(col, col);
            ata.row(r) -= factor * ata.row(col);
            atb[r] -= factor * atb[col];
        }
    }
    Eigen::VectorXd c(n);
    for (int i = 0; i < n; ++i) c[i] = atb[i] / ata(i, i);
    return c;
}

} // namespace

Eigen::VectorXd lyndon_coordinates(const TruncatedTensor& lie) {
    std::vector<double> coords;
    coords.reserve(8);
    for (int level = 1; level <= TruncatedTensor::kLevels; ++level) {
        const auto words = lyndon_words(level);
        const int n_words = TruncatedTensor::level_size(level);
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n_words, static_cast<int>(words.size()));
        for (std::size_t j = 0; j < words.size(); ++j)
            for (const auto& [w, coeff] : bracket_expansion(words[j]))
                a(word_index(w), static_cast<int>(j)) = coeff;
        Eigen::VectorXd t(n_words);
        for (int w = 0; w < n_words; ++w) t[w] = lie.at(level, w);
        const Eigen::VectorXd c = solve_normal(a, t);
        for (int j = 0; j < c.size(); ++j) coords.push_back(c[j]);
    }
    Eigen::VectorXd out(static_cast<int>(coords.size()));
    for (std::size_t i = 0; i < coords.size(); ++i) out[static_cast<int>(i)] = coords[i];
    return out;
}

EigenPath eigen_path(const SpectralData& s, PathMode mode) {
    const int n = s.n();
    if (n < 2) throw numerical_error("eigen_path: need at least two eigenvalues");
    EigenPath p;
    if (mode == PathMode::delay) {
        p.points.reserve(n - 1);
        for (int j = 0; j + 1 < n; ++j)
            p.points.push_back({s.eigenvalues[j], s.eigenvalues[j + 1]});
    } else {
        p.points.reserve(n);
        for (int j = 0; j < n; ++j)
            p.points.push_back({s.eigenvalues[j], 2.0 * j / (n - 1)});
    }
    return p;
}

Eigen::VectorXd log_signature(const EigenPath& p) {
    if (p.points.empty()) throw numerical_error("log_signature: empty path");
    return lyndon_coordinates(tensor_log(signature(p.points)));
}

} // namespace wavpers
