#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "samdisc/errors.hpp"

namespace samdisc {

// Finite set of integer frequency vectors; the index set Q of a trigonometric
// subspace T(Q) = span{ exp(i <k,x>) : k in Q }. Rows are kept sorted
// lexicographically and unique, so every construction of the same set yields
// the same basis ordering (coefficient vectors are comparable across runs).
class FrequencySet {
  public:
    FrequencySet() = default;

    FrequencySet(int dim, std::vector<std::vector<int>> freqs) : dim_(dim), freqs_(std::move(freqs)) {
        for (const auto& k : freqs_)
            if (static_cast<int>(k.size()) != dim_)
                throw std::invalid_argument("FrequencySet: frequency arity does not match dim");
        canonicalize();
    }

    [[nodiscard]] int dim() const { return dim_; }
    [[nodiscard]] int size() const { return static_cast<int>(freqs_.size()); }
    [[nodiscard]] const std::vector<std::vector<int>>& freqs() const { return freqs_; }
    [[nodiscard]] const std::vector<int>& at(int i) const { return freqs_[static_cast<std::size_t>(i)]; }

    // Largest |k_j| over all frequencies and coordinates; 0 for {0} or empty.
    [[nodiscard]] int kmax() const {
        int m = 0;
        for (const auto& k : freqs_)
            for (int v : k) m = std::max(m, std::abs(v));
        return m;
    }

    [[nodiscard]] bool contains(const std::vector<int>& k) const {
        return std::binary_search(freqs_.begin(), freqs_.end(), k);
    }

    // True when Q = -Q (needed to form the real cosine/sine system).
    [[nodiscard]] bool symmetric() const {
        std::vector<int> neg;
        for (const auto& k : freqs_) {
            neg.resize(k.size());
            for (std::size_t j = 0; j < k.size(); ++j) neg[j] = -k[j];
            if (!contains(neg)) return false;
        }
        return true;
    }

    bool operator==(const FrequencySet& o) const { return dim_ == o.dim_ && freqs_ == o.freqs_; }

    // One frequency vector per line, coordinates space-separated.
    void save(std::ostream& os) const {
        for (const auto& k : freqs_) {
            for (std::size_t j = 0; j < k.size(); ++j) os << (j ? " " : "") << k[j];
            os << '\n';
        }
    }

    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw io_error("cannot open for write: " + path);
        save(os);
    }

    static FrequencySet load(std::istream& is) {
        std::vector<std::vector<int>> rows;
        std::string line;
        int dim = -1;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::vector<int> k;
            int v;
            while (ls >> v) k.push_back(v);
            if (!ls.eof()) throw io_error("frequency set: non-integer token in line '" + line + "'");
            if (k.empty()) continue;
            if (dim < 0) dim = static_cast<int>(k.size());
            if (static_cast<int>(k.size()) != dim) throw io_error("frequency set: inconsistent arity");
            rows.push_back(std::move(k));
        }
        if (dim < 0) throw io_error("frequency set: no data");
        return FrequencySet(dim, std::move(rows));
    }

    static FrequencySet load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw io_error("cannot open: " + path);
        return load(is);
    }

  private:
    void canonicalize() {
        std::sort(freqs_.begin(), freqs_.end());
        freqs_.erase(std::unique(freqs_.begin(), freqs_.end()), freqs_.end());
    }

    int dim_ = 1;
    std::vector<std::vector<int>> freqs_;
};

using FreqSetPtr = std::shared_ptr<const FrequencySet>;

inline FreqSetPtr share(FrequencySet set) {
    return std::make_shared<const FrequencySet>(std::move(set));
}

// Per-coordinate slice of a dyadic block: s = 0 gives {0}; s >= 1 gives
// 2^{s-1} <= |k| < 2^s (both signs).
inline std::vector<int> dyadic_coordinate_range(int s) {
    if (s < 0) throw std::domain_error("dyadic_coordinate_range: s must be >= 0");
    if (s == 0) return {0};
    int lo = 1 << (s - 1), hi = 1 << s;
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(hi));
    for (int v = -hi + 1; v <= -lo; ++v) out.push_back(v);
    for (int v = lo; v < hi; ++v) out.push_back(v);
    return out;
}

// Dyadic block rho(s) for a multi-index s: the tensor product of the
// per-coordinate slices above.
inline FrequencySet rho_block(const std::vector<int>& s) {
    const int d = static_cast<int>(s.size());
    if (d == 0) throw std::domain_error("rho_block: empty multi-index");
    std::vector<std::vector<int>> axes;
    axes.reserve(static_cast<std::size_t>(d));
    std::size_t total = 1;
    for (int sj : s) {
        axes.push_back(dyadic_coordinate_range(sj));
        total *= axes.back().size();
    }
    std::vector<std::vector<int>> rows;
    rows.reserve(total);
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    std::vector<int> k(static_cast<std::size_t>(d));
    for (;;) {
        for (int j = 0; j < d; ++j) k[static_cast<std::size_t>(j)] = axes[static_cast<std::size_t>(j)][idx[static_cast<std::size_t>(j)]];
        rows.push_back(k);
        int j = d - 1;
        while (j >= 0 && ++idx[static_cast<std::size_t>(j)] == axes[static_cast<std::size_t>(j)].size()) {
            idx[static_cast<std::size_t>(j)] = 0;
            --j;
        }
        if (j < 0) break;
    }
    return FrequencySet(d, std::move(rows));
}

// Hyperbolic cross Q_n: union of rho(s) over ||s||_1 <= n, s in Z_+^d.
inline FrequencySet hyperbolic_cross(int d, int n) {
    if (d < 1) throw std::domain_error("hyperbolic_cross: d must be >= 1");
    if (n < 0) throw std::domain_error("hyperbolic_cross: n must be >= 0");
    std::vector<std::vector<int>> rows;
    std::vector<int> s(static_cast<std::size_t>(d), 0);
    // enumerate multi-indices with sum <= n
    auto recurse = [&](auto&& self, int pos, int budget) -> void {
        if (pos == d) {
            FrequencySet block = rho_block(s);
            rows.insert(rows.end(), block.freqs().begin(), block.freqs().end());
            return;
        }
        for (int v = 0; v <= budget; ++v) {
            s[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, budget - v);
        }
    };
    recurse(recurse, 0, n);
    return FrequencySet(d, std::move(rows));
}

// |Q_n| without materializing the set: sum over ||s||_1 <= n of the block
// sizes prod_j r(s_j), r(0) = 1, r(s) = 2^s, folded one coordinate at a time.
inline std::uint64_t hyperbolic_cross_cardinality(int d, int n) {
    if (d < 1) throw std::domain_error("hyperbolic_cross_cardinality: d must be >= 1");
    if (n < 0) throw std::domain_error("hyperbolic_cross_cardinality: n must be >= 0");
    auto block_size = [](int s) -> std::uint64_t { return s == 0 ? 1ull : (1ull << s); };
    // counts[t] = total block mass of multi-indices with ||s||_1 = t
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(n) + 1, 0);
    counts[0] = 1;
    for (int axis = 0; axis < d; ++axis) {
        std::vector<std::uint64_t> next(static_cast<std::size_t>(n) + 1, 0);
        for (int t = 0; t <= n; ++t)
            for (int v = 0; v + t <= n; ++v)
                next[static_cast<std::size_t>(t + v)] += counts[static_cast<std::size_t>(t)] * block_size(v);
        counts.swap(next);
    }
    std::uint64_t total = 0;
    for (int t = 0; t <= n; ++t) total += counts[static_cast<std::size_t>(t)];
    return total;
}

// Tensor box {-n..n}^d (univariate boxes are the common case in tests).
inline FrequencySet frequency_box(int d, int n) {
    if (d < 1 || n < 0) throw std::domain_error("frequency_box: need d >= 1, n >= 0");
    std::vector<std::vector<int>> rows;
    std::vector<int> k(static_cast<std::size_t>(d), -n);
    for (;;) {
        rows.push_back(k);
        int j = d - 1;
        while (j >= 0 && ++k[static_cast<std::size_t>(j)] > n) {
            k[static_cast<std::size_t>(j)] = -n;
            --j;
        }
        if (j < 0) break;
    }
    return FrequencySet(d, std::move(rows));
}

} // namespace samdisc
