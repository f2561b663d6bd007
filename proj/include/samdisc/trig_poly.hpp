#pragma once

#include <cmath>
#include <complex>
#include <fstream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "samdisc/errors.hpp"
#include "samdisc/freq_set.hpp"

namespace samdisc {

// Trigonometric polynomial f(x) = sum_{k in Q} c_k exp(i <k, x>) on the
// d-torus. Coefficients are stored in the basis order of the (canonically
// sorted) FrequencySet.
class TrigPoly {
  public:
    TrigPoly() = default;

    TrigPoly(FreqSetPtr basis, Eigen::VectorXcd coeff) : basis_(std::move(basis)), coeff_(std::move(coeff)) {
        if (!basis_) throw std::invalid_argument("TrigPoly: null basis");
        if (coeff_.size() != basis_->size()) throw std::invalid_argument("TrigPoly: coefficient count != |Q|");
    }

    static TrigPoly zero(FreqSetPtr basis) {
        Eigen::VectorXcd c = Eigen::VectorXcd::Zero(basis->size());
        return TrigPoly(std::move(basis), std::move(c));
    }

    [[nodiscard]] const FrequencySet& basis() const { return *basis_; }
    [[nodiscard]] const FreqSetPtr& basis_ptr() const { return basis_; }
    [[nodiscard]] const Eigen::VectorXcd& coeff() const { return coeff_; }
    [[nodiscard]] Eigen::VectorXcd& coeff() { return coeff_; }
    [[nodiscard]] int dim() const { return basis_->dim(); }

    [[nodiscard]] std::complex<double> evaluate(const std::vector<double>& x) const {
        if (static_cast<int>(x.size()) != basis_->dim())
            throw std::invalid_argument("TrigPoly::evaluate: point arity != dim");
        std::complex<double> acc(0.0, 0.0);
        const auto& ks = basis_->freqs();
        for (int i = 0; i < basis_->size(); ++i) {
            double phase = 0.0;
            const auto& k = ks[static_cast<std::size_t>(i)];
            for (std::size_t j = 0; j < k.size(); ++j) phase += k[j] * x[j];
            acc += coeff_[i] * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        return acc;
    }

    // Exact L2 norm w.r.t. normalized Lebesgue measure: the exponentials are
    // orthonormal, so this is just the coefficient 2-norm (Parseval).
    [[nodiscard]] double norm_l2_exact() const { return coeff_.norm(); }

    // One line per frequency: k_1 ... k_d re(c) im(c), full precision.
    void save(std::ostream& os) const {
        os.precision(17);
        const auto& ks = basis_->freqs();
        for (int i = 0; i < basis_->size(); ++i) {
            for (int v : ks[static_cast<std::size_t>(i)]) os << v << ' ';
            os << coeff_[i].real() << ' ' << coeff_[i].imag() << '\n';
        }
    }

    void save(const std::string& path) const {
        std::ofstream os(path);
        if (!os) throw io_error("cannot open for write: " + path);
        save(os);
    }

    static TrigPoly load(std::istream& is) {
        std::vector<std::vector<int>> rows;
        std::vector<std::complex<double>> cs;
        std::string line;
        int dim = -1;
        while (std::getline(is, line)) {
            if (line.empty()) continue;
            std::istringstream ls(line);
            std::vector<double> tok;
            double v;
            while (ls >> v) tok.push_back(v);
            if (tok.size() < 3) throw io_error("trig poly: need k_1..k_d re im per line");
            int d = static_cast<int>(tok.size()) - 2;
            if (dim < 0) dim = d;
            if (d != dim) throw io_error("trig poly: inconsistent arity");
            std::vector<int> k(static_cast<std::size_t>(d));
            for (int j = 0; j < d; ++j) {
                double kj = tok[static_cast<std::size_t>(j)];
                k[static_cast<std::size_t>(j)] = static_cast<int>(kj);
                if (kj != k[static_cast<std::size_t>(j)]) throw io_error("trig poly: non-integer frequency");
            }
            rows.push_back(std::move(k));
            cs.emplace_back(tok[static_cast<std::size_t>(d)], tok[static_cast<std::size_t>(d) + 1]);
        }
        if (dim < 0) throw io_error("trig poly: no data");
        // the set canonicalizes (sorts) rows; remap coefficients accordingly
        auto set = std::make_shared<FrequencySet>(dim, rows);
        if (set->size() != static_cast<int>(rows.size())) throw io_error("trig poly: duplicate frequency");
        Eigen::VectorXcd c(set->size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            auto it = std::lower_bound(set->freqs().begin(), set->freqs().end(), rows[i]);
            c[static_cast<Eigen::Index>(it - set->freqs().begin())] = cs[i];
        }
        return TrigPoly(std::move(set), std::move(c));
    }

    static TrigPoly load(const std::string& path) {
        std::ifstream is(path);
        if (!is) throw io_error("cannot open: " + path);
        return load(is);
    }

  private:
    FreqSetPtr basis_;
    Eigen::VectorXcd coeff_;
};

} // namespace samdisc
