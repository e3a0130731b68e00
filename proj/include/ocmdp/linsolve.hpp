#pragma once

#include "ocmdp/rational.hpp"

#include <map>
#include <vector>

namespace ocmdp {

/// Sparse square system A x = b over the rationals, solved by Gaussian
/// elimination in natural row order without pivoting. Intended for
/// nonsingular M-matrices (I - P restricted to transient states), whose
/// leading principal minors are all positive; a zero pivot throws.
class SparseSystem {
public:
    explicit SparseSystem(int n);

    int size() const { return static_cast<int>(rows_.size()); }
    void add(int row, int col, const Rational& v);
    void add_rhs(int row, const Rational& v);

    /// Destroys the stored system.
    std::vector<Rational> solve();

private:
    std::vector<std::map<int, Rational>> rows_;
    std::vector<Rational> rhs_;
};

/// Dense solve with pivot search; throws std::runtime_error when singular.
std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> a, std::vector<Rational> b);

}  // namespace ocmdp
