#include "ocmdp/linsolve.hpp"

#include <stdexcept>

namespace ocmdp {

SparseSystem::SparseSystem(int n) : rows_(n), rhs_(n, Rational(0)) {}

void SparseSystem::add(int row, int col, const Rational& v) {
    if (v == 0) return;
    auto& cell = rows_.at(row)[col];
    cell += v;
    if (cell == 0) rows_[row].erase(col);
}

void SparseSystem::add_rhs(int row, const Rational& v) { rhs_.at(row) += v; }

std::vector<Rational> SparseSystem::solve() {
    const int n = size();
    std::vector<std::vector<int>> below(n);
    for (int j = 0; j < n; ++j)
        for (const auto& [c, v] : rows_[j])
            if (c < j) below[c].push_back(j);

    Rational f;
    for (int i = 0; i < n; ++i) {
        auto pit = rows_[i].find(i);
        if (pit == rows_[i].end()) throw std::runtime_error("sparse solve: zero pivot at row " + std::to_string(i));
        const Rational piv = pit->second;
        for (int j : below[i]) {
            auto it = rows_[j].find(i);
            if (it == rows_[j].end()) continue;
            f = it->second / piv;
            rows_[j].erase(it);
            for (auto c = rows_[i].upper_bound(i); c != rows_[i].end(); ++c) {
                auto [cell, inserted] = rows_[j].try_emplace(c->first, 0);
                cell->second -= f * c->second;
                if (cell->second == 0)
                    rows_[j].erase(cell);
                else if (inserted && j > c->first)
                    below[c->first].push_back(j);
            }
            rhs_[j] -= f * rhs_[i];
        }
        std::vector<int>().swap(below[i]);
    }
    std::vector<Rational> x(n);
    for (int i = n - 1; i >= 0; --i) {
        Rational acc = rhs_[i];
        const Rational* diag = nullptr;
        for (const auto& [c, v] : rows_[i]) {
            if (c == i)
                diag = &v;
            else
                acc -= v * x[c];
        }
        x[i] = acc / *diag;
    }
    rows_.clear();
    rhs_.clear();
    return x;
}

std::vector<Rational> solve_dense(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
    const int n = static_cast<int>(a.size());
    for (int col = 0; col < n; ++col) {
        int piv = -1;
        for (int r = col; r < n; ++r)
            if (a[r][col] != 0) {
                piv = r;
                break;
            }
        if (piv < 0) throw std::runtime_error("dense solve: singular system");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (int r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col] / a[col][col];
            for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<Rational> x(n);
    for (int i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
    return x;
}

}  // namespace ocmdp
