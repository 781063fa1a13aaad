#pragma once

#include "toricdef/rational.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace toricdef {

// Dense row-major matrix over Q. Sizes here stay in the hundreds.
class QMatrix {
public:
	QMatrix() = default;
	QMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}

	static QMatrix from_int_rows(const std::vector<IntVec>& rows, std::size_t cols);

	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	Rational& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
	const Rational& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

	QMatrix transposed() const;
	QMatrix operator*(const QMatrix& other) const;
	bool is_zero() const;

private:
	std::size_t rows_ = 0;
	std::size_t cols_ = 0;
	std::vector<Rational> data_;
};

struct Echelon {
	QMatrix reduced;               // reduced row echelon form, zero rows trimmed
	std::vector<std::size_t> pivots;  // pivot column per row
};

Echelon rref(QMatrix m);
std::size_t rank(const QMatrix& m);

// Basis of {x : m x = 0}, one vector per free column.
std::vector<std::vector<Rational>> nullspace(const QMatrix& m);

// Some x with m x = b, or nullopt if inconsistent.
std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b);

// A point of {x : a x = b, g x >= h} found by Gaussian elimination followed by
// Fourier-Motzkin on the free parameters. Intended for a handful of variables.
std::optional<std::vector<Rational>> find_feasible(const QMatrix& a, const std::vector<Rational>& b,
                                                   const QMatrix& g, const std::vector<Rational>& h);

// Invariant factors of an integer matrix (nonzero diagonal of the Smith form).
std::vector<Integer> smith_invariants(const std::vector<IntVec>& rows);

}  // namespace toricdef
