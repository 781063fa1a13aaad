#include "toricdef/linalg.hpp"

#include <stdexcept>
#include <utility>

namespace toricdef {

QMatrix QMatrix::from_int_rows(const std::vector<IntVec>& rows, std::size_t cols)
{
	QMatrix m(rows.size(), cols);
	for (std::size_t r = 0; r < rows.size(); ++r) {
		if (rows[r].size() != cols)
			throw std::invalid_argument("QMatrix: ragged integer rows");
		for (std::size_t c = 0; c < cols; ++c)
			m(r, c) = Rational(static_cast<long>(rows[r][c]));
	}
	return m;
}

QMatrix QMatrix::transposed() const
{
	QMatrix t(cols_, rows_);
	for (std::size_t r = 0; r < rows_; ++r)
		for (std::size_t c = 0; c < cols_; ++c)
			t(c, r) = (*this)(r, c);
	return t;
}

QMatrix QMatrix::operator*(const QMatrix& other) const
{
	if (cols_ != other.rows_)
		throw std::invalid_argument("QMatrix: product dimension mismatch");
	QMatrix p(rows_, other.cols_);
	for (std::size_t i = 0; i < rows_; ++i)
		for (std::size_t k = 0; k < cols_; ++k) {
			const Rational& a = (*this)(i, k);
			if (a == 0)
				continue;
			for (std::size_t j = 0; j < other.cols_; ++j)
				if (other(k, j) != 0)
					p(i, j) += a * other(k, j);
		}
	return p;
}

bool QMatrix::is_zero() const
{
	for (const auto& x : data_)
		if (x != 0)
			return false;
	return true;
}

Echelon rref(QMatrix m)
{
	std::vector<std::size_t> pivots;
	std::size_t row = 0;
	for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
		std::size_t sel = row;
		while (sel < m.rows() && m(sel, col) == 0)
			++sel;
		if (sel == m.rows())
			continue;
		if (sel != row)
			for (std::size_t c = 0; c < m.cols(); ++c)
				std::swap(m(sel, c), m(row, c));
		Rational inv = 1 / m(row, col);
		for (std::size_t c = col; c < m.cols(); ++c)
			m(row, c) *= inv;
		for (std::size_t r = 0; r < m.rows(); ++r) {
			if (r == row || m(r, col) == 0)
				continue;
			Rational f = m(r, col);
			for (std::size_t c = col; c < m.cols(); ++c)
				if (m(row, c) != 0)
					m(r, c) -= f * m(row, c);
		}
		pivots.push_back(col);
		++row;
	}
	QMatrix trimmed(row, m.cols());
	for (std::size_t r = 0; r < row; ++r)
		for (std::size_t c = 0; c < m.cols(); ++c)
			trimmed(r, c) = m(r, c);
	return {std::move(trimmed), std::move(pivots)};
}

std::size_t rank(const QMatrix& m)
{
	return rref(m).pivots.size();
}

std::vector<std::vector<Rational>> nullspace(const QMatrix& m)
{
	Echelon e = rref(m);
	std::vector<bool> is_pivot(m.cols(), false);
	for (auto p : e.pivots)
		is_pivot[p] = true;
	std::vector<std::vector<Rational>> basis;
	for (std::size_t free = 0; free < m.cols(); ++free) {
		if (is_pivot[free])
			continue;
		std::vector<Rational> v(m.cols());
		v[free] = 1;
		for (std::size_t r = 0; r < e.pivots.size(); ++r)
			v[e.pivots[r]] = -e.reduced(r, free);
		basis.push_back(std::move(v));
	}
	return basis;
}

std::optional<std::vector<Rational>> solve(const QMatrix& m, const std::vector<Rational>& b)
{
	if (b.size() != m.rows())
		throw std::invalid_argument("solve: right-hand side has wrong length");
	QMatrix aug(m.rows(), m.cols() + 1);
	for (std::size_t r = 0; r < m.rows(); ++r) {
		for (std::size_t c = 0; c < m.cols(); ++c)
			aug(r, c) = m(r, c);
		aug(r, m.cols()) = b[r];
	}
	Echelon e = rref(std::move(aug));
	std::vector<Rational> x(m.cols());
	for (std::size_t r = 0; r < e.pivots.size(); ++r) {
		if (e.pivots[r] == m.cols())
			return std::nullopt;
		x[e.pivots[r]] = e.reduced(r, m.cols());
	}
	return x;
}

std::vector<Integer> smith_invariants(const std::vector<IntVec>& rows)
{
	if (rows.empty())
		return {};
	std::size_t nr = rows.size();
	std::size_t nc = rows[0].size();
	std::vector<std::vector<Integer>> a(nr, std::vector<Integer>(nc));
	for (std::size_t r = 0; r < nr; ++r) {
		if (rows[r].size() != nc)
			throw std::invalid_argument("smith_invariants: ragged rows");
		for (std::size_t c = 0; c < nc; ++c)
			a[r][c] = static_cast<long>(rows[r][c]);
	}

	std::vector<Integer> diag;
	std::size_t t = 0;
	while (t < nr && t < nc) {
		// smallest nonzero entry in the trailing block becomes the pivot
		std::size_t pr = nr, pc = nc;
		for (std::size_t r = t; r < nr; ++r)
			for (std::size_t c = t; c < nc; ++c)
				if (a[r][c] != 0 && (pr == nr || abs(a[r][c]) < abs(a[pr][pc]))) {
					pr = r;
					pc = c;
				}
		if (pr == nr)
			break;
		std::swap(a[t], a[pr]);
		for (auto& row : a)
			std::swap(row[t], row[pc]);

		bool clean = true;
		for (std::size_t r = t + 1; r < nr; ++r) {
			Integer q = a[r][t] / a[t][t];
			if (q != 0)
				for (std::size_t c = t; c < nc; ++c)
					a[r][c] -= q * a[t][c];
			if (a[r][t] != 0)
				clean = false;
		}
		for (std::size_t c = t + 1; c < nc; ++c) {
			Integer q = a[t][c] / a[t][t];
			if (q != 0)
				for (std::size_t r = t; r < nr; ++r)
					a[r][c] -= q * a[r][t];
			if (a[t][c] != 0)
				clean = false;
		}
		if (!clean)
			continue;
		// divisibility: fold any entry not divisible by the pivot back into row t
		bool divides = true;
		for (std::size_t r = t + 1; r < nr && divides; ++r)
			for (std::size_t c = t + 1; c < nc; ++c)
				if (a[r][c] % a[t][t] != 0) {
					for (std::size_t k = t; k < nc; ++k)
						a[t][k] += a[r][k];
					divides = false;
					break;
				}
		if (!divides)
			continue;
		diag.push_back(abs(a[t][t]));
		++t;
	}
	return diag;
}

}  // namespace toricdef

namespace toricdef {

namespace {

struct Ineq {
	std::vector<Rational> coef;  // coef . y >= rhs
	Rational rhs;
};

Rational floor_q(const Rational& q)
{
	Integer f;
	mpz_fdiv_q(f.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return Rational(f);
}

Rational ceil_q(const Rational& q)
{
	Integer c;
	mpz_cdiv_q(c.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
	return Rational(c);
}

// Scale so the first nonzero coefficient has magnitude one; keeps duplicate detection cheap.
void normalize(Ineq& q)
{
	for (const auto& c : q.coef)
		if (c != 0) {
			Rational s = abs(c);
			for (auto& x : q.coef)
				x /= s;
			q.rhs /= s;
			return;
		}
}

bool same(const Ineq& a, const Ineq& b)
{
	return a.rhs == b.rhs && a.coef == b.coef;
}

std::optional<std::vector<Rational>> fourier_motzkin(std::vector<Ineq> sys, std::size_t nvars)
{
	std::vector<std::vector<Ineq>> stages;
	for (std::size_t j = nvars; j-- > 0;) {
		stages.push_back(sys);
		std::vector<Ineq> lower, upper, next;
		for (auto& q : sys) {
			if (q.coef[j] > 0)
				lower.push_back(q);
			else if (q.coef[j] < 0)
				upper.push_back(q);
			else
				next.push_back(q);
		}
		for (const auto& lo : lower)
			for (const auto& up : upper) {
				Ineq c;
				c.coef.resize(nvars);
				Rational a = -up.coef[j], b = lo.coef[j];
				for (std::size_t k = 0; k < nvars; ++k)
					c.coef[k] = a * lo.coef[k] + b * up.coef[k];
				c.coef[j] = 0;
				c.rhs = a * lo.rhs + b * up.rhs;
				normalize(c);
				bool dup = false;
				for (const auto& e : next)
					if (same(e, c)) {
						dup = true;
						break;
					}
				if (!dup)
					next.push_back(std::move(c));
			}
		sys = std::move(next);
	}
	for (const auto& q : sys)
		if (q.rhs > 0)
			return std::nullopt;

	std::vector<Rational> y(nvars);
	for (std::size_t j = 0; j < nvars; ++j) {
		const auto& stage = stages[nvars - 1 - j];
		std::optional<Rational> lo, hi;
		for (const auto& q : stage) {
			if (q.coef[j] == 0)
				continue;
			Rational rest = q.rhs;
			for (std::size_t k = 0; k < j; ++k)
				rest -= q.coef[k] * y[k];
			Rational bound = rest / q.coef[j];
			if (q.coef[j] > 0) {
				if (!lo || bound > *lo)
					lo = bound;
			} else if (!hi || bound < *hi) {
				hi = bound;
			}
		}
		Rational v = 0;
		if (lo && hi) {
			Rational c = ceil_q(*lo), f = floor_q(*hi);
			if (c <= f)
				v = (c <= 0 && f >= 0) ? Rational(0) : (c > 0 ? c : f);
			else
				v = (*lo + *hi) / 2;
		} else if (lo) {
			v = *lo > 0 ? ceil_q(*lo) : Rational(0);
		} else if (hi) {
			v = *hi < 0 ? floor_q(*hi) : Rational(0);
		}
		y[j] = v;
	}
	return y;
}

}  // namespace

std::optional<std::vector<Rational>> find_feasible(const QMatrix& a, const std::vector<Rational>& b,
                                                   const QMatrix& g, const std::vector<Rational>& h)
{
	std::size_t n = a.rows() ? a.cols() : g.cols();
	// parametrize the affine solution space: x = x0 + N y
	std::vector<Rational> x0(n);
	std::vector<std::vector<Rational>> basis;
	if (a.rows() > 0) {
		auto sol = solve(a, b);
		if (!sol)
			return std::nullopt;
		x0 = *sol;
		basis = nullspace(a);
	} else {
		for (std::size_t i = 0; i < n; ++i) {
			std::vector<Rational> e(n);
			e[i] = 1;
			basis.push_back(std::move(e));
		}
	}
	std::size_t k = basis.size();
	std::vector<Ineq> sys;
	for (std::size_t r = 0; r < g.rows(); ++r) {
		Ineq q;
		q.coef.resize(k);
		q.rhs = h[r];
		for (std::size_t c = 0; c < n; ++c)
			q.rhs -= g(r, c) * x0[c];
		for (std::size_t j = 0; j < k; ++j)
			for (std::size_t c = 0; c < n; ++c)
				if (g(r, c) != 0)
					q.coef[j] += g(r, c) * basis[j][c];
		normalize(q);
		sys.push_back(std::move(q));
	}
	auto y = fourier_motzkin(std::move(sys), k);
	if (!y)
		return std::nullopt;
	std::vector<Rational> x = x0;
	for (std::size_t j = 0; j < k; ++j)
		for (std::size_t c = 0; c < n; ++c)
			x[c] += (*y)[j] * basis[j][c];
	return x;
}

}  // namespace toricdef
