#pragma once

// Dense linear algebra over a prime field F_p.
//
// Vectors are std::vector<int> with entries reduced into [0, p). Matrices act
// on column vectors; a Subspace stores its basis as the rows of a matrix in
// reduced row echelon form, so equal subspaces compare equal structurally.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dnalg {

using Vec = std::vector<int>;

class DimensionError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

inline bool is_prime(long n)
{
	if (n < 2)
		return false;
	for (long d = 2; d * d <= n; ++d)
		if (n % d == 0)
			return false;
	return true;
}

inline int mod_p(long long v, int p)
{
	long long r = v % p;
	return static_cast<int>(r < 0 ? r + p : r);
}

inline int inverse_mod(int a, int p)
{
	// p is prime, so a^(p-2) is the inverse.
	a = mod_p(a, p);
	if (a == 0)
		throw std::domain_error("inverse of zero in F_p");
	long long result = 1, base = a;
	for (int e = p - 2; e > 0; e >>= 1) {
		if (e & 1)
			result = result * base % p;
		base = base * base % p;
	}
	return static_cast<int>(result);
}

inline int pow_mod(long long base, long long e, int p)
{
	long long result = 1;
	base = mod_p(base, p);
	for (; e > 0; e >>= 1) {
		if (e & 1)
			result = result * base % p;
		base = base * base % p;
	}
	return static_cast<int>(result);
}

/// An element of F_p carrying its modulus.
struct FpScalar {
	int value = 0;
	int modulus = 3;

	FpScalar() = default;
	FpScalar(long long v, int p) : value(mod_p(v, p)), modulus(p) {}

	friend FpScalar operator+(FpScalar a, FpScalar b) { return {static_cast<long long>(a.value) + b.value, a.check(b)}; }
	friend FpScalar operator-(FpScalar a, FpScalar b) { return {static_cast<long long>(a.value) - b.value, a.check(b)}; }
	friend FpScalar operator*(FpScalar a, FpScalar b) { return {static_cast<long long>(a.value) * b.value, a.check(b)}; }
	FpScalar operator-() const { return {-static_cast<long long>(value), modulus}; }
	FpScalar inverse() const { return {inverse_mod(value, modulus), modulus}; }
	friend bool operator==(const FpScalar&, const FpScalar&) = default;

private:
	int check(const FpScalar& o) const
	{
		if (o.modulus != modulus)
			throw DimensionError("F_p scalars with different moduli");
		return modulus;
	}
};

class FpMatrix {
public:
	FpMatrix() = default;
	FpMatrix(int p, std::size_t rows, std::size_t cols) : p_(p), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

	static FpMatrix identity(int p, std::size_t n)
	{
		FpMatrix m(p, n, n);
		for (std::size_t i = 0; i < n; ++i)
			m(i, i) = 1;
		return m;
	}

	static FpMatrix from_rows(int p, const std::vector<Vec>& rows, std::size_t cols)
	{
		FpMatrix m(p, rows.size(), cols);
		for (std::size_t i = 0; i < rows.size(); ++i) {
			if (rows[i].size() != cols)
				throw DimensionError("row length mismatch");
			for (std::size_t j = 0; j < cols; ++j)
				m(i, j) = mod_p(rows[i][j], p);
		}
		return m;
	}

	static FpMatrix from_columns(int p, const std::vector<Vec>& columns, std::size_t rows)
	{
		FpMatrix m(p, rows, columns.size());
		for (std::size_t j = 0; j < columns.size(); ++j) {
			if (columns[j].size() != rows)
				throw DimensionError("column length mismatch");
			for (std::size_t i = 0; i < rows; ++i)
				m(i, j) = mod_p(columns[j][i], p);
		}
		return m;
	}

	int prime() const { return p_; }
	std::size_t rows() const { return rows_; }
	std::size_t cols() const { return cols_; }

	int& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
	int operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

	Vec row(std::size_t i) const { return Vec(data_.begin() + static_cast<std::ptrdiff_t>(i * cols_), data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_)); }
	Vec column(std::size_t j) const
	{
		Vec v(rows_);
		for (std::size_t i = 0; i < rows_; ++i)
			v[i] = (*this)(i, j);
		return v;
	}

	bool is_zero() const
	{
		return std::all_of(data_.begin(), data_.end(), [](int v) { return v == 0; });
	}

	FpMatrix transpose() const
	{
		FpMatrix t(p_, cols_, rows_);
		for (std::size_t i = 0; i < rows_; ++i)
			for (std::size_t j = 0; j < cols_; ++j)
				t(j, i) = (*this)(i, j);
		return t;
	}

	Vec apply(const Vec& x) const
	{
		if (x.size() != cols_)
			throw DimensionError("matrix-vector size mismatch");
		Vec y(rows_, 0);
		for (std::size_t i = 0; i < rows_; ++i) {
			long long s = 0;
			for (std::size_t j = 0; j < cols_; ++j)
				s += static_cast<long long>((*this)(i, j)) * x[j];
			y[i] = mod_p(s, p_);
		}
		return y;
	}

	friend FpMatrix operator*(const FpMatrix& a, const FpMatrix& b)
	{
		if (a.cols_ != b.rows_ || a.p_ != b.p_)
			throw DimensionError("matrix product shape mismatch");
		FpMatrix c(a.p_, a.rows_, b.cols_);
		for (std::size_t i = 0; i < a.rows_; ++i)
			for (std::size_t k = 0; k < a.cols_; ++k) {
				long long aik = a(i, k);
				if (aik == 0)
					continue;
				for (std::size_t j = 0; j < b.cols_; ++j)
					c(i, j) = mod_p(c(i, j) + aik * b(k, j), a.p_);
			}
		return c;
	}

	friend bool operator==(const FpMatrix&, const FpMatrix&) = default;

	friend std::ostream& operator<<(std::ostream& os, const FpMatrix& m)
	{
		os << '[';
		for (std::size_t i = 0; i < m.rows_; ++i) {
			os << (i ? ",[" : "[");
			for (std::size_t j = 0; j < m.cols_; ++j)
				os << (j ? "," : "") << m(i, j);
			os << ']';
		}
		return os << ']';
	}

private:
	int p_ = 3;
	std::size_t rows_ = 0, cols_ = 0;
	std::vector<int> data_;
};

struct RowEchelon {
	FpMatrix reduced;
	std::vector<std::size_t> pivots;  // pivot column of each nonzero row
};

/// Reduced row echelon form by Gauss-Jordan elimination.
inline RowEchelon rref(FpMatrix m)
{
	const int p = m.prime();
	std::vector<std::size_t> pivots;
	std::size_t r = 0;
	for (std::size_t c = 0; c < m.cols() && r < m.rows(); ++c) {
		std::size_t piv = r;
		while (piv < m.rows() && m(piv, c) == 0)
			++piv;
		if (piv == m.rows())
			continue;
		if (piv != r)
			for (std::size_t j = 0; j < m.cols(); ++j)
				std::swap(m(piv, j), m(r, j));
		const long long inv = inverse_mod(m(r, c), p);
		for (std::size_t j = c; j < m.cols(); ++j)
			m(r, j) = mod_p(m(r, j) * inv, p);
		for (std::size_t i = 0; i < m.rows(); ++i) {
			if (i == r || m(i, c) == 0)
				continue;
			const long long f = m(i, c);
			for (std::size_t j = c; j < m.cols(); ++j)
				m(i, j) = mod_p(m(i, j) - f * m(r, j), p);
		}
		pivots.push_back(c);
		++r;
	}
	return {std::move(m), std::move(pivots)};
}

inline std::size_t rank(const FpMatrix& m) { return rref(m).pivots.size(); }

class Subspace {
public:
	Subspace() = default;

	static Subspace zero(int p, std::size_t ambient) { return Subspace(p, ambient, FpMatrix(p, 0, ambient)); }
	static Subspace full(int p, std::size_t ambient) { return Subspace(p, ambient, FpMatrix::identity(p, ambient)); }

	static Subspace span(int p, std::size_t ambient, const std::vector<Vec>& vectors)
	{
		return from_generators(FpMatrix::from_rows(p, vectors, ambient));
	}

	/// Row space of `generators`.
	static Subspace from_generators(const FpMatrix& generators)
	{
		RowEchelon e = rref(generators);
		FpMatrix basis(generators.prime(), e.pivots.size(), generators.cols());
		for (std::size_t i = 0; i < e.pivots.size(); ++i)
			for (std::size_t j = 0; j < generators.cols(); ++j)
				basis(i, j) = e.reduced(i, j);
		return Subspace(generators.prime(), generators.cols(), std::move(basis));
	}

	/// Column space (image) of a linear map.
	static Subspace image(const FpMatrix& map) { return from_generators(map.transpose()); }

	int prime() const { return p_; }
	std::size_t ambient_dim() const { return ambient_; }
	std::size_t dim() const { return basis_.rows(); }
	const FpMatrix& basis() const { return basis_; }
	std::vector<Vec> vectors() const
	{
		std::vector<Vec> out;
		for (std::size_t i = 0; i < basis_.rows(); ++i)
			out.push_back(basis_.row(i));
		return out;
	}

	/// Reduce `v` against the echelon basis; the result is zero iff v lies in the span.
	Vec residue(Vec v) const
	{
		if (v.size() != ambient_)
			throw DimensionError("vector length does not match ambient dimension");
		for (std::size_t i = 0; i < basis_.rows(); ++i) {
			std::size_t pc = pivot(i);
			const long long f = v[pc];
			if (f == 0)
				continue;
			for (std::size_t j = pc; j < ambient_; ++j)
				v[j] = mod_p(v[j] - f * basis_(i, j), p_);
		}
		return v;
	}

	bool contains(const Vec& v) const
	{
		Vec r = residue(v);
		return std::all_of(r.begin(), r.end(), [](int x) { return x == 0; });
	}

	bool includes(const Subspace& other) const
	{
		check_compatible(other);
		for (std::size_t i = 0; i < other.dim(); ++i)
			if (!contains(other.basis_.row(i)))
				return false;
		return true;
	}

	friend Subspace operator+(const Subspace& u, const Subspace& v)
	{
		u.check_compatible(v);
		std::vector<Vec> rows = u.vectors();
		for (auto& r : v.vectors())
			rows.push_back(std::move(r));
		return span(u.p_, u.ambient_, rows);
	}

	/// Zassenhaus: row-reduce [[U U],[V 0]]; rows with vanishing left half span U ∩ V.
	friend Subspace intersection(const Subspace& u, const Subspace& v)
	{
		u.check_compatible(v);
		const std::size_t n = u.ambient_;
		FpMatrix z(u.p_, u.dim() + v.dim(), 2 * n);
		for (std::size_t i = 0; i < u.dim(); ++i)
			for (std::size_t j = 0; j < n; ++j)
				z(i, j) = z(i, n + j) = u.basis_(i, j);
		for (std::size_t i = 0; i < v.dim(); ++i)
			for (std::size_t j = 0; j < n; ++j)
				z(u.dim() + i, j) = v.basis_(i, j);
		RowEchelon e = rref(z);
		std::vector<Vec> rows;
		for (std::size_t i = 0; i < e.pivots.size(); ++i)
			if (e.pivots[i] >= n) {
				Vec r(n);
				for (std::size_t j = 0; j < n; ++j)
					r[j] = e.reduced(i, n + j);
				rows.push_back(std::move(r));
			}
		return span(u.p_, n, rows);
	}

	friend bool operator==(const Subspace&, const Subspace&) = default;

private:
	Subspace(int p, std::size_t ambient, FpMatrix basis) : p_(p), ambient_(ambient), basis_(std::move(basis)) {}

	std::size_t pivot(std::size_t i) const
	{
		std::size_t j = 0;
		while (basis_(i, j) == 0)
			++j;
		return j;
	}

	void check_compatible(const Subspace& o) const
	{
		if (o.p_ != p_ || o.ambient_ != ambient_)
			throw DimensionError("subspaces live in different ambient spaces");
	}

	int p_ = 3;
	std::size_t ambient_ = 0;
	FpMatrix basis_;
};

struct SolveResult {
	std::optional<Vec> particular;
	Subspace nullspace;
};

/// All solutions of M x = b: a particular solution (if any) and ker M.
inline SolveResult solve(const FpMatrix& m, const Vec& b)
{
	if (b.size() != m.rows())
		throw DimensionError("right-hand side length must equal the row count");
	const int p = m.prime();
	const std::size_t n = m.cols();
	FpMatrix aug(p, m.rows(), n + 1);
	for (std::size_t i = 0; i < m.rows(); ++i) {
		for (std::size_t j = 0; j < n; ++j)
			aug(i, j) = m(i, j);
		aug(i, n) = mod_p(b[i], p);
	}
	RowEchelon e = rref(aug);

	std::vector<bool> is_pivot(n, false);
	bool consistent = true;
	for (std::size_t pc : e.pivots) {
		if (pc == n)
			consistent = false;
		else
			is_pivot[pc] = true;
	}

	std::vector<Vec> kernel;
	for (std::size_t f = 0; f < n; ++f) {
		if (is_pivot[f])
			continue;
		Vec k(n, 0);
		k[f] = 1;
		for (std::size_t i = 0; i < e.pivots.size(); ++i)
			if (e.pivots[i] < n)
				k[e.pivots[i]] = mod_p(-e.reduced(i, f), p);
		kernel.push_back(std::move(k));
	}

	SolveResult out{std::nullopt, Subspace::span(p, n, kernel)};
	if (consistent) {
		Vec x(n, 0);
		for (std::size_t i = 0; i < e.pivots.size(); ++i)
			x[e.pivots[i]] = e.reduced(i, n);
		out.particular = std::move(x);
	}
	return out;
}

inline Subspace kernel(const FpMatrix& m) { return solve(m, Vec(m.rows(), 0)).nullspace; }

/// Inverse of a square invertible matrix; std::nullopt when singular.
inline std::optional<FpMatrix> inverse(const FpMatrix& m)
{
	if (m.rows() != m.cols())
		throw DimensionError("inverse of a non-square matrix");
	const std::size_t n = m.rows();
	FpMatrix aug(m.prime(), n, 2 * n);
	for (std::size_t i = 0; i < n; ++i) {
		for (std::size_t j = 0; j < n; ++j)
			aug(i, j) = m(i, j);
		aug(i, n + i) = 1;
	}
	RowEchelon e = rref(aug);
	if (e.pivots.size() < n || (n > 0 && e.pivots[n - 1] != n - 1))
		return std::nullopt;
	FpMatrix inv(m.prime(), n, n);
	for (std::size_t i = 0; i < n; ++i)
		for (std::size_t j = 0; j < n; ++j)
			inv(i, j) = e.reduced(i, n + j);
	return inv;
}

// --- chains of linear maps (type A quiver representations) ---------------

/// V_0 -> V_1 -> ... -> V_k with maps[i] : V_i -> V_{i+1}.
struct ChainRep {
	int p = 3;
	std::vector<std::size_t> dims;
	std::vector<FpMatrix> maps;

	void validate() const
	{
		if (dims.empty() ? !maps.empty() : maps.size() + 1 != dims.size())
			throw DimensionError("a chain on k+1 spaces needs k maps");
		for (std::size_t i = 0; i < maps.size(); ++i)
			if (maps[i].cols() != dims[i] || maps[i].rows() != dims[i + 1] || maps[i].prime() != p)
				throw DimensionError("chain map " + std::to_string(i) + " has the wrong shape");
	}

	/// f_{j-1} ∘ ... ∘ f_i : V_i -> V_j  (identity when i == j).
	FpMatrix composite(std::size_t i, std::size_t j) const
	{
		FpMatrix c = FpMatrix::identity(p, dims[i]);
		for (std::size_t s = i; s < j; ++s)
			c = maps[s] * c;
		return c;
	}
};

struct ChainIntervalForm {
	std::vector<FpMatrix> bases;  // columns: new basis of V_i in old coordinates
	std::vector<FpMatrix> maps;   // f_i expressed in the new bases
};

/// True when each column has at most one nonzero entry, equal to 1, and no
/// two columns share a row.
inline bool is_partial_permutation(const FpMatrix& m)
{
	std::vector<bool> hit(m.rows(), false);
	for (std::size_t j = 0; j < m.cols(); ++j) {
		int nonzero = 0;
		for (std::size_t i = 0; i < m.rows(); ++i) {
			if (m(i, j) == 0)
				continue;
			if (m(i, j) != 1 || hit[i] || ++nonzero > 1)
				return false;
			hit[i] = true;
		}
	}
	return true;
}

namespace detail {

inline Vec leading_order_key(const Vec& v, bool carried)
{
	// Pivot position first, vectors arriving from the left before fresh ones.
	std::size_t lead = 0;
	while (lead < v.size() && v[lead] == 0)
		++lead;
	Vec key{static_cast<int>(lead), carried ? 0 : 1};
	key.insert(key.end(), v.begin(), v.end());
	return key;
}

}  // namespace detail

/// Decompose a chain representation into interval summands.
///
/// Each space receives a basis adapted to the flag of kernels of the
/// composites leaving it; vectors arriving from the left are the images of
/// the previous basis, so every map becomes a 0/1 partial permutation.
inline ChainIntervalForm chain_interval_form(const ChainRep& rep)
{
	rep.validate();
	const int p = rep.p;
	const std::size_t nodes = rep.dims.size();
	ChainIntervalForm out;
	std::vector<Vec> carried;  // images of the previous node's surviving basis

	for (std::size_t i = 0; i < nodes; ++i) {
		const std::size_t d = rep.dims[i];
		// Kernel flag K_{i+1} ⊆ K_{i+2} ⊆ ... ⊆ V_i, closed off by V_i itself.
		std::vector<Subspace> flag;
		for (std::size_t j = i + 1; j < nodes; ++j)
			flag.push_back(kernel(rep.composite(i, j)));
		flag.push_back(Subspace::full(p, d));

		std::vector<Vec> chosen;
		std::vector<bool> from_left;
		Subspace current = Subspace::zero(p, d);
		for (const Subspace& level : flag) {
			for (const Vec& c : carried)
				if (level.contains(c) && !current.contains(c)) {
					chosen.push_back(c);
					from_left.push_back(true);
					current = current + Subspace::span(p, d, {c});
				}
			for (const Vec& v : level.vectors()) {
				if (current.contains(v))
					continue;
				// Prefer the unit vector at the pivot so identity changes stay identity.
				Vec unit(d, 0);
				std::size_t lead = 0;
				while (v[lead] == 0)
					++lead;
				unit[lead] = 1;
				if (level.contains(unit) && !current.contains(unit)) {
					chosen.push_back(unit);
					from_left.push_back(false);
					current = current + Subspace::span(p, d, {unit});
				}
				if (!current.contains(v)) {
					chosen.push_back(v);
					from_left.push_back(false);
					current = current + Subspace::span(p, d, {v});
				}
			}
		}

		std::vector<std::size_t> order(chosen.size());
		for (std::size_t k = 0; k < order.size(); ++k)
			order[k] = k;
		std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
			return detail::leading_order_key(chosen[a], from_left[a]) < detail::leading_order_key(chosen[b], from_left[b]);
		});
		std::vector<Vec> sorted;
		for (std::size_t k : order)
			sorted.push_back(chosen[k]);
		chosen = std::move(sorted);
		out.bases.push_back(FpMatrix::from_columns(p, chosen, d));

		carried.clear();
		if (i + 1 < nodes)
			for (const Vec& b : chosen) {
				Vec img = rep.maps[i].apply(b);
				if (std::any_of(img.begin(), img.end(), [](int x) { return x != 0; }))
					carried.push_back(std::move(img));
			}
	}

	for (std::size_t i = 0; i + 1 < nodes; ++i) {
		FpMatrix target_inv = *inverse(out.bases[i + 1]);
		out.maps.push_back(target_inv * rep.maps[i] * out.bases[i]);
	}
	return out;
}

}  // namespace dnalg
