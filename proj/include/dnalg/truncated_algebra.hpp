#pragma once

// Truncated polynomial algebras T^[p+1][y_1..y_l] with deg y_i = 2 m_i,
// carrying an action of the mod p Steenrod algebra.
//
// A presentation stores P^k(y_i) for 1 <= k <= m_i only. P^0 is the identity,
// P^k(y_i) = 0 for k > m_i, β acts as zero (everything is even), and the
// action on products follows from the Cartan formula.

#include <algorithm>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fp_linear.hpp"
#include "steenrod.hpp"

namespace dnalg {

class AlgebraError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// Thrown while evaluating an action whose table lacks a needed entry.
class MissingActionEntry : public std::runtime_error {
public:
	MissingActionEntry(int k, std::size_t generator)
	    : std::runtime_error("action entry P^" + std::to_string(k) + " on generator " + std::to_string(generator) +
	                         " is not assigned"),
	      k_(k), generator_(generator) {}
	int k() const { return k_; }
	std::size_t generator() const { return generator_; }

private:
	int k_;
	std::size_t generator_;
};

struct Monomial {
	std::vector<int> exps;

	int total_exponent() const
	{
		int t = 0;
		for (int e : exps)
			t += e;
		return t;
	}
	bool is_unit() const { return total_exponent() == 0; }

	friend auto operator<=>(const Monomial&, const Monomial&) = default;
};

class AlgebraElement {
public:
	AlgebraElement() = default;
	AlgebraElement(int p, std::size_t nvars) : p_(p), nvars_(nvars) {}

	static AlgebraElement monomial(int p, Monomial m, long long coeff = 1)
	{
		AlgebraElement x(p, m.exps.size());
		x.add_term(std::move(m), coeff);
		return x;
	}

	int prime() const { return p_; }
	std::size_t num_vars() const { return nvars_; }
	const std::map<Monomial, int>& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	int coefficient(const Monomial& m) const
	{
		auto it = terms_.find(m);
		return it == terms_.end() ? 0 : it->second;
	}

	void add_term(Monomial m, long long coeff)
	{
		if (m.exps.size() != nvars_)
			throw AlgebraError("monomial has the wrong number of variables");
		for (int e : m.exps)
			if (e > p_)
				return;  // y^(p+1) = 0
		const int c = mod_p(coeff, p_);
		if (c == 0)
			return;
		auto [it, fresh] = terms_.try_emplace(std::move(m), c);
		if (!fresh) {
			it->second = (it->second + c) % p_;
			if (it->second == 0)
				terms_.erase(it);
		}
	}

	AlgebraElement& operator+=(const AlgebraElement& o)
	{
		check(o);
		for (const auto& [m, c] : o.terms_)
			add_term(m, c);
		return *this;
	}
	AlgebraElement& operator-=(const AlgebraElement& o)
	{
		check(o);
		for (const auto& [m, c] : o.terms_)
			add_term(m, -static_cast<long long>(c));
		return *this;
	}
	friend AlgebraElement operator+(AlgebraElement a, const AlgebraElement& b) { return a += b; }
	friend AlgebraElement operator-(AlgebraElement a, const AlgebraElement& b) { return a -= b; }
	friend AlgebraElement operator*(long long s, const AlgebraElement& a)
	{
		AlgebraElement out(a.p_, a.nvars_);
		for (const auto& [m, c] : a.terms_)
			out.add_term(m, s * c);
		return out;
	}

	friend AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b)
	{
		a.check(b);
		AlgebraElement out(a.p_, a.nvars_);
		for (const auto& [ma, ca] : a.terms_)
			for (const auto& [mb, cb] : b.terms_) {
				Monomial m{ma.exps};
				bool dead = false;
				for (std::size_t i = 0; i < m.exps.size(); ++i)
					if ((m.exps[i] += mb.exps[i]) > a.p_)
						dead = true;
				if (!dead)
					out.add_term(std::move(m), static_cast<long long>(ca) * cb);
			}
		return out;
	}

	friend bool operator==(const AlgebraElement&, const AlgebraElement&) = default;

	void check(const AlgebraElement& o) const
	{
		if (o.p_ != p_ || o.nvars_ != nvars_)
			throw AlgebraError("elements belong to different presentations");
	}

private:
	int p_ = 3;
	std::size_t nvars_ = 0;
	std::map<Monomial, int> terms_;
};

inline AlgebraElement multiply(const AlgebraElement& x, const AlgebraElement& y) { return x * y; }

struct Generator {
	std::string name;
	int half_degree = 1;
	friend bool operator==(const Generator&, const Generator&) = default;
};

struct AlgebraPresentation {
	int p = 3;
	std::vector<Generator> generators;
	/// (k, generator index) -> P^k(y_i) for 1 <= k <= m_i.
	std::map<std::pair<int, std::size_t>, AlgebraElement> action;

	std::size_t num_generators() const { return generators.size(); }

	int top_degree() const
	{
		int top = 0;
		for (const auto& g : generators)
			top += 2 * g.half_degree * p;
		return top;
	}

	int max_half_degree() const
	{
		int m = 0;
		for (const auto& g : generators)
			m = std::max(m, g.half_degree);
		return m;
	}

	AlgebraElement generator(std::size_t i) const
	{
		Monomial m{std::vector<int>(generators.size(), 0)};
		m.exps.at(i) = 1;
		return AlgebraElement::monomial(p, std::move(m));
	}

	AlgebraElement generator_power(std::size_t i, int e) const
	{
		Monomial m{std::vector<int>(generators.size(), 0)};
		m.exps.at(i) = e;
		return AlgebraElement::monomial(p, std::move(m));
	}

	AlgebraElement zero() const { return AlgebraElement(p, generators.size()); }
	AlgebraElement one() const { return AlgebraElement::monomial(p, Monomial{std::vector<int>(generators.size(), 0)}); }

	int degree(const Monomial& m) const
	{
		int d = 0;
		for (std::size_t i = 0; i < m.exps.size(); ++i)
			d += 2 * generators[i].half_degree * m.exps[i];
		return d;
	}

	/// Fill P^{m_i}(y_i) = y_i^p wherever that entry is absent; returns the generators touched.
	std::vector<std::size_t> fill_unstable_top()
	{
		std::vector<std::size_t> filled;
		for (std::size_t i = 0; i < generators.size(); ++i) {
			auto key = std::make_pair(generators[i].half_degree, i);
			if (!action.contains(key)) {
				action.emplace(key, generator_power(i, p));
				filled.push_back(i);
			}
		}
		return filled;
	}

	friend bool operator==(const AlgebraPresentation&, const AlgebraPresentation&) = default;
};

/// The indecomposable quotient Q^d = A^d / DA^d.
struct QuotientSpace {
	int degree = 0;
	std::vector<std::size_t> generators;  // indices of generators of this degree, in order
	FpMatrix projection;                  // dim Q x dim A^d
	FpMatrix section;                     // dim A^d x dim Q, sending basis vectors to generators
};

class Algebra {
public:
	explicit Algebra(AlgebraPresentation pres) : pres_(std::move(pres)), cache_(std::make_shared<Cache>())
	{
		if (pres_.p < 3 || !is_prime(pres_.p))
			throw AlgebraError("p must be an odd prime, got " + std::to_string(pres_.p));
		for (std::size_t i = 0; i < pres_.generators.size(); ++i) {
			if (pres_.generators[i].half_degree < 1)
				throw AlgebraError("generator half-degrees must be positive");
			if (i > 0 && pres_.generators[i].half_degree < pres_.generators[i - 1].half_degree)
				throw AlgebraError("generators must be sorted by degree");
		}
		for (const auto& [key, value] : pres_.action) {
			const auto [k, i] = key;
			if (i >= pres_.generators.size() || k < 1 || value.num_vars() != pres_.generators.size() ||
			    value.prime() != pres_.p)
				throw AlgebraError("malformed action table entry");
		}
		enumerate_basis();
	}

	const AlgebraPresentation& presentation() const { return pres_; }
	int prime() const { return pres_.p; }
	std::size_t num_generators() const { return pres_.generators.size(); }
	int half_degree(std::size_t i) const { return pres_.generators[i].half_degree; }
	int top_degree() const { return pres_.top_degree(); }
	int degree(const Monomial& m) const { return pres_.degree(m); }

	/// Monomials of degree d, exponents <= p, in lexicographic order.
	const std::vector<Monomial>& basis(int d) const
	{
		static const std::vector<Monomial> empty;
		auto it = basis_.find(d);
		return it == basis_.end() ? empty : it->second;
	}
	std::size_t dim(int d) const { return basis(d).size(); }

	/// Degrees with a nonzero graded piece, ascending.
	std::vector<int> degrees() const
	{
		std::vector<int> out;
		for (const auto& [d, b] : basis_)
			out.push_back(d);
		return out;
	}

	std::optional<std::size_t> index_of(const Monomial& m) const
	{
		auto it = index_.find(m);
		if (it == index_.end())
			return std::nullopt;
		return it->second;
	}

	std::optional<int> homogeneous_degree(const AlgebraElement& x) const
	{
		std::optional<int> d;
		for (const auto& [m, c] : x.terms()) {
			const int dm = degree(m);
			if (d && *d != dm)
				return std::nullopt;
			d = dm;
		}
		return d;
	}

	Vec to_vector(const AlgebraElement& x, int d) const
	{
		Vec v(dim(d), 0);
		for (const auto& [m, c] : x.terms()) {
			if (degree(m) != d)
				throw AlgebraError("element is not of degree " + std::to_string(d));
			v[*index_of(m)] = c;
		}
		return v;
	}

	AlgebraElement from_vector(const Vec& v, int d) const
	{
		const auto& b = basis(d);
		if (v.size() != b.size())
			throw DimensionError("vector does not match dim A^" + std::to_string(d));
		AlgebraElement x = pres_.zero();
		for (std::size_t i = 0; i < v.size(); ++i)
			x.add_term(b[i], v[i]);
		return x;
	}

	/// P^k(y_i) from the table.
	AlgebraElement power_on_generator(int k, std::size_t i) const
	{
		if (k == 0)
			return pres_.generator(i);
		if (k > pres_.generators[i].half_degree)
			return pres_.zero();
		auto it = pres_.action.find({k, i});
		if (it == pres_.action.end())
			throw MissingActionEntry(k, i);
		return it->second;
	}

	/// P^k on a monomial by the Cartan formula (memoized).
	AlgebraElement act_power(int k, const Monomial& m) const
	{
		if (k == 0)
			return AlgebraElement::monomial(pres_.p, m);
		std::size_t first = 0;
		while (first < m.exps.size() && m.exps[first] == 0)
			++first;
		if (first == m.exps.size() || 2 * k > pres_.degree(m))
			return pres_.zero();
		{
			std::lock_guard lock(cache_->mutex);
			auto it = cache_->powers.find({k, m});
			if (it != cache_->powers.end())
				return it->second;
		}
		Monomial rest = m;
		--rest.exps[first];
		AlgebraElement out = pres_.zero();
		const int top = std::min(k, pres_.generators[first].half_degree);
		for (int j = 0; j <= top; ++j) {
			AlgebraElement left = power_on_generator(j, first);
			if (left.is_zero())
				continue;
			out += left * act_power(k - j, rest);
		}
		std::lock_guard lock(cache_->mutex);
		cache_->powers.emplace(std::make_pair(k, m), out);
		return out;
	}

	AlgebraElement act_power(int k, const AlgebraElement& x) const
	{
		AlgebraElement out = pres_.zero();
		for (const auto& [m, c] : x.terms())
			out += static_cast<long long>(c) * act_power(k, m);
		return out;
	}

	/// A word of letters applied right to left; any β kills the result.
	AlgebraElement act_word(const std::vector<int>& letters, const AlgebraElement& x) const
	{
		AlgebraElement cur = x;
		for (auto it = letters.rbegin(); it != letters.rend() && !cur.is_zero(); ++it) {
			if (*it == steenrod::kBockstein)
				return pres_.zero();
			cur = act_power(*it, cur);
		}
		return cur;
	}

	AlgebraElement act(const steenrod::SteenrodElement& theta, const AlgebraElement& x) const
	{
		if (theta.prime() != pres_.p || x.prime() != pres_.p)
			throw DimensionError("Steenrod element and algebra over different primes");
		AlgebraElement out = pres_.zero();
		for (const auto& [m, c] : theta.terms())
			out += static_cast<long long>(c) * act_word(m.letters, x);
		return out;
	}

	/// Matrix of θ : A^e -> A^{e + deg θ}.
	FpMatrix action_matrix(const steenrod::SteenrodElement& theta, int e) const
	{
		const int target = e + (theta.is_zero() ? 0 : theta.degree());
		const auto& src = basis(e);
		FpMatrix m(pres_.p, dim(target), src.size());
		for (std::size_t j = 0; j < src.size(); ++j) {
			AlgebraElement img = act(theta, AlgebraElement::monomial(pres_.p, src[j]));
			for (const auto& [mono, c] : img.terms())
				m(*index_of(mono), j) = c;
		}
		return m;
	}

	/// D^t A^d: span of monomials of total exponent >= max(t, 1).
	Subspace filtration(int t, int d) const
	{
		const auto& b = basis(d);
		std::vector<Vec> rows;
		for (std::size_t i = 0; i < b.size(); ++i)
			if (b[i].total_exponent() >= std::max(t, 1)) {
				Vec v(b.size(), 0);
				v[i] = 1;
				rows.push_back(std::move(v));
			}
		return Subspace::span(pres_.p, b.size(), rows);
	}

	/// DA^d (products of at least two positive-degree elements).
	Subspace decomposables(int d) const { return filtration(2, d); }

	QuotientSpace indecomposables(int d) const
	{
		QuotientSpace q;
		q.degree = d;
		for (std::size_t i = 0; i < num_generators(); ++i)
			if (2 * half_degree(i) == d)
				q.generators.push_back(i);
		const std::size_t n = dim(d);
		q.projection = FpMatrix(pres_.p, q.generators.size(), n);
		q.section = FpMatrix(pres_.p, n, q.generators.size());
		for (std::size_t r = 0; r < q.generators.size(); ++r) {
			Monomial g{std::vector<int>(num_generators(), 0)};
			g.exps[q.generators[r]] = 1;
			const std::size_t idx = *index_of(g);
			q.projection(r, idx) = 1;
			q.section(idx, r) = 1;
		}
		return q;
	}

	/// The map Q^e -> Q^{e + deg θ} induced by a homogeneous θ.
	FpMatrix induced_q_map(const steenrod::SteenrodElement& theta, int e) const
	{
		if (!theta.is_homogeneous())
			throw AlgebraError("induced map needs a homogeneous operation");
		const int target = e + (theta.is_zero() ? 0 : theta.degree());
		QuotientSpace src = indecomposables(e), dst = indecomposables(target);
		if (src.generators.empty() || dst.generators.empty())
			return FpMatrix(pres_.p, dst.generators.size(), src.generators.size());
		return dst.projection * action_matrix(theta, e) * src.section;
	}

private:
	struct Cache {
		std::mutex mutex;
		std::map<std::pair<int, Monomial>, AlgebraElement> powers;
	};

	void enumerate_basis()
	{
		const std::size_t l = pres_.generators.size();
		Monomial m{std::vector<int>(l, 0)};
		auto rec = [&](auto&& self, std::size_t i) -> void {
			if (i == l) {
				basis_[degree(m)].push_back(m);
				return;
			}
			for (int e = 0; e <= pres_.p; ++e) {
				m.exps[i] = e;
				self(self, i + 1);
			}
			m.exps[i] = 0;
		};
		rec(rec, 0);
		for (auto& [d, b] : basis_) {
			std::sort(b.begin(), b.end());
			for (std::size_t i = 0; i < b.size(); ++i)
				index_[b[i]] = i;
		}
	}

	AlgebraPresentation pres_;
	std::map<int, std::vector<Monomial>> basis_;
	std::map<Monomial, std::size_t> index_;
	std::shared_ptr<Cache> cache_;
};

/// P^k(y_i^{p+1}) computed by the Cartan formula; the action descends to the
/// truncation only if this vanishes for every k.
inline AlgebraElement truncation_defect(const Algebra& alg, std::size_t i, int k)
{
	const AlgebraPresentation& pres = alg.presentation();
	const AlgebraElement top_power = pres.generator_power(i, pres.p);
	AlgebraElement out = pres.zero();
	for (int j = 0; j <= k; ++j)
		out += alg.act_power(j, top_power) * alg.power_on_generator(k - j, i);
	return out;
}

// --- validation -------------------------------------------------------------

struct ValidationIssue {
	std::string kind;  // "degree", "unstable", "missing", "truncation", "adem"
	std::size_t generator = 0;
	std::string relation;
	int degree = 0;
	std::string detail;
};

struct ValidationReport {
	std::vector<ValidationIssue> issues;
	std::size_t relations_checked = 0;
	bool ok() const { return issues.empty(); }
};

namespace detail {

/// Adem instances P^a P^b (a < pb) relevant on an algebra of the given top degree.
struct AdemInstance {
	int a, b;
	steenrod::SteenrodElement rhs;
};

inline std::vector<AdemInstance> adem_instances(int p, int top)
{
	std::vector<AdemInstance> out;
	// P^b acts on degrees >= 2b; the composite lands at d + 2(a+b)(p-1) <= top.
	for (int b = 1; 2 * b + 2 * b * (p - 1) <= top; ++b)
		for (int a = 1; a < p * b && 2 * b + 2 * (a + b) * (p - 1) <= top; ++a)
			out.push_back({a, b, steenrod::adem_rewrite(p, std::vector<int>{a, b})});
	return out;
}

inline std::string describe_relation(int a, int b) { return "P^" + std::to_string(a) + " P^" + std::to_string(b); }

}  // namespace detail

/// Check the degrees of the table, the unstable conditions, and every Adem
/// relation P^a P^b = Σ c P^{a+b-i} P^i on the full monomial basis in range.
inline ValidationReport validate_action(const AlgebraPresentation& pres)
{
	ValidationReport report;
	const Algebra alg(pres);
	const int p = pres.p;

	for (const auto& [key, value] : pres.action) {
		const auto [k, i] = key;
		const int m = pres.generators[i].half_degree;
		const int want = 2 * m + 2 * k * (p - 1);
		if (k > m) {
			if (!value.is_zero())
				report.issues.push_back({"unstable", i, "P^" + std::to_string(k), want,
				                         "P^k(y) must vanish for 2k > deg y"});
			continue;
		}
		for (const auto& [mono, c] : value.terms())
			if (alg.degree(mono) != want) {
				report.issues.push_back(
				    {"degree", i, "P^" + std::to_string(k), want, "entry has a term of the wrong degree"});
				break;
			}
	}
	for (std::size_t i = 0; i < pres.generators.size(); ++i) {
		const int m = pres.generators[i].half_degree;
		for (int k = 1; k <= m; ++k)
			if (!pres.action.contains({k, i}))
				report.issues.push_back({"missing", i, "P^" + std::to_string(k), 2 * m + 2 * k * (p - 1),
				                         "action entry not given"});
		auto top = pres.action.find({m, i});
		if (top != pres.action.end() && top->second != pres.generator_power(i, p))
			report.issues.push_back({"unstable", i, "P^" + std::to_string(m), 2 * m * p, "P^m(y) must equal y^p"});
	}
	if (!report.ok())
		return report;

	for (std::size_t i = 0; i < pres.generators.size(); ++i) {
		const int base = 2 * pres.generators[i].half_degree * (p + 1);
		for (int k = 1; base + 2 * k * (p - 1) <= alg.top_degree(); ++k) {
			++report.relations_checked;
			if (!truncation_defect(alg, i, k).is_zero())
				report.issues.push_back({"truncation", i, "P^" + std::to_string(k) + " y^" + std::to_string(p + 1),
				                         base + 2 * k * (p - 1), "the ideal (y^(p+1)) is not closed"});
		}
	}

	for (const auto& inst : detail::adem_instances(p, alg.top_degree())) {
		const int shift = 2 * (inst.a + inst.b) * (p - 1);
		for (int d : alg.degrees()) {
			if (d < 2 * inst.b || d + shift > alg.top_degree())
				continue;
			bool failed = false;
			for (const Monomial& m : alg.basis(d)) {
				const AlgebraElement x = AlgebraElement::monomial(p, m);
				++report.relations_checked;
				if (alg.act_word({inst.a, inst.b}, x) != alg.act(inst.rhs, x)) {
					report.issues.push_back({"adem", 0, detail::describe_relation(inst.a, inst.b), d,
					                         "relation fails on a basis monomial"});
					failed = true;
					break;
				}
			}
			if (failed)
				break;
		}
	}
	return report;
}

}  // namespace dnalg
