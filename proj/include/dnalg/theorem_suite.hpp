#pragma once

// Checkers for the structural consequences of the D_n condition on
// truncated algebras: generator normalization, the P^1-term criterion,
// the surjectivity / vanishing / isomorphism ranges on QA, the Frobenius
// reduction, the sphere-product bound, and a solver for admissible action
// tables.

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "fp_linear.hpp"
#include "steenrod.hpp"
#include "truncated_algebra.hpp"

namespace dnalg {

// --- generator normalization --------------------------------------------------

struct NormalizedPresentation {
	AlgebraPresentation original;
	/// New generators, aligned with the original (degree-sorted) order.
	std::vector<AlgebraElement> generators;
	/// Per degree 2m: columns are the new generators of that degree in old coordinates.
	std::map<int, FpMatrix> basis_change;
	/// Per degree 2m: P^1 : Q^{2m} -> Q^{2(m+p-1)} in the new bases.
	std::map<int, FpMatrix> induced_p1;

	/// Generator indices of half-degree m, in order.
	std::vector<std::size_t> block(int m) const
	{
		std::vector<std::size_t> out;
		for (std::size_t i = 0; i < original.generators.size(); ++i)
			if (original.generators[i].half_degree == m)
				out.push_back(i);
		return out;
	}
};

namespace detail {

inline std::vector<int> distinct_half_degrees(const AlgebraPresentation& pres)
{
	std::set<int> s;
	for (const auto& g : pres.generators)
		s.insert(g.half_degree);
	return {s.begin(), s.end()};
}

}  // namespace detail

/// Choose generators so that P^1 on QA is a 0/1 partial permutation.
inline NormalizedPresentation normalize_generators(const Algebra& alg)
{
	const AlgebraPresentation& pres = alg.presentation();
	const int p = pres.p;
	const auto p1 = steenrod::SteenrodElement::power(p, 1);
	NormalizedPresentation out;
	out.original = pres;
	out.generators.resize(pres.generators.size(), pres.zero());

	const std::vector<int> ms = detail::distinct_half_degrees(pres);
	std::set<int> done;
	for (int start : ms) {
		if (done.contains(start))
			continue;
		const int last = *std::max_element(ms.begin(), ms.end());
		std::vector<int> chain;
		for (int m = start; m <= last; m += p - 1)
			chain.push_back(m);
		while (!chain.empty() && out.block(chain.back()).empty())
			chain.pop_back();

		ChainRep rep;
		rep.p = p;
		for (int m : chain)
			rep.dims.push_back(out.block(m).size());
		for (std::size_t s = 0; s + 1 < chain.size(); ++s)
			rep.maps.push_back(alg.induced_q_map(p1, 2 * chain[s]));
		const ChainIntervalForm form = chain_interval_form(rep);

		for (std::size_t s = 0; s < chain.size(); ++s) {
			const int m = chain[s];
			done.insert(m);
			const auto idx = out.block(m);
			if (idx.empty())
				continue;
			const FpMatrix& c = form.bases[s];
			out.basis_change.emplace(2 * m, c);
			for (std::size_t q = 0; q < idx.size(); ++q) {
				AlgebraElement g = pres.zero();
				for (std::size_t r = 0; r < idx.size(); ++r)
					g += static_cast<long long>(c(r, q)) * pres.generator(idx[r]);
				out.generators[idx[q]] = std::move(g);
			}
		}
		for (std::size_t s = 0; s + 1 < chain.size(); ++s)
			if (!out.block(chain[s]).empty())
				out.induced_p1.emplace(2 * chain[s], form.maps[s]);
	}
	return out;
}

/// Independent re-check of the normal form: P^1 of each new generator is
/// decomposable or, modulo decomposables, exactly one other new generator,
/// with no generator hit twice.
inline bool satisfies_normal_form(const Algebra& alg, const NormalizedPresentation& n)
{
	const int p = alg.prime();
	std::set<std::size_t> hit;
	for (std::size_t i = 0; i < n.generators.size(); ++i) {
		const int m = n.original.generators[i].half_degree;
		const int target = 2 * (m + p - 1);
		const AlgebraElement img = alg.act_power(1, n.generators[i]);
		const QuotientSpace q = alg.indecomposables(target);
		if (q.generators.empty())
			continue;
		const Vec old_coords = q.projection.apply(alg.to_vector(img, target));
		const auto inv = inverse(n.basis_change.at(target));
		if (!inv)
			return false;
		const Vec w = inv->apply(old_coords);
		std::size_t nonzero = 0, where = 0;
		for (std::size_t r = 0; r < w.size(); ++r)
			if (w[r] != 0) {
				++nonzero;
				where = r;
			}
		if (nonzero == 0)
			continue;
		if (nonzero > 1 || w[where] != 1)
			return false;
		if (!hit.insert(q.generators[where]).second)
			return false;
	}
	return true;
}

// --- the P^1-term criterion -----------------------------------------------------

struct PropATerm {
	std::size_t source = 0;  // i: P^1 of new generator i
	std::size_t target = 0;  // j: contains g_j^t
	int power = 0;           // t
	int coefficient = 0;
	bool in_image = false;   // g_j = P^1(g_k) for some k
};

struct PropAResult {
	int n = 1;
	bool passed = true;
	std::vector<PropATerm> terms;  // every nonzero g_j^t term with t <= n
};

/// Coefficient of g_j^t in x written in the new generators (t <= p).
inline int pure_power_coefficient(const NormalizedPresentation& n, const AlgebraElement& x, std::size_t j, int t)
{
	const int p = n.original.p;
	const int m = n.original.generators[j].half_degree;
	const auto idx = n.block(m);
	const std::size_t q = static_cast<std::size_t>(std::find(idx.begin(), idx.end(), j) - idx.begin());
	const FpMatrix inv = *inverse(n.basis_change.at(2 * m));
	long long total = 0;
	for (const auto& [mono, c] : x.terms()) {
		if (mono.total_exponent() != t)
			continue;
		long long term = c;
		bool in_block = true;
		for (std::size_t a = 0; a < mono.exps.size() && in_block; ++a) {
			if (mono.exps[a] == 0)
				continue;
			const auto pos = std::find(idx.begin(), idx.end(), a);
			if (pos == idx.end()) {
				in_block = false;
				break;
			}
			// y_a = Σ_c inv(c, a) g_c
			term = term * pow_mod(inv(q, static_cast<std::size_t>(pos - idx.begin())), mono.exps[a], p) % p;
		}
		if (in_block)
			total = (total + term) % p;
	}
	return mod_p(total, p);
}

inline PropAResult check_prop_A(const Algebra& alg, const NormalizedPresentation& n, int order)
{
	const int p = alg.prime();
	if (order < 1 || order > p)
		throw std::invalid_argument("n must lie in [1, p]");
	PropAResult out;
	out.n = order;
	for (std::size_t i = 0; i < n.generators.size(); ++i) {
		const AlgebraElement img = alg.act_power(1, n.generators[i]);
		for (std::size_t j = 0; j < n.generators.size(); ++j)
			for (int t = 1; t <= order; ++t) {
				const int c = pure_power_coefficient(n, img, j, t);
				if (c == 0)
					continue;
				PropATerm term{i, j, t, c, false};
				const int mj = n.original.generators[j].half_degree;
				const auto idx = n.block(mj);
				const std::size_t q = static_cast<std::size_t>(std::find(idx.begin(), idx.end(), j) - idx.begin());
				auto it = n.induced_p1.find(2 * (mj - (p - 1)));
				if (it != n.induced_p1.end())
					for (std::size_t k = 0; k < it->second.cols(); ++k)
						if (it->second(q, k) == 1)
							term.in_image = true;
				if (!term.in_image)
					out.passed = false;
				out.terms.push_back(term);
			}
	}
	return out;
}

// --- ranges on QA -----------------------------------------------------------------

enum class RangeFamily { surjective, vanishing, isomorphism };

inline const char* to_string(RangeFamily f)
{
	switch (f) {
	case RangeFamily::surjective: return "A1";
	case RangeFamily::vanishing: return "A2";
	case RangeFamily::isomorphism: return "A3";
	}
	return "?";
}

struct RangeVerdict {
	RangeFamily family = RangeFamily::surjective;
	int a = 0, b = 0, c = 0, t = 0;
	int operation = 0;  // the reduced power index p^a t
	int source_degree = 0, target_degree = 0;
	std::size_t source_dim = 0, target_dim = 0, rank = 0;
	bool passed = true;

	friend bool operator==(const RangeVerdict&, const RangeVerdict&) = default;
};

struct RangeCheckResult {
	std::vector<RangeVerdict> verdicts;
	bool passed = true;

	std::optional<RangeVerdict> find(RangeFamily f, int a, int b, int c, int t) const
	{
		for (const auto& v : verdicts)
			if (v.family == f && v.a == a && v.b == b && v.c == c && v.t == t)
				return v;
		return std::nullopt;
	}
};

namespace detail {

inline RangeVerdict range_verdict(const Algebra& alg, RangeFamily f, int a, int b, int c, int t, int src_half,
                                  int op)
{
	const int p = alg.prime();
	RangeVerdict v;
	v.family = f;
	v.a = a;
	v.b = b;
	v.c = c;
	v.t = t;
	v.operation = op;
	v.source_degree = 2 * src_half;
	v.target_degree = v.source_degree + 2 * op * (p - 1);
	const FpMatrix m = alg.induced_q_map(steenrod::SteenrodElement::power(p, op), v.source_degree);
	v.source_dim = m.cols();
	v.target_dim = m.rows();
	v.rank = rank(m);
	switch (f) {
	case RangeFamily::surjective: v.passed = v.rank == v.target_dim; break;
	case RangeFamily::vanishing: v.passed = v.rank == 0; break;
	case RangeFamily::isomorphism: v.passed = v.rank == v.source_dim && v.rank == v.target_dim; break;
	}
	return v;
}

}  // namespace detail

/// All three families at one value of a, for every b, c, t whose degrees fit
/// under the largest generator.
inline RangeCheckResult check_thmA_at(const Algebra& alg, int a)
{
	const int p = alg.prime();
	RangeCheckResult out;
	const int top = alg.presentation().max_half_degree();
	int pa = 1;
	for (int i = 0; i < a; ++i)
		pa *= p;
	auto add = [&](RangeVerdict v) {
		out.passed = out.passed && v.passed;
		out.verdicts.push_back(v);
	};
	for (int b = 1; pa * (p * b + 1) <= top; ++b)
		for (int c = 1; c < p && pa * (p * b + c) <= top; ++c) {
			for (int t = 1; t <= std::min(b, p - c); ++t)
				add(detail::range_verdict(alg, RangeFamily::surjective, a, b, c, t, pa * (p * (b - t) + c + t),
				                          pa * t));
			for (int t = c; t < p; ++t)
				add(detail::range_verdict(alg, RangeFamily::vanishing, a, b, c, t, pa * (p * b + c), pa * t));
		}
	for (int c = 1; c < p && pa * c <= top; ++c)
		for (int t = 1; t < c; ++t)
			add(detail::range_verdict(alg, RangeFamily::isomorphism, a, 0, c, t, pa * c, pa * t));
	return out;
}

/// Every a >= 0 with p^a below the largest half-degree.
inline RangeCheckResult check_thmA(const Algebra& alg)
{
	RangeCheckResult out;
	const int top = alg.presentation().max_half_degree();
	for (int a = 0, pa = 1; pa <= top; ++a, pa *= alg.prime()) {
		RangeCheckResult r = check_thmA_at(alg, a);
		out.passed = out.passed && r.passed;
		out.verdicts.insert(out.verdicts.end(), r.verdicts.begin(), r.verdicts.end());
	}
	return out;
}

// --- Frobenius reduction ------------------------------------------------------------

class IdealNotClosed : public std::runtime_error {
public:
	IdealNotClosed(int k, std::size_t generator)
	    : std::runtime_error("P^" + std::to_string(k) + " of generator " + std::to_string(generator) +
	                         " leaves the ideal of generators with half-degree prime to p"),
	      k_(k), generator_(generator) {}
	int k() const { return k_; }
	std::size_t generator() const { return generator_; }

private:
	int k_;
	std::size_t generator_;
};

struct ReducedAlgebra {
	std::vector<std::size_t> ideal_generators;  // m_i not divisible by p
	std::vector<std::size_t> kept;              // i_d, with m_{i_d} = p h_d
	AlgebraPresentation reduced;                // B with deg z_d = 2 h_d
	ValidationReport validation;
};

/// Quotient by the ideal I, then divide degrees by p: P^r z_d = L(P^{pr} y_{i_d}).
inline ReducedAlgebra reduce_frobenius(const Algebra& alg)
{
	const AlgebraPresentation& pres = alg.presentation();
	const int p = pres.p;
	ReducedAlgebra out;
	std::vector<bool> in_ideal(pres.generators.size(), false);
	for (std::size_t i = 0; i < pres.generators.size(); ++i) {
		if (pres.generators[i].half_degree % p != 0) {
			in_ideal[i] = true;
			out.ideal_generators.push_back(i);
		} else {
			out.kept.push_back(i);
		}
	}
	auto touches_ideal = [&](const Monomial& m) {
		for (std::size_t a = 0; a < m.exps.size(); ++a)
			if (in_ideal[a] && m.exps[a] > 0)
				return true;
		return false;
	};
	for (std::size_t i : out.ideal_generators)
		for (int k = 1; k <= pres.generators[i].half_degree; ++k) {
			const AlgebraElement image = alg.power_on_generator(k, i);
			for (const auto& [m, c] : image.terms())
				if (!touches_ideal(m))
					throw IdealNotClosed(k, i);
		}

	out.reduced.p = p;
	for (std::size_t d = 0; d < out.kept.size(); ++d)
		out.reduced.generators.push_back(
		    {"z" + std::to_string(d + 1), pres.generators[out.kept[d]].half_degree / p});
	auto lower = [&](const AlgebraElement& x) {
		AlgebraElement z = out.reduced.zero();
		for (const auto& [m, c] : x.terms()) {
			if (touches_ideal(m))
				continue;
			Monomial zm{std::vector<int>(out.kept.size(), 0)};
			for (std::size_t d = 0; d < out.kept.size(); ++d)
				zm.exps[d] = m.exps[out.kept[d]];
			z.add_term(std::move(zm), c);
		}
		return z;
	};
	for (std::size_t d = 0; d < out.kept.size(); ++d)
		for (int r = 1; r <= out.reduced.generators[d].half_degree; ++r)
			out.reduced.action.emplace(std::make_pair(r, d), lower(alg.power_on_generator(p * r, out.kept[d])));
	out.validation = validate_action(out.reduced);
	return out;
}

// --- the sphere-product bound ---------------------------------------------------------

struct ThmCResult {
	int p = 3;
	int max_half_degree = 0;  // m_l
	int bound = 0;            // largest n with n m_l <= p
	std::optional<std::string> caveat;
	std::string scope = "arithmetic criterion only; the converse realization is not computed";
};

inline ThmCResult thmC_bound(int p, const std::vector<int>& sphere_dims)
{
	if (p < 3 || !is_prime(p))
		throw std::invalid_argument("p must be an odd prime");
	if (sphere_dims.empty())
		throw std::invalid_argument("need at least one sphere");
	ThmCResult out;
	out.p = p;
	for (int d : sphere_dims) {
		if (d < 1 || d % 2 == 0)
			throw std::invalid_argument("sphere dimensions must be odd and positive, got " + std::to_string(d));
		out.max_half_degree = std::max(out.max_half_degree, (d + 1) / 2);
	}
	out.bound = p / out.max_half_degree;
	if (out.max_half_degree == 1)
		out.caveat = "all spheres are circles: a torus is homotopy commutative, so the bound n <= p is the "
		             "literal criterion rather than an obstruction";
	return out;
}

// --- action solver --------------------------------------------------------------------------

struct DeriveConfig {
	std::size_t max_free_unknowns = 20;
	std::size_t max_solutions = 0;  // 0: all
	std::optional<std::uint64_t> seed;
};

struct DeriveResult {
	std::vector<AlgebraPresentation> solutions;
	std::vector<std::pair<int, std::size_t>> free_entries;  // (k, generator)
	std::size_t free_unknowns = 0;
	std::size_t candidates = 0;
	bool bound_exceeded = false;
	bool stopped_early = false;
};

namespace detail {

inline bool is_power_of(int k, int p)
{
	while (k % p == 0)
		k /= p;
	return k == 1;
}

/// (a, b) with a + b = k, a < pb, and an invertible coefficient on P^k in the
/// normal form of P^a P^b.
inline std::optional<std::pair<int, int>> derivation_pair(int k, int p)
{
	for (int b = 1; b < k; ++b) {
		const int a = k - b;
		if (a >= p * b)
			continue;
		if (steenrod::adem_rewrite(p, std::vector<int>{a, b}).coefficient(steenrod::SteenrodMonomial{{k}}) != 0)
			return std::make_pair(a, b);
	}
	return std::nullopt;
}

inline std::vector<std::string> generator_names(const std::vector<int>& half_degrees)
{
	std::map<int, int> count, seen;
	for (int m : half_degrees)
		++count[m];
	std::vector<std::string> out;
	for (int m : half_degrees) {
		std::string name = "y" + std::to_string(2 * m);
		if (count[m] > 1)
			name += "_" + std::to_string(++seen[m]);
		out.push_back(std::move(name));
	}
	return out;
}

class ActionSearch {
public:
	ActionSearch(int p, const std::vector<int>& half_degrees, const DeriveConfig& cfg) : p_(p), cfg_(cfg)
	{
		const auto names = generator_names(half_degrees);
		base_.p = p;
		for (std::size_t i = 0; i < half_degrees.size(); ++i)
			base_.generators.push_back({names[i], half_degrees[i]});
		base_.fill_unstable_top();
		const Algebra shape(base_);
		top_ = shape.top_degree();

		for (std::size_t i = 0; i < half_degrees.size(); ++i) {
			const int m = half_degrees[i];
			for (int k = 1; k < m; ++k) {
				if (is_power_of(k, p))
					free_.push_back({k, i});
				else
					derived_.push_back({k, i});
			}
			for (int k = 1; 2 * m * (p + 1) + 2 * k * (p - 1) <= top_; ++k)
				relations_.push_back({i, 0, k});
			for (int b = 1; b <= m; ++b)
				for (int a = 1; a < p * b; ++a) {
					if (2 * m + 2 * (a + b) * (p - 1) > top_)
						break;
					relations_.push_back({i, a, b});
				}
		}
		std::sort(free_.begin(), free_.end());
		for (const auto& [k, i] : free_)
			free_basis_.push_back(shape.basis(2 * half_degrees[i] + 2 * k * (p - 1)));
		for (const auto& rel : relations_)
			if (rel.a > 0)
				adem_.emplace(std::make_pair(rel.a, rel.b), steenrod::adem_rewrite(p, std::vector<int>{rel.a, rel.b}));
		for (const auto& [k, i] : derived_) {
			const auto ab = derivation_pair(k, p);
			if (!ab)
				throw std::logic_error("no derivation relation for P^" + std::to_string(k));
			derivation_.emplace(k, Derivation{ab->first, ab->second,
			                                  steenrod::adem_rewrite(p, std::vector<int>{ab->first, ab->second})});
		}
		if (cfg.seed)
			rng_.seed(*cfg.seed);
	}

	DeriveResult run()
	{
		DeriveResult res;
		res.free_entries = free_;
		for (const auto& b : free_basis_)
			res.free_unknowns += b.size();
		if (res.free_unknowns > cfg_.max_free_unknowns) {
			res.bound_exceeded = true;
			return res;
		}
		AlgebraPresentation pres = base_;
		std::vector<bool> checked(relations_.size(), false);
		if (!settle(pres, checked))
			return res;
		assign(0, pres, checked, res);
		return res;
	}

private:
	/// a == 0 encodes the truncation check on P^b(y^{p+1}).
	struct Relation {
		std::size_t generator;
		int a, b;
	};
	struct Derivation {
		int a, b;
		steenrod::SteenrodElement relation;
	};

	/// Fill every derivable entry, then test every relation that can now be evaluated.
	bool settle(AlgebraPresentation& pres, std::vector<bool>& checked)
	{
		bool progress = true;
		while (progress) {
			progress = false;
			for (const auto& [k, i] : derived_) {
				if (pres.action.contains({k, i}))
					continue;
				try {
					const Algebra alg(pres);
					const Derivation& der = derivation_.at(k);
					const AlgebraElement y = pres.generator(i);
					const int lead = der.relation.coefficient(steenrod::SteenrodMonomial{{k}});
					steenrod::SteenrodElement rest = der.relation;
					rest += steenrod::SteenrodElement::from_monomial(p_, steenrod::SteenrodMonomial{{k}}, p_ - lead);
					AlgebraElement value = alg.act_word({der.a, der.b}, y) - alg.act(rest, y);
					value = static_cast<long long>(inverse_mod(lead, p_)) * value;
					pres.action.emplace(std::make_pair(k, i), std::move(value));
					progress = true;
				} catch (const MissingActionEntry&) {
				}
			}
		}
		const Algebra alg(pres);
		for (std::size_t r = 0; r < relations_.size(); ++r) {
			if (checked[r])
				continue;
			const auto& rel = relations_[r];
			try {
				if (rel.a == 0) {
					if (!truncation_defect(alg, rel.generator, rel.b).is_zero())
						return false;
					checked[r] = true;
					continue;
				}
				const AlgebraElement y = pres.generator(rel.generator);
				const AlgebraElement lhs = alg.act_word({rel.a, rel.b}, y);
				const AlgebraElement rhs = alg.act(adem_.at({rel.a, rel.b}), y);
				if (lhs != rhs)
					return false;
				checked[r] = true;
			} catch (const MissingActionEntry&) {
			}
		}
		return true;
	}

	void assign(std::size_t idx, const AlgebraPresentation& pres, const std::vector<bool>& checked, DeriveResult& res)
	{
		if (res.stopped_early)
			return;
		if (idx == free_.size()) {
			++res.candidates;
			if (validate_action(pres).ok()) {
				res.solutions.push_back(pres);
				if (cfg_.max_solutions != 0 && res.solutions.size() >= cfg_.max_solutions)
					res.stopped_early = true;
			}
			return;
		}
		const auto [k, i] = free_[idx];
		const auto& basis = free_basis_[idx];
		using u128 = unsigned __int128;
		u128 count = 1;
		for (std::size_t s = 0; s < basis.size(); ++s)
			count *= static_cast<u128>(p_);
		u128 offset = 0, stride = 1;
		if (cfg_.seed) {
			offset = static_cast<u128>(rng_()) % count;
			do
				stride = static_cast<u128>(rng_()) % count;
			while (count > 1 && stride % static_cast<u128>(p_) == 0);
			if (count == 1)
				stride = 1;
		}
		for (u128 step = 0; step < count && !res.stopped_early; ++step) {
			u128 code = (step * stride + offset) % count;
			AlgebraElement value = base_.zero();
			for (std::size_t s = basis.size(); s-- > 0;) {
				value.add_term(basis[s], static_cast<long long>(code % static_cast<u128>(p_)));
				code /= static_cast<u128>(p_);
			}
			AlgebraPresentation next = pres;
			next.action.emplace(std::make_pair(k, i), std::move(value));
			std::vector<bool> next_checked = checked;
			if (!settle(next, next_checked)) {
				++res.candidates;
				continue;
			}
			assign(idx + 1, next, next_checked, res);
		}
	}

	int p_;
	DeriveConfig cfg_;
	AlgebraPresentation base_;
	int top_ = 0;
	std::vector<std::pair<int, std::size_t>> free_;
	std::vector<std::pair<int, std::size_t>> derived_;
	std::vector<std::vector<Monomial>> free_basis_;
	std::vector<Relation> relations_;
	std::map<int, Derivation> derivation_;
	std::map<std::pair<int, int>, steenrod::SteenrodElement> adem_;
	std::mt19937_64 rng_;
};

}  // namespace detail

/// Every action table on T^[p+1][y_1..y_l] satisfying unstability and the Adem
/// relations. Entries P^k with k not a power of p are forced by a relation with
/// invertible coefficient on P^k, so only the P^{p^j} entries are searched.
inline DeriveResult derive_actions(int p, std::vector<int> half_degrees, const DeriveConfig& config = {})
{
	if (p < 3 || !is_prime(p))
		throw std::invalid_argument("p must be an odd prime");
	for (int m : half_degrees)
		if (m < 1)
			throw std::invalid_argument("half-degrees must be positive");
	std::sort(half_degrees.begin(), half_degrees.end());
	return detail::ActionSearch(p, half_degrees, config).run();
}

}  // namespace dnalg
