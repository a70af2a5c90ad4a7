#pragma once

#include "dnalg/dn_checker.hpp"
#include "support.hpp"

namespace testing_support {

using dnalg::Algebra;
using dnalg::AlgebraElement;
using dnalg::DnInstance;
using dnalg::DnStatus;
using dnalg::Monomial;

inline bool all_terms_have_exponent_at_least(const AlgebraElement& x, int t)
{
	for (const auto& [m, c] : x.terms())
		if (m.total_exponent() < t)
			return false;
	return true;
}

/// Monomials of total exponent >= 2 in degree e.
inline std::vector<Monomial> decomposable_monomials(const Algebra& alg, int e)
{
	std::vector<Monomial> out;
	for (const auto& m : alg.basis(e))
		if (m.total_exponent() >= 2)
			out.push_back(m);
	return out;
}

/// Search every choice of decomposable corrections ν_i.
inline DnStatus brute_force_instance(const Algebra& alg, const DnInstance& inst)
{
	const auto& pres = alg.presentation();
	const int p = pres.p;
	AlgebraElement total = pres.zero();
	for (const auto& pr : inst.pairs)
		total += alg.act(pr.theta, pr.alpha);
	if (!all_terms_have_exponent_at_least(total, 2))
		return DnStatus::vacuous;
	std::vector<std::vector<Monomial>> dec;
	std::size_t unknowns = 0;
	for (const auto& pr : inst.pairs) {
		dec.push_back(decomposable_monomials(alg, pr.source_degree));
		unknowns += dec.back().size();
	}
	bool found = false;
	for_each_vector(p, unknowns, [&](const Vec& c) {
		if (found)
			return;
		AlgebraElement sum = pres.zero();
		std::size_t k = 0;
		for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
			AlgebraElement nu = pres.zero();
			for (const auto& m : dec[i])
				nu.add_term(m, c[k++]);
			sum += alg.act(inst.pairs[i].theta, inst.pairs[i].alpha - nu);
		}
		found = all_terms_have_exponent_at_least(sum, inst.n + 1);
	});
	return found ? DnStatus::satisfied : DnStatus::violated;
}

}  // namespace testing_support
