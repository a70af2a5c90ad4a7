#pragma once

// The D_n condition on a truncated unstable algebra: whenever
// Σ θ_i(α_i) is decomposable, there are decomposable ν_i with
// Σ θ_i(α_i - ν_i) in D^{n+1}.

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "fp_linear.hpp"
#include "steenrod.hpp"
#include "truncated_algebra.hpp"

namespace dnalg {

struct DnPair {
	steenrod::SteenrodElement theta;
	AlgebraElement alpha;
	int source_degree = 0;
};

struct DnInstance {
	std::vector<DnPair> pairs;
	int n = 1;
};

enum class DnStatus { satisfied, violated, vacuous };

inline const char* to_string(DnStatus s)
{
	switch (s) {
	case DnStatus::satisfied: return "satisfied";
	case DnStatus::violated: return "violated";
	case DnStatus::vacuous: return "vacuous";
	}
	return "?";
}

struct DnVerdict {
	DnStatus status = DnStatus::vacuous;
	int degree = 0;
	std::vector<AlgebraElement> witness;  // ν_i, one per pair
	std::size_t image_decomposable_dim = 0;
	std::size_t correction_dim = 0;  // dim(Σ θ_i(DA^{e_i}) + D^{n+1}A^d)
};

class DnInstanceError : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

namespace detail {

/// Columns spanning DA^e inside A^e.
inline FpMatrix decomposable_inclusion(const Algebra& alg, int e)
{
	const Subspace dec = alg.decomposables(e);
	return FpMatrix::from_columns(alg.prime(), dec.vectors(), alg.dim(e));
}

inline int instance_degree(const Algebra& alg, const DnInstance& inst)
{
	if (inst.pairs.empty())
		throw DnInstanceError("instance has no pairs");
	std::optional<int> d;
	for (const auto& pr : inst.pairs) {
		if (!pr.theta.is_homogeneous())
			throw DnInstanceError("θ must be homogeneous");
		if (auto ad = alg.homogeneous_degree(pr.alpha); ad && *ad != pr.source_degree)
			throw DnInstanceError("α does not have the stated degree");
		if (!alg.homogeneous_degree(pr.alpha) && !pr.alpha.is_zero())
			throw DnInstanceError("α must be homogeneous");
		const int target = pr.source_degree + (pr.theta.is_zero() ? 0 : pr.theta.degree());
		if (d && *d != target)
			throw DnInstanceError("pairs land in different degrees");
		d = target;
	}
	return *d;
}

}  // namespace detail

/// Decide one instance by solving for the corrections.
inline DnVerdict check_instance(const Algebra& alg, const DnInstance& inst)
{
	if (inst.n < 1)
		throw DnInstanceError("n must be positive");
	const int d = detail::instance_degree(alg, inst);
	const int p = alg.prime();
	DnVerdict v;
	v.degree = d;

	AlgebraElement total = alg.presentation().zero();
	for (const auto& pr : inst.pairs)
		total += alg.act(pr.theta, pr.alpha);
	const Vec s = alg.to_vector(total, d);
	const Subspace dec = alg.decomposables(d);
	if (!dec.contains(s)) {
		v.status = DnStatus::vacuous;
		return v;
	}

	// Unknowns: coordinates of each ν_i in a basis of DA^{e_i}, then D^{n+1}A^d.
	std::vector<Vec> columns;
	std::vector<FpMatrix> inclusions;
	Subspace image = Subspace::zero(p, alg.dim(d));
	for (const auto& pr : inst.pairs) {
		FpMatrix m = alg.action_matrix(pr.theta, pr.source_degree);
		image = image + Subspace::image(m);
		FpMatrix inc = detail::decomposable_inclusion(alg, pr.source_degree);
		const FpMatrix mc = m * inc;
		for (std::size_t j = 0; j < mc.cols(); ++j)
			columns.push_back(mc.column(j));
		inclusions.push_back(std::move(inc));
	}
	const Subspace high = alg.filtration(inst.n + 1, d);
	for (const Vec& h : high.vectors())
		columns.push_back(h);
	const FpMatrix system = FpMatrix::from_columns(p, columns, alg.dim(d));

	v.image_decomposable_dim = intersection(image, dec).dim();
	v.correction_dim = Subspace::image(system).dim();

	const SolveResult sol = solve(system, s);
	if (!sol.particular) {
		v.status = DnStatus::violated;
		return v;
	}
	v.status = DnStatus::satisfied;
	std::size_t offset = 0;
	for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
		const FpMatrix& inc = inclusions[i];
		Vec coeffs(sol.particular->begin() + static_cast<std::ptrdiff_t>(offset),
		           sol.particular->begin() + static_cast<std::ptrdiff_t>(offset + inc.cols()));
		offset += inc.cols();
		v.witness.push_back(alg.from_vector(inc.apply(coeffs), inst.pairs[i].source_degree));
	}
	return v;
}

/// Re-evaluate a satisfied verdict: Σ θ_i(α_i - ν_i) ∈ D^{n+1}A^d with each ν_i decomposable.
inline bool witness_holds(const Algebra& alg, const DnInstance& inst, const DnVerdict& v)
{
	if (v.status != DnStatus::satisfied || v.witness.size() != inst.pairs.size())
		return false;
	AlgebraElement total = alg.presentation().zero();
	for (std::size_t i = 0; i < inst.pairs.size(); ++i) {
		const auto& pr = inst.pairs[i];
		if (!v.witness[i].is_zero()) {
			const auto nd = alg.homogeneous_degree(v.witness[i]);
			if (!nd || *nd != pr.source_degree)
				return false;
			if (!alg.decomposables(pr.source_degree).contains(alg.to_vector(v.witness[i], pr.source_degree)))
				return false;
		}
		total += alg.act(pr.theta, pr.alpha - v.witness[i]);
	}
	return alg.filtration(inst.n + 1, v.degree).contains(alg.to_vector(total, v.degree));
}

// --- exhaustive checker ------------------------------------------------------

struct DnConfig {
	int max_support = 2;
	/// Enumerate all F_p-combinations θ when the β-free admissible basis of the
	/// operation degree has at most this dimension; otherwise single monomials.
	std::size_t theta_dim_bound = 0;
};

struct DnSlot {
	int source_degree = 0;
	steenrod::SteenrodElement theta;
};

struct DnDegreeSummary {
	int degree = 0;
	std::size_t slots = 0;
	std::size_t supports_checked = 0;
	bool passed = true;
};

struct DnViolation {
	int degree = 0;
	std::vector<DnSlot> support;
	DnInstance instance;
	DnVerdict verdict;
	std::size_t image_decomposable_dim = 0;
	std::size_t correction_dim = 0;
};

struct DnReport {
	int n = 1;
	DnConfig config;
	bool passed = true;
	std::vector<DnDegreeSummary> degrees;
	std::optional<DnViolation> violation;
	/// Places where the search space is narrower than the full definition.
	std::vector<std::string> restrictions;
};

namespace detail {

struct SlotData {
	DnSlot slot;
	FpMatrix matrix;      // A^e -> A^d
	FpMatrix correction;  // DA^e -> A^d
};

/// Scale so the first nonzero entry is 1; proportional matrices then compare equal.
inline FpMatrix projective_normal(FpMatrix m)
{
	for (std::size_t i = 0; i < m.rows(); ++i)
		for (std::size_t j = 0; j < m.cols(); ++j)
			if (m(i, j) != 0) {
				const long long inv = inverse_mod(m(i, j), m.prime());
				for (std::size_t r = 0; r < m.rows(); ++r)
					for (std::size_t c = 0; c < m.cols(); ++c)
						m(r, c) = mod_p(m(r, c) * inv, m.prime());
				return m;
			}
	return m;
}

/// Operations of degree k to try: single monomials, or every combination up to scalars.
inline std::vector<steenrod::SteenrodElement> theta_candidates(int p, int k, int top, std::size_t dim_bound,
                                                               bool& restricted)
{
	std::vector<steenrod::SteenrodMonomial> words;
	for (auto& w : steenrod::basis_of_degree(p, k, top))
		if (!w.has_bockstein())
			words.push_back(std::move(w));
	std::vector<steenrod::SteenrodElement> out;
	if (words.size() <= 1 || words.size() <= dim_bound) {
		// leading coefficient 1, the rest free
		const std::size_t n = words.size();
		for (std::size_t lead = 0; lead < n; ++lead) {
			std::size_t free = n - lead - 1;
			std::size_t count = 1;
			for (std::size_t i = 0; i < free; ++i)
				count *= static_cast<std::size_t>(p);
			for (std::size_t code = 0; code < count; ++code) {
				steenrod::SteenrodElement t = steenrod::SteenrodElement::from_monomial(p, words[lead], 1);
				std::size_t c = code;
				for (std::size_t i = lead + 1; i < n; ++i) {
					const int coeff = static_cast<int>(c % static_cast<std::size_t>(p));
					c /= static_cast<std::size_t>(p);
					if (coeff != 0)
						t += steenrod::SteenrodElement::from_monomial(p, words[i], coeff);
				}
				out.push_back(std::move(t));
			}
		}
	} else {
		restricted = true;
		for (const auto& w : words)
			out.push_back(steenrod::SteenrodElement::from_monomial(p, w, 1));
	}
	return out;
}

inline std::vector<SlotData> collect_slots(const Algebra& alg, int d, std::size_t dim_bound, bool& restricted)
{
	std::vector<SlotData> slots;
	std::vector<std::pair<int, FpMatrix>> seen;
	for (int e : alg.degrees()) {
		if (e <= 0 || e >= d)
			continue;
		const FpMatrix inc = decomposable_inclusion(alg, e);
		for (auto& theta : theta_candidates(alg.prime(), d - e, alg.top_degree(), dim_bound, restricted)) {
			FpMatrix m = alg.action_matrix(theta, e);
			if (m.is_zero())
				continue;
			FpMatrix key = projective_normal(m);
			bool dup = false;
			for (const auto& [se, sm] : seen)
				if (se == e && sm == key) {
					dup = true;
					break;
				}
			if (dup)
				continue;
			seen.emplace_back(e, std::move(key));
			FpMatrix corr = m * inc;
			slots.push_back({{e, std::move(theta)}, std::move(m), std::move(corr)});
		}
	}
	return slots;
}

inline DnViolation make_violation(const Algebra& alg, int d, int n, const std::vector<const SlotData*>& support,
                                  const Subspace& image_dec, const Subspace& target)
{
	DnViolation out;
	out.degree = d;
	out.image_decomposable_dim = image_dec.dim();
	out.correction_dim = target.dim();
	Vec bad;
	for (const Vec& v : image_dec.vectors())
		if (!target.contains(v)) {
			bad = v;
			break;
		}
	std::vector<Vec> columns;
	for (const SlotData* s : support) {
		out.support.push_back(s->slot);
		for (std::size_t j = 0; j < s->matrix.cols(); ++j)
			columns.push_back(s->matrix.column(j));
	}
	const SolveResult sol = solve(FpMatrix::from_columns(alg.prime(), columns, alg.dim(d)), bad);
	std::size_t offset = 0;
	out.instance.n = n;
	for (const SlotData* s : support) {
		const std::size_t w = s->matrix.cols();
		Vec a(sol.particular->begin() + static_cast<std::ptrdiff_t>(offset),
		      sol.particular->begin() + static_cast<std::ptrdiff_t>(offset + w));
		offset += w;
		out.instance.pairs.push_back({s->slot.theta, alg.from_vector(a, s->slot.source_degree), s->slot.source_degree});
	}
	out.verdict = check_instance(alg, out.instance);
	return out;
}

}  // namespace detail

/// Check every support of at most config.max_support slots in every degree.
inline DnReport check_dn(const Algebra& alg, int n, const DnConfig& config = {})
{
	const int p = alg.prime();
	if (n < 1 || n > p)
		throw std::invalid_argument("n must lie in [1, p]");
	if (config.max_support < 1)
		throw std::invalid_argument("max_support must be positive");
	DnReport report;
	report.n = n;
	report.config = config;
	report.restrictions.push_back("homogeneous θ_i and α_i only");
	report.restrictions.push_back("supports of at most " + std::to_string(config.max_support) + " slots");
	bool restricted = false;

	for (int d : alg.degrees()) {
		if (d <= 0)
			continue;
		DnDegreeSummary summary;
		summary.degree = d;
		const auto slots = detail::collect_slots(alg, d, config.theta_dim_bound, restricted);
		summary.slots = slots.size();
		const Subspace dec = alg.decomposables(d);
		const Subspace high = alg.filtration(n + 1, d);

		std::vector<const detail::SlotData*> support;
		auto visit = [&](auto&& self, std::size_t start, const Subspace& image, const Subspace& corr) -> bool {
			for (std::size_t i = start; i < slots.size(); ++i) {
				support.push_back(&slots[i]);
				const Subspace img = image + Subspace::image(slots[i].matrix);
				const Subspace cor = corr + Subspace::image(slots[i].correction);
				++summary.supports_checked;
				const Subspace image_dec = intersection(img, dec);
				const Subspace target = cor + high;
				if (!target.includes(image_dec)) {
					report.violation = detail::make_violation(alg, d, n, support, image_dec, target);
					return false;
				}
				if (static_cast<int>(support.size()) < config.max_support && !self(self, i + 1, img, cor))
					return false;
				support.pop_back();
			}
			return true;
		};
		const Subspace none = Subspace::zero(p, alg.dim(d));
		summary.passed = visit(visit, 0, none, none);
		report.degrees.push_back(summary);
		if (!summary.passed) {
			report.passed = false;
			break;
		}
	}
	if (restricted)
		report.restrictions.push_back("single admissible monomials where the β-free basis exceeds dimension " +
		                              std::to_string(config.theta_dim_bound));
	return report;
}

struct MaxDnResult {
	int value = 0;
	std::vector<DnReport> reports;  // one per n tried, ascending
	bool monotone = true;
};

/// Largest n in [1, p] for which check_dn passes.
inline MaxDnResult max_dn(const Algebra& alg, const DnConfig& config = {})
{
	MaxDnResult out;
	bool failed = false;
	for (int n = 1; n <= alg.prime(); ++n) {
		DnReport r = check_dn(alg, n, config);
		if (r.passed) {
			if (failed)
				out.monotone = false;
			else
				out.value = n;
		} else {
			failed = true;
		}
		out.reports.push_back(std::move(r));
	}
	return out;
}

}  // namespace dnalg
