#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "dn_oracle.hpp"
#include "dnalg.hpp"
#include "models.hpp"

using namespace dnalg;
using namespace testing_support;
using steenrod::SteenrodElement;

namespace {

struct Outcome {
	bool passed = true;
	std::ostringstream detail;

	void require(bool ok, const std::string& what)
	{
		if (!ok && passed) {
			passed = false;
			detail << what;
		}
	}
};

long long exact_binom(int n, int k)
{
	if (k < 0 || k > n)
		return 0;
	long long c = 1;
	for (int i = 0; i < k; ++i)
		c = c * (n - i) / (i + 1);
	return c;
}

std::vector<AlgebraPresentation> models_of(int p, std::vector<int> degs, std::size_t limit = 0,
                                           std::optional<std::uint64_t> seed = {})
{
	DeriveConfig c;
	c.max_solutions = limit;
	c.seed = seed;
	return derive_actions(p, std::move(degs), c).solutions;
}

void steenrod_identities(Outcome& o)
{
	for (int p : {3, 5, 7}) {
		o.require(steenrod::adem_rewrite(p, {1, p - 1}).is_zero(), "P^1 P^{p-1} != 0 at p = " + std::to_string(p));
		o.require(steenrod::adem_rewrite(p, {1, 1}) == 2 * SteenrodElement::power(p, 2),
		          "P^1 P^1 != 2 P^2 at p = " + std::to_string(p));
		for (int c = 1; c < p; ++c) {
			const int lead = steenrod::adem_rewrite(p, {c, p - c}).coefficient(steenrod::SteenrodMonomial{{p}});
			o.require(lead == static_cast<int>(exact_binom(p, c) % p),
			          "leading coefficient of P^" + std::to_string(c) + " P^" + std::to_string(p - c));
		}
	}
	o.detail << "p in {3, 5, 7}";
}

void kappa_identity(Outcome& o)
{
	std::size_t cases = 0;
	for (int p : {3, 5}) {
		for (int m = 1; m <= p; ++m) {
			for (const auto& pres : models_of(p, {m})) {
				const Algebra alg(pres);
				const AlgebraElement kappa = pres.generator(0);
				const AlgebraElement top = pres.generator_power(0, p);
				for (int b = 0; b <= m; ++b) {
					const int c = m - b;
					const auto seq = alg.act(SteenrodElement::power(p, c), alg.act(SteenrodElement::power(p, b), kappa));
					const auto word = alg.act(steenrod::adem_rewrite(p, {c, b}), kappa);
					const int coeff = static_cast<int>(exact_binom(b + c, b) % p);
					o.require(seq == coeff * top && word == coeff * top,
					          "P^" + std::to_string(c) + " P^" + std::to_string(b) + " on " + render(pres));
					++cases;
				}
			}
		}
	}
	o.detail << cases << " (model, b, c) cases";
}

void remark_suite(Outcome& o)
{
	std::mt19937 rng(20250);
	int done = 0, attempts = 0, brute = 0;
	while (done < 50 && attempts < 1000) {
		++attempts;
		const int p = rng() % 2 ? 3 : 5;
		const int l = 1 + static_cast<int>(rng() % 2);
		std::vector<int> degs;
		for (int i = 0; i < l; ++i)
			degs.push_back(1 + static_cast<int>(rng() % static_cast<unsigned>(p)));
		std::sort(degs.begin(), degs.end());
		const auto found = models_of(p, degs, 1, rng());
		if (found.empty())
			continue;
		const Algebra alg(found.front());
		o.require(validate_action(found.front()).ok(), "derived table fails validation");
		o.require(check_dn(alg, 1).passed, "D_1 fails on " + render(found.front()));
		const auto r = check_dn(alg, p);
		o.require(!r.passed && r.violation.has_value(), "D_p holds on " + render(found.front()));
		if (r.violation) {
			const auto& inst = r.violation->instance;
			o.require(check_instance(alg, inst).status == DnStatus::violated, "witness does not re-verify");
			std::size_t unknowns = 0;
			for (const auto& pr : inst.pairs)
				unknowns += decomposable_monomials(alg, pr.source_degree).size();
			if (std::pow(p, unknowns) <= 1e5) {
				o.require(brute_force_instance(alg, inst) == DnStatus::violated,
				          "brute force finds a correction for the witness");
				++brute;
			}
		}
		++done;
	}
	o.require(done == 50, "only " + std::to_string(done) + " presentations found");
	o.detail << done << " presentations, " << brute << " witnesses also confirmed by brute force";
}

void max_dn_table(Outcome& o)
{
	DnConfig config;
	config.max_support = 2;
	config.theta_dim_bound = 3;
	const std::vector<std::pair<int, int>> cases{{3, 2}, {5, 2}, {5, 4}, {7, 2}, {7, 3}};
	const std::vector<int> expected{1, 2, 1, 3, 2};
	for (std::size_t i = 0; i < cases.size(); ++i) {
		const auto [p, m] = cases[i];
		o.require(expected[i] == p / m, "table entry differs from floor(p/m)");
		const auto models = models_of(p, {m});
		o.require(!models.empty(), "no model for p = " + std::to_string(p));
		std::set<int> values;
		for (const auto& pres : models)
			values.insert(max_dn(Algebra(pres), config).value);
		o.require(values == std::set<int>{expected[i]},
		          "max_dn at (p, m) = (" + std::to_string(p) + ", " + std::to_string(m) + ")");
		o.detail << (i ? ", " : "") << "(" << p << "," << m << ")->" << *values.begin();
	}
}

void sp2_model(Outcome& o)
{
	const auto r = derive_actions(3, {2, 4}, {});
	o.require(!r.solutions.empty(),
	          "no action table on T[y4, y8] at p = 3: truncation y4^4 = 0 forces y4^3 P^1(y4) = 0, so "
	          "P^1 y4 lies in (y4) and cannot be a unit times y8");
	if (r.solutions.empty())
		return;
	for (const auto& pres : r.solutions) {
		const Algebra alg(pres);
		const auto p1y4 = alg.act_power(1, pres.generator(0));
		if (p1y4.coefficient(pres.generator(1).terms().begin()->first) == 0)
			continue;
		o.require(check_dn(alg, 2).passed, "D_2 fails");
		o.require(check_prop_A(alg, normalize_generators(alg), 2).passed, "pure power criterion fails");
		const auto a3 = check_thmA_at(alg, 0).find(RangeFamily::isomorphism, 0, 0, 2, 1);
		o.require(a3 && a3->passed && a3->source_degree == 4 && a3->target_degree == 8,
		          "P^1 : Q^4 -> Q^8 is not an isomorphism");
		return;
	}
	o.require(false, "no table with P^1 y4 a unit times y8");
}

void s3_counterexample(Outcome& o)
{
	const auto models = models_of(5, {2});
	o.require(!models.empty(), "no model");
	for (const auto& pres : models) {
		const auto r = check_thmA(Algebra(pres));
		o.require(!r.passed, "check_thmA passes");
		const auto a3 = r.find(RangeFamily::isomorphism, 0, 0, 2, 1);
		o.require(a3 && !a3->passed, "no A3 failure at (a, c, t) = (0, 2, 1)");
	}
	o.detail << models.size() << " models";
}

std::size_t q_dim(const AlgebraPresentation& pres, int m)
{
	return static_cast<std::size_t>(std::count_if(pres.generators.begin(), pres.generators.end(),
	                                              [&](const Generator& g) { return g.half_degree == m; }));
}

void normalization(Outcome& o)
{
	std::mt19937 rng(3);
	const SteenrodElement p1 = SteenrodElement::power(3, 1);
	std::size_t chains = 0;
	for (int trial = 0; trial < 100; ++trial) {
		const int l = 1 + static_cast<int>(rng() % 3);
		std::vector<int> degs;
		for (int i = 0; i < l; ++i)
			degs.push_back(1 + static_cast<int>(rng() % 5));
		std::sort(degs.begin(), degs.end());
		const Algebra alg(random_raw_table(rng, 3, degs));
		const auto& pres = alg.presentation();
		const auto n = normalize_generators(alg);
		o.require(satisfies_normal_form(alg, n), "normal form predicate fails");
		for (int m : detail::distinct_half_degrees(pres)) {
			const int d = 2 * m;
			std::vector<Vec> span;
			for (std::size_t i : n.block(m)) {
				const auto deg = alg.homogeneous_degree(n.generators[i]);
				o.require(deg && *deg == d, "new generator has the wrong degree");
				span.push_back(alg.indecomposables(d).projection.apply(alg.to_vector(n.generators[i], d)));
			}
			o.require(n.block(m).size() == q_dim(pres, m) &&
			              Subspace::span(3, q_dim(pres, m), span).dim() == q_dim(pres, m),
			          "Q dimension changes in degree " + std::to_string(d));
		}
		for (const auto& [d, m] : n.induced_p1) {
			FpMatrix composite = m;
			SteenrodElement power = p1;
			for (int e = d + 4;; e += 4) {
				o.require(rank(composite) == rank(alg.induced_q_map(power, d)), "composite P^1 rank changes");
				++chains;
				const auto next = n.induced_p1.find(e);
				if (next == n.induced_p1.end())
					break;
				composite = next->second * composite;
				power = steenrod::multiply(p1, power);
			}
		}
	}
	o.detail << "100 raw tables, " << chains << " composite ranks";
}

void census(Outcome& o)
{
	using namespace operahedra;
	auto count_binary = [](int leaves) {
		std::vector<unsigned long long> c(static_cast<std::size_t>(leaves + 1), 0);
		c[1] = 1;
		for (int k = 2; k <= leaves; ++k)
			for (int left = 1; left < k; ++left)
				c[static_cast<std::size_t>(k)] += c[static_cast<std::size_t>(left)] * c[static_cast<std::size_t>(k - left)];
		return c[static_cast<std::size_t>(leaves)];
	};
	auto count_vertices = [&](int n) {
		std::vector<int> perm(static_cast<std::size_t>(n));
		std::iota(perm.begin(), perm.end(), 1);
		unsigned long long v = 0;
		do
			v += count_binary(n);
		while (std::next_permutation(perm.begin(), perm.end()));
		return v;
	};
	// Ordered partitions into >= 2 blocks, as surjective block labellings.
	auto count_facets = [](int n) {
		unsigned long long f = 0;
		for (int k = 2; k <= n; ++k) {
			std::vector<int> label(static_cast<std::size_t>(n), 0);
			for (;;) {
				std::set<int> used(label.begin(), label.end());
				if (static_cast<int>(used.size()) == k)
					++f;
				std::size_t i = 0;
				while (i < label.size() && ++label[i] == k)
					label[i++] = 0;
				if (i == label.size())
					break;
			}
		}
		return f;
	};
	const std::vector<std::pair<unsigned long long, unsigned long long>> expected{{2, 2}, {12, 12}, {120, 74}};
	for (int n = 2; n <= 4; ++n) {
		const auto vertices = enumerate_vertices(n).size();
		const auto facets = enumerate_facets(n);
		const auto [ev, ef] = expected[static_cast<std::size_t>(n - 2)];
		o.require(vertices == ev && count_vertices(n) == ev, "vertex count of Gamma_" + std::to_string(n));
		o.require(facets.size() == ef && count_facets(n) == ef, "facet count of Gamma_" + std::to_string(n));
		for (const auto& f : facets)
			o.require(f.dimension == n - 2, "facet dimension of Gamma_" + std::to_string(n));
		o.detail << "Gamma_" << n << " " << vertices << "/" << facets.size() << ", ";
	}
	const auto k5 = binary_trees(5).size();
	o.require(k5 == 14 && count_binary(5) == 14, "vertex count of K_5");
	o.detail << "K_5 " << k5;
}

void frobenius(Outcome& o)
{
	std::size_t compared = 0, models = 0;
	for (auto [p, degs] : std::vector<std::pair<int, std::vector<int>>>{
	         {3, {3}}, {3, {6}}, {3, {3, 3}}, {3, {3, 6}}, {5, {5}}}) {
		for (const auto& pres : models_of(p, degs, 6)) {
			const Algebra alg(pres);
			const auto r = reduce_frobenius(alg);
			o.require(r.validation.ok(), "reduced table fails validation");
			const auto up = check_thmA_at(alg, 1).verdicts;
			const auto down = check_thmA_at(Algebra(r.reduced), 0).verdicts;
			o.require(up.size() == down.size(), "verdict lists differ in length");
			for (std::size_t i = 0; i < std::min(up.size(), down.size()); ++i) {
				o.require(up[i].family == down[i].family && up[i].b == down[i].b && up[i].c == down[i].c &&
				              up[i].t == down[i].t,
				          "verdicts are not aligned");
				o.require(up[i].passed == down[i].passed && up[i].rank == down[i].rank, "verdicts disagree");
				++compared;
			}
			++models;
		}
	}
	o.require(models > 0, "no models");
	o.detail << models << " models, " << compared << " verdicts";
}

}  // namespace

int main()
{
	const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
	    {"Steenrod identities", steenrod_identities},
	    {"P^c P^b kappa = binom(b+c, b) kappa^p", kappa_identity},
	    {"random models are D_1 and not D_p", remark_suite},
	    {"single sphere max_dn table", max_dn_table},
	    {"Sp(2) model at p = 3", sp2_model},
	    {"S^3 at p = 5 fails A3", s3_counterexample},
	    {"normalization on random tables", normalization},
	    {"permuto-associahedron census", census},
	    {"Frobenius reduction coherence", frobenius},
	};
	int failures = 0;
	for (std::size_t i = 0; i < criteria.size(); ++i) {
		Outcome o;
		const auto start = std::chrono::steady_clock::now();
		try {
			criteria[i].second(o);
		} catch (const std::exception& e) {
			o.passed = false;
			o.detail << "exception: " << e.what();
		}
		const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
		std::printf("criterion %zu: %s  %s (%.2f s): %s\n", i + 1, o.passed ? "PASS" : "FAIL",
		            criteria[i].first.c_str(), secs, o.detail.str().c_str());
		std::fflush(stdout);
		failures += o.passed ? 0 : 1;
	}
	return failures == 0 ? 0 : 1;
}
