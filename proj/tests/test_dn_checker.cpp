#include "catch_amalgamated.hpp"

#include <random>

#include "dnalg/dn_checker.hpp"
#include "dnalg/presentation_io.hpp"
#include "dnalg/theorem_suite.hpp"
#include "dn_oracle.hpp"
#include "support.hpp"

using namespace dnalg;
using steenrod::SteenrodElement;
using namespace testing_support;

namespace {

Algebra text(const std::string& s) { return Algebra(parse_presentation(s).presentation); }

struct Slot {
	int e;
	SteenrodElement theta;
};

/// The D_n condition over every instance on at most two (degree, β-free monomial) slots.
bool brute_force_dn(const Algebra& alg, int n)
{
	const int p = alg.prime();
	const int top = alg.top_degree();
	for (int d : alg.degrees()) {
		std::vector<Slot> slots;
		for (int e : alg.degrees())
			if (e > 0 && e < d)
				for (const auto& w : steenrod::basis_of_degree(p, d - e, top))
					if (!w.has_bockstein())
						slots.push_back({e, SteenrodElement::from_monomial(p, w, 1)});
		for (std::size_t i = 0; i < slots.size(); ++i)
			for (std::size_t j = i; j < slots.size(); ++j) {
				std::vector<Slot> pick{slots[i]};
				if (j != i)
					pick.push_back(slots[j]);
				std::size_t width = 0;
				for (const auto& s : pick)
					width += alg.dim(s.e);
				bool ok = true;
				for_each_vector(p, width, [&](const Vec& c) {
					if (!ok)
						return;
					DnInstance inst;
					inst.n = n;
					std::size_t k = 0;
					for (const auto& s : pick) {
						Vec a(c.begin() + static_cast<std::ptrdiff_t>(k),
						      c.begin() + static_cast<std::ptrdiff_t>(k + alg.dim(s.e)));
						k += alg.dim(s.e);
						inst.pairs.push_back({s.theta, alg.from_vector(a, s.e), s.e});
					}
					ok = brute_force_instance(alg, inst) != DnStatus::violated;
				});
				if (!ok)
					return false;
			}
	}
	return true;
}

std::vector<AlgebraPresentation> small_models()
{
	std::vector<AlgebraPresentation> out;
	for (auto [p, degs] : std::vector<std::pair<int, std::vector<int>>>{
	         {3, {1}}, {3, {2}}, {5, {2}}, {5, {3}}, {3, {1, 1}}, {3, {1, 2}}, {5, {1, 2}}, {7, {2}}}) {
		DeriveConfig c;
		c.max_solutions = 2;
		for (auto& s : derive_actions(p, degs, c).solutions)
			out.push_back(std::move(s));
	}
	return out;
}

}  // namespace

TEST_CASE("S^3 at p = 3 fails D_3 at P^1 y")
{
	const Algebra alg = text("p = 3; generator y halfdeg 2; action P^1 y = y^2; action P^2 y = y^3");
	const auto y = alg.presentation().generator(0);
	DnInstance inst{{{SteenrodElement::power(3, 1), y, 4}}, 3};
	const auto v = check_instance(alg, inst);
	CHECK(v.status == DnStatus::violated);
	CHECK(v.degree == 8);
	inst.n = 1;
	const auto w = check_instance(alg, inst);
	REQUIRE(w.status == DnStatus::satisfied);
	CHECK(witness_holds(alg, inst, w));

	const auto r = check_dn(alg, 3);
	CHECK_FALSE(r.passed);
	REQUIRE(r.violation);
	REQUIRE(r.violation->instance.pairs.size() == 1);
	CHECK(steenrod::render(r.violation->instance.pairs[0].theta) == "P^1");
	CHECK(r.violation->instance.pairs[0].alpha == y);
	CHECK(r.violation->verdict.status == DnStatus::violated);
	CHECK(check_dn(alg, 1).passed);
	CHECK(max_dn(alg).value == 1);
}

TEST_CASE("check_instance agrees with exhaustive correction search")
{
	std::mt19937 rng(31);
	std::size_t seen[3] = {0, 0, 0};
	for (const auto& pres : small_models()) {
		const Algebra alg(pres);
		const int p = pres.p;
		const auto degs = alg.degrees();
		for (int trial = 0; trial < 40; ++trial) {
			const int d = degs[rng() % degs.size()];
			std::vector<int> sources;
			for (int e : degs)
				if (e > 0 && e < d)
					sources.push_back(e);
			if (sources.empty())
				continue;
			DnInstance inst;
			inst.n = 1 + static_cast<int>(rng() % static_cast<unsigned>(p));
			const std::size_t pairs = 1 + rng() % 2;
			for (std::size_t k = 0; k < pairs; ++k) {
				const int e = sources[rng() % sources.size()];
				const auto words = steenrod::basis_of_degree(p, d - e, alg.top_degree());
				if (words.empty())
					continue;
				SteenrodElement theta(p);
				for (const auto& w : words)
					theta += SteenrodElement::from_monomial(p, w, static_cast<int>(rng() % p));
				if (theta.is_zero())
					theta = SteenrodElement::from_monomial(p, words[0], 1);
				Vec a(alg.dim(e));
				for (auto& x : a)
					x = static_cast<int>(rng() % p);
				inst.pairs.push_back({theta, alg.from_vector(a, e), e});
			}
			if (inst.pairs.empty())
				continue;
			const auto v = check_instance(alg, inst);
			CHECK(v.status == brute_force_instance(alg, inst));
			++seen[static_cast<int>(v.status)];
			if (v.status == DnStatus::satisfied)
				CHECK(witness_holds(alg, inst, v));
		}
	}
	CHECK(seen[0] > 0);
	CHECK(seen[1] > 0);
}

TEST_CASE("an indecomposable image makes an instance vacuous")
{
	// Not a valid truncated model; the checker only needs the action.
	const Algebra alg = text("p = 3; generator u halfdeg 2; generator w halfdeg 4; action P^1 u = w; "
	                         "action P^2 u = u^3; action P^1 w = 0; action P^2 w = 0; action P^3 w = 0");
	const DnInstance inst{{{SteenrodElement::power(3, 1), alg.presentation().generator(0), 4}}, 2};
	CHECK(check_instance(alg, inst).status == DnStatus::vacuous);
	CHECK(brute_force_instance(alg, inst) == DnStatus::vacuous);
}

TEST_CASE("check_dn agrees with the exhaustive two-slot search")
{
	for (const auto& pres : small_models()) {
		const Algebra alg(pres);
		INFO(render(pres));
		for (int n = 1; n <= pres.p; ++n)
			CHECK(check_dn(alg, n).passed == brute_force_dn(alg, n));
	}
}

TEST_CASE("every valid model is D_1 and not D_p")
{
	for (const auto& pres : small_models()) {
		const Algebra alg(pres);
		INFO(render(pres));
		CHECK(check_dn(alg, 1).passed);
		const auto r = check_dn(alg, pres.p);
		CHECK_FALSE(r.passed);
		REQUIRE(r.violation);
		CHECK(check_instance(alg, r.violation->instance).status == DnStatus::violated);
		CHECK(brute_force_instance(alg, r.violation->instance) == DnStatus::violated);
		const auto m = max_dn(alg);
		CHECK(m.monotone);
		CHECK(m.value >= 1);
		CHECK(m.value < pres.p);
	}
}

TEST_CASE("full theta enumeration never weakens the verdict")
{
	for (const auto& pres : small_models()) {
		const Algebra alg(pres);
		for (int n = 1; n <= pres.p; ++n) {
			const bool single = check_dn(alg, n).passed;
			const auto full = check_dn(alg, n, {2, 3});
			if (!single)
				CHECK_FALSE(full.passed);
		}
		DnConfig one{1, 0};
		DnConfig two{2, 0};
		for (int n = 1; n <= pres.p; ++n)
			if (!check_dn(alg, n, one).passed)
				CHECK_FALSE(check_dn(alg, n, two).passed);
	}
}

TEST_CASE("reports list their search restrictions")
{
	const Algebra alg = text("p = 5; generator y halfdeg 2; action P^1 y = 2*y^3");
	const auto r = check_dn(alg, 2);
	CHECK(r.passed);
	CHECK(r.restrictions.size() >= 2);
	CHECK_THROWS_AS(check_dn(alg, 0), std::invalid_argument);
	CHECK_THROWS_AS(check_dn(alg, 6), std::invalid_argument);
	CHECK_THROWS_AS(check_dn(alg, 1, {0, 0}), std::invalid_argument);
}

TEST_CASE("malformed instances are rejected")
{
	const Algebra alg = text("p = 3; generator y halfdeg 2; action P^1 y = y^2");
	const auto y = alg.presentation().generator(0);
	CHECK_THROWS_AS(check_instance(alg, DnInstance{{}, 1}), DnInstanceError);
	CHECK_THROWS_AS(check_instance(alg, DnInstance{{{SteenrodElement::power(3, 1), y, 8}}, 1}), DnInstanceError);
	const auto mixed = SteenrodElement::power(3, 1) + SteenrodElement::power(3, 2);
	CHECK_THROWS_AS(check_instance(alg, DnInstance{{{mixed, y, 4}}, 1}), DnInstanceError);
}
