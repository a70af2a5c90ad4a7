#pragma once

#include <functional>
#include <random>
#include <set>
#include <vector>

#include "dnalg/fp_linear.hpp"

namespace testing_support {

using dnalg::FpMatrix;
using dnalg::Vec;

/// Calls f on every vector of F_p^n.
inline void for_each_vector(int p, std::size_t n, const std::function<void(const Vec&)>& f)
{
	Vec v(n, 0);
	while (true) {
		f(v);
		std::size_t i = 0;
		while (i < n && ++v[i] == p)
			v[i++] = 0;
		if (i == n)
			return;
	}
}

inline FpMatrix random_matrix(std::mt19937& rng, int p, std::size_t rows, std::size_t cols, double density = 1.0)
{
	std::uniform_int_distribution<int> val(0, p - 1);
	std::bernoulli_distribution keep(density);
	FpMatrix m(p, rows, cols);
	for (std::size_t i = 0; i < rows; ++i)
		for (std::size_t j = 0; j < cols; ++j)
			m(i, j) = keep(rng) ? val(rng) : 0;
	return m;
}

/// All F_p-combinations of the given vectors, as a set.
inline std::set<Vec> span_by_enumeration(int p, std::size_t ambient, const std::vector<Vec>& gens)
{
	std::set<Vec> out;
	for_each_vector(p, gens.size(), [&](const Vec& c) {
		Vec v(ambient, 0);
		for (std::size_t g = 0; g < gens.size(); ++g)
			for (std::size_t j = 0; j < ambient; ++j)
				v[j] = (v[j] + c[g] * gens[g][j]) % p;
		out.insert(v);
	});
	return out;
}

/// log_p of a set size that is known to be a power of p.
inline std::size_t log_p(std::size_t size, int p)
{
	std::size_t d = 0;
	while (size > 1) {
		size /= static_cast<std::size_t>(p);
		++d;
	}
	return d;
}

}  // namespace testing_support
