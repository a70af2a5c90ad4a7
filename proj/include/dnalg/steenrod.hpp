#pragma once

// The mod p Steenrod algebra for an odd prime p, in the admissible basis.
//
// A monomial is a word in the letters β (the Bockstein) and P^s (s >= 1).
// Words are normalized by the Adem relations, always rewriting the leftmost
// inadmissible pair.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <map>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fp_linear.hpp"

namespace dnalg::steenrod {

/// Letter code for the Bockstein; positive letters s encode P^s.
inline constexpr int kBockstein = -1;

class ParseError : public std::invalid_argument {
public:
	ParseError(const std::string& what, std::size_t column)
	    : std::invalid_argument(what + " (column " + std::to_string(column) + ")"), column_(column) {}
	std::size_t column() const { return column_; }

private:
	std::size_t column_;
};

/// β^{ε0} P^{s1} β^{ε1} ... P^{sk} β^{εk}, stored as its letter sequence.
struct SteenrodMonomial {
	std::vector<int> letters;

	bool is_unit() const { return letters.empty(); }

	/// ε_0..ε_k
	std::vector<int> bockstein_exponents() const
	{
		std::vector<int> eps{0};
		for (int l : letters) {
			if (l == kBockstein)
				eps.back() = 1;
			else
				eps.push_back(0);
		}
		return eps;
	}

	/// s_1..s_k
	std::vector<int> powers() const
	{
		std::vector<int> s;
		for (int l : letters)
			if (l != kBockstein)
				s.push_back(l);
		return s;
	}

	bool has_bockstein() const
	{
		for (int l : letters)
			if (l == kBockstein)
				return true;
		return false;
	}

	friend auto operator<=>(const SteenrodMonomial&, const SteenrodMonomial&) = default;
};

inline int degree(const SteenrodMonomial& m, int p)
{
	int d = 0;
	for (int l : m.letters)
		d += l == kBockstein ? 1 : 2 * l * (p - 1);
	return d;
}

/// s_i >= p s_{i+1} + ε_i for every adjacent pair of reduced powers, and no ββ.
inline bool is_admissible(const SteenrodMonomial& m, int p)
{
	const auto& w = m.letters;
	for (std::size_t i = 0; i < w.size(); ++i) {
		if (w[i] == 0)
			return false;
		if (w[i] == kBockstein) {
			if (i + 1 < w.size() && w[i + 1] == kBockstein)
				return false;
			continue;
		}
		std::size_t j = i + 1;
		int eps = 0;
		if (j < w.size() && w[j] == kBockstein) {
			eps = 1;
			++j;
		}
		if (j < w.size() && w[i] < p * w[j] + eps)
			return false;
	}
	return true;
}

/// Binomial coefficient mod p by Lucas' theorem; zero outside 0 <= k <= n.
inline int binom_mod(long long n, long long k, int p)
{
	if (k < 0 || n < 0 || k > n)
		return 0;
	long long result = 1;
	while (n > 0 || k > 0) {
		const int ni = static_cast<int>(n % p), ki = static_cast<int>(k % p);
		if (ki > ni)
			return 0;
		long long c = 1;
		for (int i = 0; i < ki; ++i)
			c = c * (ni - i) % p * inverse_mod(i + 1, p) % p;
		result = result * c % p;
		n /= p;
		k /= p;
	}
	return static_cast<int>(result);
}

class SteenrodElement {
public:
	explicit SteenrodElement(int p = 3) : p_(p) {}

	static SteenrodElement unit(int p) { return from_monomial(p, {}, 1); }
	static SteenrodElement bockstein(int p) { return from_monomial(p, {{kBockstein}}, 1); }
	static SteenrodElement power(int p, int k)
	{
		if (k < 0)
			throw std::invalid_argument("negative reduced power");
		return k == 0 ? unit(p) : from_monomial(p, {{k}}, 1);
	}

	/// Stores the monomial as given; callers ensure admissibility.
	static SteenrodElement from_monomial(int p, SteenrodMonomial m, int coeff)
	{
		SteenrodElement e(p);
		e.add_term(std::move(m), coeff);
		return e;
	}

	int prime() const { return p_; }
	const std::map<SteenrodMonomial, int>& terms() const { return terms_; }
	bool is_zero() const { return terms_.empty(); }

	int coefficient(const SteenrodMonomial& m) const
	{
		auto it = terms_.find(m);
		return it == terms_.end() ? 0 : it->second;
	}

	bool is_homogeneous() const
	{
		if (terms_.empty())
			return true;
		const int d = dnalg::steenrod::degree(terms_.begin()->first, p_);
		for (const auto& [m, c] : terms_)
			if (dnalg::steenrod::degree(m, p_) != d)
				return false;
		return true;
	}

	/// Degree of a nonzero homogeneous element.
	int degree() const
	{
		if (terms_.empty() || !is_homogeneous())
			throw std::logic_error("degree of a zero or inhomogeneous Steenrod element");
		return dnalg::steenrod::degree(terms_.begin()->first, p_);
	}

	void add_term(SteenrodMonomial m, long long coeff)
	{
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

	SteenrodElement& operator+=(const SteenrodElement& o)
	{
		check(o);
		for (const auto& [m, c] : o.terms_)
			add_term(m, c);
		return *this;
	}
	friend SteenrodElement operator+(SteenrodElement a, const SteenrodElement& b) { return a += b; }
	friend SteenrodElement operator*(long long s, SteenrodElement a)
	{
		SteenrodElement out(a.p_);
		for (auto& [m, c] : a.terms_)
			out.add_term(m, s * c);
		return out;
	}

	friend bool operator==(const SteenrodElement&, const SteenrodElement&) = default;

	void check(const SteenrodElement& o) const
	{
		if (o.p_ != p_)
			throw DimensionError("Steenrod elements over different primes");
	}

private:
	int p_;
	std::map<SteenrodMonomial, int> terms_;
};

enum class RewriteStrategy { leftmost, rightmost };

struct RewriteStats {
	std::size_t steps = 0;  // Adem relation applications
};

namespace detail {

/// Drop P^0 letters; returns false if the word contains ββ (and so vanishes).
inline bool tidy(std::vector<int>& w)
{
	std::vector<int> out;
	out.reserve(w.size());
	for (int l : w) {
		if (l == 0)
			continue;
		if (l == kBockstein && !out.empty() && out.back() == kBockstein)
			return false;
		out.push_back(l);
	}
	w = std::move(out);
	return true;
}

/// Locate an inadmissible pair: (index of first P, index of second P, ε between).
struct Pair {
	std::size_t first, second;
	int eps;
};

inline bool find_pair(const std::vector<int>& w, int p, RewriteStrategy strategy, Pair& out)
{
	bool found = false;
	for (std::size_t i = 0; i < w.size(); ++i) {
		if (w[i] == kBockstein)
			continue;
		std::size_t j = i + 1;
		int eps = 0;
		if (j < w.size() && w[j] == kBockstein) {
			eps = 1;
			++j;
		}
		if (j >= w.size())
			break;
		if (w[i] < p * w[j] + eps) {
			out = {i, j, eps};
			found = true;
			if (strategy == RewriteStrategy::leftmost)
				return true;
		}
	}
	return found;
}

/// The odd-primary Adem relation for P^a β^eps P^b as (coefficient, replacement word) pairs.
inline std::vector<std::pair<int, std::vector<int>>> adem_terms(int a, int eps, int b, int p)
{
	std::vector<std::pair<int, std::vector<int>>> out;
	auto sign = [](long long e) { return e % 2 == 0 ? 1 : -1; };
	if (eps == 0) {
		// a < pb
		for (int i = 0; p * i <= a; ++i) {
			int c = sign(a + i) * binom_mod(static_cast<long long>(p - 1) * (b - i) - 1, a - p * i, p);
			if (mod_p(c, p) != 0)
				out.push_back({mod_p(c, p), {a + b - i, i}});
		}
	} else {
		// a <= pb
		for (int i = 0; p * i <= a; ++i) {
			int c = sign(a + i) * binom_mod(static_cast<long long>(p - 1) * (b - i), a - p * i, p);
			if (mod_p(c, p) != 0)
				out.push_back({mod_p(c, p), {kBockstein, a + b - i, i}});
		}
		for (int i = 0; p * i <= a - 1; ++i) {
			int c = sign(a + i + 1) * binom_mod(static_cast<long long>(p - 1) * (b - i) - 1, a - p * i - 1, p);
			if (mod_p(c, p) != 0)
				out.push_back({mod_p(c, p), {a + b - i, kBockstein, i}});
		}
	}
	return out;
}

class RewriteCache {
public:
	static RewriteCache& instance()
	{
		static RewriteCache cache;
		return cache;
	}

	bool lookup(int p, const std::vector<int>& w, std::map<SteenrodMonomial, int>& out)
	{
		std::lock_guard lock(mutex_);
		auto it = table_.find({p, w});
		if (it == table_.end())
			return false;
		out = it->second;
		return true;
	}

	void store(int p, const std::vector<int>& w, const std::map<SteenrodMonomial, int>& nf)
	{
		std::lock_guard lock(mutex_);
		table_.emplace(std::make_pair(p, w), nf);
	}

private:
	std::mutex mutex_;
	std::map<std::pair<int, std::vector<int>>, std::map<SteenrodMonomial, int>> table_;
};

inline void rewrite_into(int p, std::vector<int> w, long long coeff, RewriteStrategy strategy, SteenrodElement& acc,
                         RewriteStats* stats)
{
	if (mod_p(coeff, p) == 0 || !tidy(w))
		return;
	Pair pr{};
	if (!find_pair(w, p, strategy, pr)) {
		acc.add_term(SteenrodMonomial{std::move(w)}, coeff);
		return;
	}
	const bool cacheable = strategy == RewriteStrategy::leftmost && stats == nullptr;
	std::map<SteenrodMonomial, int> nf;
	if (cacheable && RewriteCache::instance().lookup(p, w, nf)) {
		for (const auto& [m, c] : nf)
			acc.add_term(m, coeff * c);
		return;
	}
	if (stats)
		++stats->steps;
	SteenrodElement local(p);
	for (auto& [c, replacement] : adem_terms(w[pr.first], pr.eps, w[pr.second], p)) {
		std::vector<int> next(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(pr.first));
		next.insert(next.end(), replacement.begin(), replacement.end());
		next.insert(next.end(), w.begin() + static_cast<std::ptrdiff_t>(pr.second) + 1, w.end());
		rewrite_into(p, std::move(next), c, strategy, local, stats);
	}
	if (cacheable)
		RewriteCache::instance().store(p, w, local.terms());
	for (const auto& [m, c] : local.terms())
		acc.add_term(m, coeff * c);
}

}  // namespace detail

/// Normal form of an arbitrary word (letters kBockstein or s >= 0).
inline SteenrodElement adem_rewrite(int p, const std::vector<int>& word,
                                    RewriteStrategy strategy = RewriteStrategy::leftmost, RewriteStats* stats = nullptr)
{
	SteenrodElement out(p);
	detail::rewrite_into(p, word, 1, strategy, out, stats);
	return out;
}

inline SteenrodElement adem_rewrite(int p, const SteenrodMonomial& m) { return adem_rewrite(p, m.letters); }

inline SteenrodElement multiply(const SteenrodElement& a, const SteenrodElement& b)
{
	a.check(b);
	const int p = a.prime();
	SteenrodElement out(p);
	for (const auto& [ma, ca] : a.terms())
		for (const auto& [mb, cb] : b.terms()) {
			std::vector<int> w = ma.letters;
			w.insert(w.end(), mb.letters.begin(), mb.letters.end());
			detail::rewrite_into(p, std::move(w), static_cast<long long>(ca) * cb, RewriteStrategy::leftmost, out,
			                     nullptr);
		}
	return out;
}

/// Admissible monomials of degree d; empty when d exceeds `top` (nothing of
/// that degree acts nontrivially on an algebra concentrated in degrees <= top).
inline std::vector<SteenrodMonomial> basis_of_degree(int p, int d, int top)
{
	std::vector<SteenrodMonomial> out;
	if (d < 0 || d > top)
		return out;
	// Build words right to left: a letter P^s may precede the current word
	// when s >= p * (next power) + ε.
	std::vector<int> word;
	auto extend = [&](auto&& self, int remaining, int next_power, bool front_is_bockstein) -> void {
		if (remaining == 0) {
			out.push_back(SteenrodMonomial{word});
			return;
		}
		if (!front_is_bockstein) {
			word.insert(word.begin(), kBockstein);
			self(self, remaining - 1, next_power, true);
			word.erase(word.begin());
		}
		const int eps = front_is_bockstein ? 1 : 0;
		const int lo = next_power == 0 ? 1 : p * next_power + eps;
		for (int s = lo; 2 * s * (p - 1) <= remaining; ++s) {
			word.insert(word.begin(), s);
			self(self, remaining - 2 * s * (p - 1), s, false);
			word.erase(word.begin());
		}
	};
	extend(extend, d, 0, false);
	std::sort(out.begin(), out.end());
	return out;
}

// --- text form: "2*P^3 P^1 + b P^2" ----------------------------------------

inline std::string render(const SteenrodMonomial& m)
{
	if (m.letters.empty())
		return "1";
	std::string s;
	for (int l : m.letters) {
		if (!s.empty())
			s += ' ';
		s += l == kBockstein ? std::string("b") : "P^" + std::to_string(l);
	}
	return s;
}

inline std::string render(const SteenrodElement& e)
{
	if (e.is_zero())
		return "0";
	std::string s;
	for (const auto& [m, c] : e.terms()) {
		if (!s.empty())
			s += " + ";
		if (m.is_unit())
			s += std::to_string(c);
		else
			s += (c != 1 ? std::to_string(c) + "*" : std::string()) + render(m);
	}
	return s;
}

/// Parse a sum of words; the result is reduced to admissible normal form.
inline SteenrodElement parse(int p, std::string_view text)
{
	SteenrodElement out(p);
	std::size_t i = 0;
	auto skip = [&] {
		while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i])))
			++i;
	};
	auto number = [&]() -> long long {
		const std::size_t start = i;
		long long v = 0;
		while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
			v = v * 10 + (text[i] - '0');
			if (v > 1'000'000'000)
				throw ParseError("number too large", start + 1);
			++i;
		}
		if (i == start)
			throw ParseError("expected a number", start + 1);
		return v;
	};

	skip();
	if (i == text.size())
		throw ParseError("empty Steenrod expression", 1);
	int sign = 1;
	while (true) {
		skip();
		if (i < text.size() && (text[i] == '+' || text[i] == '-')) {
			sign = text[i] == '-' ? -sign : sign;
			++i;
			skip();
		}
		long long coeff = 1;
		bool have_coeff = false;
		if (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
			coeff = number();
			have_coeff = true;
			skip();
			if (i < text.size() && text[i] == '*') {
				++i;
				skip();
			}
		}
		std::vector<int> word;
		while (i < text.size() && (text[i] == 'P' || text[i] == 'b')) {
			if (text[i] == 'b') {
				word.push_back(kBockstein);
				++i;
			} else {
				++i;
				if (i >= text.size() || text[i] != '^')
					throw ParseError("expected '^' after P", i + 1);
				++i;
				word.push_back(static_cast<int>(number()));
			}
			skip();
		}
		if (word.empty() && !have_coeff)
			throw ParseError("expected a term", i + 1);
		detail::rewrite_into(p, std::move(word), sign * coeff, RewriteStrategy::leftmost, out, nullptr);
		skip();
		if (i == text.size())
			break;
		if (text[i] != '+' && text[i] != '-')
			throw ParseError(std::string("unexpected character '") + text[i] + "'", i + 1);
		sign = 1;
	}
	return out;
}

}  // namespace dnalg::steenrod
