#pragma once

// Text form of a presentation:
//
//   p = 3
//   generator y halfdeg 2
//   action P^1 y = 2*y^2
//
// Statements end at a newline or ';'. '#' starts a comment. Missing top
// entries P^m y = y^p are filled in and noted.

#include <cctype>
#include <cstddef>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "fp_linear.hpp"
#include "truncated_algebra.hpp"

namespace dnalg {

class PresentationError : public std::runtime_error {
public:
	PresentationError(std::size_t line, std::size_t column, const std::string& message)
	    : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
	      line_(line), column_(column), message_(message) {}
	std::size_t line() const { return line_; }
	std::size_t column() const { return column_; }
	const std::string& message() const { return message_; }

private:
	std::size_t line_, column_;
	std::string message_;
};

struct ParsedPresentation {
	AlgebraPresentation presentation;
	std::vector<std::string> notes;
};

namespace detail {

struct Token {
	enum Kind { ident, number, symbol, end_statement, end } kind = end;
	std::string text;
	std::size_t line = 1, column = 1;
};

inline std::vector<Token> tokenize(std::string_view src)
{
	std::vector<Token> out;
	std::size_t line = 1, col = 1;
	std::size_t i = 0;
	auto advance = [&](std::size_t n) {
		for (std::size_t k = 0; k < n; ++k, ++i) {
			if (src[i] == '\n') {
				++line;
				col = 1;
			} else {
				++col;
			}
		}
	};
	while (i < src.size()) {
		const char c = src[i];
		if (c == '#') {
			while (i < src.size() && src[i] != '\n')
				advance(1);
		} else if (c == '\n' || c == ';') {
			out.push_back({Token::end_statement, std::string(1, c), line, col});
			advance(1);
		} else if (std::isspace(static_cast<unsigned char>(c))) {
			advance(1);
		} else if (std::isdigit(static_cast<unsigned char>(c))) {
			std::size_t j = i;
			while (j < src.size() && std::isdigit(static_cast<unsigned char>(src[j])))
				++j;
			out.push_back({Token::number, std::string(src.substr(i, j - i)), line, col});
			advance(j - i);
		} else if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
			std::size_t j = i;
			while (j < src.size() && (std::isalnum(static_cast<unsigned char>(src[j])) || src[j] == '_'))
				++j;
			out.push_back({Token::ident, std::string(src.substr(i, j - i)), line, col});
			advance(j - i);
		} else if (std::string_view("=^+-*").find(c) != std::string_view::npos) {
			out.push_back({Token::symbol, std::string(1, c), line, col});
			advance(1);
		} else {
			throw PresentationError(line, col, std::string("unexpected character '") + c + "'");
		}
	}
	out.push_back({Token::end, "", line, col});
	return out;
}

struct RawTerm {
	int sign = 1;
	std::vector<long long> coeffs;
	std::vector<std::pair<std::string, int>> factors;
	Token at;
};

struct RawAction {
	int k = 0;
	std::string generator;
	std::vector<RawTerm> terms;
	Token at, generator_at;
};

class PresentationParser {
public:
	explicit PresentationParser(std::string_view text) : toks_(tokenize(text)) {}

	ParsedPresentation parse()
	{
		while (peek().kind != Token::end) {
			if (peek().kind == Token::end_statement) {
				++pos_;
				continue;
			}
			statement();
			if (peek().kind != Token::end && peek().kind != Token::end_statement)
				fail(peek(), "expected end of statement, found '" + peek().text + "'");
		}
		return build();
	}

private:
	const Token& peek() const { return toks_[pos_]; }
	Token take() { return toks_[pos_++]; }

	[[noreturn]] static void fail(const Token& t, const std::string& msg) { throw PresentationError(t.line, t.column, msg); }

	Token expect_symbol(const std::string& s)
	{
		if (peek().kind != Token::symbol || peek().text != s)
			fail(peek(), "expected '" + s + "'");
		return take();
	}
	Token expect_ident(const std::string& what)
	{
		if (peek().kind != Token::ident)
			fail(peek(), "expected " + what);
		return take();
	}
	long long expect_number(const std::string& what)
	{
		if (peek().kind != Token::number)
			fail(peek(), "expected " + what);
		const Token t = take();
		if (t.text.size() > 9)
			fail(t, "number too large");
		return std::stoll(t.text);
	}

	void statement()
	{
		const Token head = expect_ident("'p', 'generator' or 'action'");
		if (head.text == "p") {
			expect_symbol("=");
			const Token at = peek();
			const long long p = expect_number("a prime");
			if (p_)
				fail(head, "p is set twice");
			if (p < 3 || !is_prime(p))
				fail(at, "p must be an odd prime, got " + std::to_string(p));
			p_ = static_cast<int>(p);
			p_at_ = head;
		} else if (head.text == "generator") {
			const Token name = expect_ident("a generator name");
			const Token kw = expect_ident("'halfdeg'");
			if (kw.text != "halfdeg")
				fail(kw, "expected 'halfdeg'");
			const Token at = peek();
			const long long m = expect_number("a half-degree");
			if (m < 1)
				fail(at, "half-degree must be positive");
			for (const auto& g : generators_)
				if (g.first.name == name.text)
					fail(name, "generator '" + name.text + "' is declared twice");
			generators_.push_back({{name.text, static_cast<int>(m)}, name});
		} else if (head.text == "action") {
			RawAction a;
			a.at = head;
			const Token op = expect_ident("P^k");
			if (op.text != "P")
				fail(op, "expected P^k");
			expect_symbol("^");
			const Token kt = peek();
			a.k = static_cast<int>(expect_number("the power k"));
			if (a.k < 1)
				fail(kt, "k must be positive");
			a.generator_at = expect_ident("a generator name");
			a.generator = a.generator_at.text;
			expect_symbol("=");
			a.terms = polynomial();
			actions_.push_back(std::move(a));
		} else {
			fail(head, "unknown statement '" + head.text + "'");
		}
	}

	std::vector<RawTerm> polynomial()
	{
		std::vector<RawTerm> terms;
		int sign = 1;
		if (peek().kind == Token::symbol && (peek().text == "+" || peek().text == "-"))
			sign = take().text == "-" ? -1 : 1;
		while (true) {
			RawTerm t = term();
			t.sign = sign;
			terms.push_back(std::move(t));
			if (peek().kind == Token::symbol && (peek().text == "+" || peek().text == "-"))
				sign = take().text == "-" ? -1 : 1;
			else
				break;
		}
		return terms;
	}

	RawTerm term()
	{
		RawTerm t;
		t.at = peek();
		bool any = false;
		while (true) {
			if (peek().kind == Token::number) {
				t.coeffs.push_back(expect_number("a coefficient"));
				any = true;
			} else if (peek().kind == Token::ident) {
				const Token name = take();
				int e = 1;
				if (peek().kind == Token::symbol && peek().text == "^") {
					take();
					e = static_cast<int>(expect_number("an exponent"));
				}
				t.factors.push_back({name.text, e});
				names_.push_back(name);
				any = true;
			} else {
				break;
			}
			if (peek().kind == Token::symbol && peek().text == "*") {
				take();
				if (peek().kind != Token::number && peek().kind != Token::ident)
					fail(peek(), "expected a factor after '*'");
			} else if (peek().kind != Token::number && peek().kind != Token::ident) {
				break;
			}
		}
		if (!any)
			fail(peek(), "expected a term");
		return t;
	}

	ParsedPresentation build()
	{
		if (!p_)
			fail(toks_.front(), "missing 'p = <prime>'");
		ParsedPresentation out;
		AlgebraPresentation& pres = out.presentation;
		pres.p = *p_;
		std::vector<std::size_t> order(generators_.size());
		for (std::size_t i = 0; i < order.size(); ++i)
			order[i] = i;
		std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
			return generators_[a].first.half_degree < generators_[b].first.half_degree;
		});
		std::map<std::string, std::size_t> index;
		for (std::size_t i : order) {
			index[generators_[i].first.name] = pres.generators.size();
			pres.generators.push_back(generators_[i].first);
		}
		for (const Token& n : names_)
			if (!index.contains(n.text))
				fail(n, "unknown generator '" + n.text + "'");

		for (const RawAction& a : actions_) {
			auto it = index.find(a.generator);
			if (it == index.end())
				fail(a.generator_at, "unknown generator '" + a.generator + "'");
			const std::size_t g = it->second;
			const int m = pres.generators[g].half_degree;
			const int want = 2 * m + 2 * a.k * (pres.p - 1);
			AlgebraElement value = pres.zero();
			for (const RawTerm& t : a.terms) {
				long long coeff = t.sign;
				for (long long c : t.coeffs)
					coeff = coeff * mod_p(c, pres.p) % pres.p;
				Monomial mono{std::vector<int>(pres.generators.size(), 0)};
				for (const auto& [name, e] : t.factors)
					mono.exps[index.at(name)] += e;
				if (mod_p(coeff, pres.p) != 0 && !t.factors.empty() && pres.degree(mono) != want)
					fail(t.at, "term has degree " + std::to_string(pres.degree(mono)) + ", expected " +
					               std::to_string(want) + " for P^" + std::to_string(a.k) + " " + a.generator);
				if (mod_p(coeff, pres.p) != 0 && t.factors.empty() && want != 0)
					fail(t.at, "constant term in an action of degree " + std::to_string(want));
				value.add_term(std::move(mono), coeff);
			}
			if (a.k > m) {
				if (!value.is_zero())
					fail(a.at, "P^" + std::to_string(a.k) + " must vanish on a generator of half-degree " +
					               std::to_string(m));
				continue;
			}
			if (!pres.action.emplace(std::make_pair(a.k, g), std::move(value)).second)
				fail(a.at, "P^" + std::to_string(a.k) + " " + a.generator + " is given twice");
		}
		for (std::size_t g : pres.fill_unstable_top())
			out.notes.push_back("P^" + std::to_string(pres.generators[g].half_degree) + " " + pres.generators[g].name +
			                    " = " + pres.generators[g].name + "^" + std::to_string(pres.p) + " filled in");
		return out;
	}

	std::vector<Token> toks_;
	std::size_t pos_ = 0;
	std::optional<int> p_;
	Token p_at_;
	std::vector<std::pair<Generator, Token>> generators_;
	std::vector<RawAction> actions_;
	std::vector<Token> names_;
};

}  // namespace detail

inline ParsedPresentation parse_presentation(std::string_view text)
{
	return detail::PresentationParser(text).parse();
}

inline ParsedPresentation load_presentation(const std::string& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
		throw std::runtime_error("cannot read " + path);
	std::ostringstream ss;
	ss << in.rdbuf();
	return parse_presentation(ss.str());
}

/// Polynomial text in the generator names, e.g. "2*y4^2 + y8".
inline std::string render(const AlgebraPresentation& pres, const AlgebraElement& x)
{
	if (x.is_zero())
		return "0";
	std::string s;
	for (auto it = x.terms().rbegin(); it != x.terms().rend(); ++it) {
		const auto& [m, c] = *it;
		if (!s.empty())
			s += " + ";
		std::string factors;
		for (std::size_t i = 0; i < m.exps.size(); ++i) {
			if (m.exps[i] == 0)
				continue;
			if (!factors.empty())
				factors += "*";
			factors += pres.generators[i].name;
			if (m.exps[i] > 1)
				factors += "^" + std::to_string(m.exps[i]);
		}
		if (factors.empty())
			s += std::to_string(c);
		else if (c == 1)
			s += factors;
		else
			s += std::to_string(c) + "*" + factors;
	}
	return s;
}

inline std::string render(const AlgebraPresentation& pres)
{
	std::string s = "p = " + std::to_string(pres.p) + "\n";
	for (const auto& g : pres.generators)
		s += "generator " + g.name + " halfdeg " + std::to_string(g.half_degree) + "\n";
	for (std::size_t i = 0; i < pres.generators.size(); ++i)
		for (const auto& [key, value] : pres.action)
			if (key.second == i)
				s += "action P^" + std::to_string(key.first) + " " + pres.generators[i].name + " = " +
				     render(pres, value) + "\n";
	return s;
}

}  // namespace dnalg
