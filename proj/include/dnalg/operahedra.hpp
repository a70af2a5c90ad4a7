#pragma once

// Associahedra K_m and permuto-associahedra Γ_n.
//
// A face of Γ_n is a planar tree whose internal nodes have at least two
// children and whose leaves carry nonempty sets partitioning {1..n}. Its
// dimension is n - 1 - (number of internal nodes): the bare leaf {1..n} is
// Γ_n itself, a root over an ordered partition is a facet, and binary trees
// over singletons are vertices. Faces of K_m are the same trees over the
// singletons {1},...,{m} in order.

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dnalg::operahedra {

struct FaceTree {
	std::vector<int> leaf;  // sorted labels; empty for internal nodes
	std::vector<FaceTree> children;

	static FaceTree make_leaf(std::vector<int> labels)
	{
		std::sort(labels.begin(), labels.end());
		return FaceTree{std::move(labels), {}};
	}
	static FaceTree node(std::vector<FaceTree> kids) { return FaceTree{{}, std::move(kids)}; }

	bool is_leaf() const { return children.empty(); }

	std::size_t internal_nodes() const
	{
		if (is_leaf())
			return 0;
		std::size_t n = 1;
		for (const auto& c : children)
			n += c.internal_nodes();
		return n;
	}

	std::size_t leaf_count() const
	{
		if (is_leaf())
			return 1;
		std::size_t n = 0;
		for (const auto& c : children)
			n += c.leaf_count();
		return n;
	}

	/// Labels in left-to-right order.
	std::vector<int> labels() const
	{
		if (is_leaf())
			return leaf;
		std::vector<int> out;
		for (const auto& c : children) {
			auto l = c.labels();
			out.insert(out.end(), l.begin(), l.end());
		}
		return out;
	}

	std::vector<std::vector<int>> leaf_sets() const
	{
		if (is_leaf())
			return {leaf};
		std::vector<std::vector<int>> out;
		for (const auto& c : children) {
			auto l = c.leaf_sets();
			out.insert(out.end(), l.begin(), l.end());
		}
		return out;
	}

	friend bool operator==(const FaceTree& a, const FaceTree& b)
	{
		return a.leaf == b.leaf && a.children == b.children;
	}
	friend bool operator<(const FaceTree& a, const FaceTree& b)
	{
		if (a.leaf != b.leaf)
			return a.leaf < b.leaf;
		return std::lexicographical_compare(a.children.begin(), a.children.end(), b.children.begin(),
		                                    b.children.end());
	}
};

inline std::string render(const FaceTree& t)
{
	if (t.is_leaf()) {
		if (t.leaf.size() == 1)
			return std::to_string(t.leaf[0]);
		std::string s = "{";
		for (std::size_t i = 0; i < t.leaf.size(); ++i)
			s += (i ? "," : "") + std::to_string(t.leaf[i]);
		return s + "}";
	}
	std::string s = "(";
	for (std::size_t i = 0; i < t.children.size(); ++i)
		s += (i ? " " : "") + render(t.children[i]);
	return s + ")";
}

/// Number of labels, or -1 if the labels do not partition {1..n} or a node is unary.
inline int face_size(const FaceTree& t)
{
	std::vector<int> all = t.labels();
	for (const auto& s : t.leaf_sets())
		if (s.empty())
			return -1;
	auto check = [](auto&& self, const FaceTree& f) -> bool {
		if (f.is_leaf())
			return true;
		if (f.children.size() < 2)
			return false;
		for (const auto& c : f.children)
			if (!self(self, c))
				return false;
		return true;
	};
	if (!check(check, t))
		return -1;
	std::sort(all.begin(), all.end());
	for (std::size_t i = 0; i < all.size(); ++i)
		if (all[i] != static_cast<int>(i) + 1)
			return -1;
	return static_cast<int>(all.size());
}

inline int face_dimension(const FaceTree& t)
{
	return static_cast<int>(t.labels().size()) - 1 - static_cast<int>(t.internal_nodes());
}

// --- combinatorial counts -----------------------------------------------------

inline unsigned long long factorial(int n)
{
	unsigned long long f = 1;
	for (int i = 2; i <= n; ++i)
		f *= static_cast<unsigned long long>(i);
	return f;
}

inline unsigned long long catalan(int n)
{
	unsigned long long c = 1;
	for (int i = 0; i < n; ++i)
		c = c * 2 * (2 * static_cast<unsigned long long>(i) + 1) / (static_cast<unsigned long long>(i) + 2);
	return c;
}

inline unsigned long long stirling2(int n, int k)
{
	std::vector<std::vector<unsigned long long>> s(static_cast<std::size_t>(n) + 1,
	                                               std::vector<unsigned long long>(static_cast<std::size_t>(k) + 1, 0));
	s[0][0] = 1;
	for (int i = 1; i <= n; ++i)
		for (int j = 1; j <= std::min(i, k); ++j)
			s[i][j] = static_cast<unsigned long long>(j) * s[i - 1][j] + s[i - 1][j - 1];
	return s[n][k];
}

// --- planar trees: faces of K_m ------------------------------------------------

/// All planar trees with m leaves (internal nodes of arity >= 2); leaves are 1..m in order.
inline std::vector<FaceTree> planar_trees(int m)
{
	if (m < 1)
		throw std::invalid_argument("need at least one leaf");
	// shapes[k]: trees on k leaves with placeholder labels
	std::vector<std::vector<FaceTree>> shapes(static_cast<std::size_t>(m) + 1);
	shapes[1] = {FaceTree::make_leaf({0})};
	for (int k = 2; k <= m; ++k) {
		// root children: a composition of k into >= 2 parts
		std::vector<FaceTree> kids;
		auto compose = [&](auto&& self, int remaining) -> void {
			if (remaining == 0) {
				if (kids.size() >= 2)
					shapes[k].push_back(FaceTree::node(kids));
				return;
			}
			for (int part = 1; part <= remaining; ++part) {
				if (part == k)
					continue;
				for (const auto& sub : shapes[part]) {
					kids.push_back(sub);
					self(self, remaining - part);
					kids.pop_back();
				}
			}
		};
		compose(compose, k);
	}
	std::vector<FaceTree> out;
	for (FaceTree t : shapes[m]) {
		int next = 1;
		auto relabel = [&](auto&& self, FaceTree& f) -> void {
			if (f.is_leaf()) {
				f.leaf = {next++};
				return;
			}
			for (auto& c : f.children)
				self(self, c);
		};
		relabel(relabel, t);
		out.push_back(std::move(t));
	}
	std::sort(out.begin(), out.end());
	return out;
}

inline std::vector<FaceTree> binary_trees(int m)
{
	std::vector<FaceTree> out;
	for (auto& t : planar_trees(m))
		if (static_cast<int>(t.internal_nodes()) == m - 1)
			out.push_back(std::move(t));
	return out;
}

// --- ordered partitions ---------------------------------------------------------

struct OrderedPartition {
	int n = 0;
	std::vector<std::vector<int>> blocks;

	std::vector<int> type() const
	{
		std::vector<int> t;
		for (const auto& b : blocks)
			t.push_back(static_cast<int>(b.size()));
		return t;
	}
	bool valid() const
	{
		std::vector<int> all;
		for (const auto& b : blocks) {
			if (b.empty() || !std::is_sorted(b.begin(), b.end()))
				return false;
			all.insert(all.end(), b.begin(), b.end());
		}
		std::sort(all.begin(), all.end());
		for (std::size_t i = 0; i < all.size(); ++i)
			if (all[i] != static_cast<int>(i) + 1)
				return false;
		return static_cast<int>(all.size()) == n && !blocks.empty();
	}
	friend auto operator<=>(const OrderedPartition&, const OrderedPartition&) = default;
};

inline std::string render(const OrderedPartition& op)
{
	std::string s;
	for (const auto& b : op.blocks) {
		s += "(";
		for (std::size_t i = 0; i < b.size(); ++i)
			s += (i ? "," : "") + std::to_string(b[i]);
		s += ")";
	}
	return s;
}

/// All ordered partitions of {1..n} into exactly m blocks (m = 0: any count).
inline std::vector<OrderedPartition> ordered_partitions(int n, int m = 0)
{
	std::vector<OrderedPartition> out;
	// assign each element a block index; keep surjective assignments
	const int lo = m == 0 ? 1 : m, hi = m == 0 ? n : m;
	for (int k = lo; k <= hi; ++k) {
		std::vector<int> code(static_cast<std::size_t>(n), 0);
		while (true) {
			std::vector<std::vector<int>> blocks(static_cast<std::size_t>(k));
			for (int i = 0; i < n; ++i)
				blocks[static_cast<std::size_t>(code[static_cast<std::size_t>(i)])].push_back(i + 1);
			if (std::none_of(blocks.begin(), blocks.end(), [](const auto& b) { return b.empty(); }))
				out.push_back({n, std::move(blocks)});
			int pos = n - 1;
			while (pos >= 0 && ++code[static_cast<std::size_t>(pos)] == k)
				code[static_cast<std::size_t>(pos--)] = 0;
			if (pos < 0)
				break;
		}
	}
	std::sort(out.begin(), out.end());
	return out;
}

// --- Γ_n -------------------------------------------------------------------------

struct GammaFacet {
	OrderedPartition partition;
	int dimension = 0;
	/// K_m × Γ_{t_1} × ... × Γ_{t_m}
	int associahedron = 0;
	std::vector<int> factors;

	FaceTree label() const
	{
		std::vector<FaceTree> kids;
		for (const auto& b : partition.blocks)
			kids.push_back(FaceTree::make_leaf(b));
		return FaceTree::node(std::move(kids));
	}
};

inline std::vector<GammaFacet> enumerate_facets(int n)
{
	if (n < 1)
		throw std::invalid_argument("n must be positive");
	std::vector<GammaFacet> out;
	for (int m = 2; m <= n; ++m)
		for (auto& op : ordered_partitions(n, m)) {
			GammaFacet f;
			f.factors = op.type();
			f.associahedron = m;
			f.dimension = (m - 2);
			for (int t : f.factors)
				f.dimension += t - 1;
			f.partition = std::move(op);
			out.push_back(std::move(f));
		}
	std::sort(out.begin(), out.end(), [](const GammaFacet& a, const GammaFacet& b) { return a.partition < b.partition; });
	return out;
}

struct GammaVertex {
	std::vector<int> permutation;
	FaceTree tree;  // binary, leaves in permutation order

	friend bool operator==(const GammaVertex& a, const GammaVertex& b) { return a.tree == b.tree; }
};

inline std::vector<GammaVertex> enumerate_vertices(int n)
{
	if (n < 1)
		throw std::invalid_argument("n must be positive");
	std::vector<GammaVertex> out;
	const auto shapes = binary_trees(n);
	std::vector<int> perm(static_cast<std::size_t>(n));
	std::iota(perm.begin(), perm.end(), 1);
	do {
		for (FaceTree t : shapes) {
			auto relabel = [&](auto&& self, FaceTree& f) -> void {
				if (f.is_leaf()) {
					f.leaf = {perm[static_cast<std::size_t>(f.leaf[0] - 1)]};
					return;
				}
				for (auto& c : f.children)
					self(self, c);
			};
			relabel(relabel, t);
			out.push_back({perm, std::move(t)});
		}
	} while (std::next_permutation(perm.begin(), perm.end()));
	return out;
}

/// Every face of Γ_n: planar tree shapes with k leaves over ordered partitions into k blocks.
inline std::vector<FaceTree> enumerate_faces(int n)
{
	std::vector<FaceTree> out;
	for (int k = 1; k <= n; ++k) {
		const auto shapes = planar_trees(k);
		for (const auto& op : ordered_partitions(n, k))
			for (FaceTree t : shapes) {
				auto relabel = [&](auto&& self, FaceTree& f) -> void {
					if (f.is_leaf()) {
						f.leaf = op.blocks[static_cast<std::size_t>(f.leaf[0] - 1)];
						return;
					}
					for (auto& c : f.children)
						self(self, c);
				};
				relabel(relabel, t);
				out.push_back(std::move(t));
			}
	}
	return out;
}

/// Whether vertex v lies on the facet: each block is the leaf set of one node
/// of v, and the blocks occur left to right in order.
inline bool vertex_in_facet(const GammaVertex& v, const OrderedPartition& op)
{
	std::vector<std::vector<int>> spans;  // sorted leaf sets of all nodes
	auto collect = [&](auto&& self, const FaceTree& f) -> std::vector<int> {
		std::vector<int> s;
		if (f.is_leaf())
			s = f.leaf;
		else
			for (const auto& c : f.children) {
				auto cs = self(self, c);
				s.insert(s.end(), cs.begin(), cs.end());
			}
		std::vector<int> sorted = s;
		std::sort(sorted.begin(), sorted.end());
		spans.push_back(std::move(sorted));
		return s;
	};
	const std::vector<int> order = collect(collect, v.tree);
	std::size_t pos = 0;
	for (const auto& block : op.blocks) {
		if (pos + block.size() > order.size())
			return false;
		std::vector<int> seg(order.begin() + static_cast<std::ptrdiff_t>(pos),
		                     order.begin() + static_cast<std::ptrdiff_t>(pos + block.size()));
		std::sort(seg.begin(), seg.end());
		if (seg != block || std::find(spans.begin(), spans.end(), seg) == spans.end())
			return false;
		pos += block.size();
	}
	return pos == order.size();
}

// --- face operators ------------------------------------------------------------------

class ArityMismatch : public std::invalid_argument {
public:
	using std::invalid_argument::invalid_argument;
};

/// ε^{(α_1..α_m)}: a face of K_m and faces of Γ_{t_i} give a face of Γ_n,
/// by grafting the i-th factor, relabelled through α_i, onto leaf i.
inline FaceTree facet_face_operator(const OrderedPartition& op, const FaceTree& k_face,
                                    const std::vector<FaceTree>& factors)
{
	const std::size_t m = op.blocks.size();
	if (!op.valid())
		throw ArityMismatch("not an ordered partition");
	if (k_face.leaf_count() != m || factors.size() != m || face_size(k_face) != static_cast<int>(m))
		throw ArityMismatch("K_m face and factor count must match the number of blocks");
	for (std::size_t i = 0; i < m; ++i)
		if (face_size(factors[i]) != static_cast<int>(op.blocks[i].size()))
			throw ArityMismatch("factor " + std::to_string(i + 1) + " is not a face of Γ_" +
			                    std::to_string(op.blocks[i].size()));
	auto relabel = [](auto&& self, FaceTree f, const std::vector<int>& block) -> FaceTree {
		if (f.is_leaf()) {
			for (int& x : f.leaf)
				x = block[static_cast<std::size_t>(x - 1)];
			std::sort(f.leaf.begin(), f.leaf.end());
			return f;
		}
		for (auto& c : f.children)
			c = self(self, std::move(c), block);
		return f;
	};
	auto graft = [&](auto&& self, const FaceTree& f) -> FaceTree {
		if (f.is_leaf()) {
			const std::size_t i = static_cast<std::size_t>(f.leaf[0] - 1);
			return relabel(relabel, factors[i], op.blocks[i]);
		}
		FaceTree out;
		for (const auto& c : f.children)
			out.children.push_back(self(self, c));
		return out;
	};
	return graft(graft, k_face);
}

/// δ_j: delete label j, renumber, drop empty leaves and collapse unary nodes.
inline FaceTree degeneracy(const FaceTree& face, int j)
{
	const int n = face_size(face);
	if (n < 2)
		throw std::invalid_argument("degeneracy needs a face of Γ_n with n >= 2");
	if (j < 1 || j > n)
		throw std::invalid_argument("j must lie in [1, n]");
	auto go = [&](auto&& self, const FaceTree& f) -> std::optional<FaceTree> {
		if (f.is_leaf()) {
			FaceTree out;
			for (int x : f.leaf)
				if (x != j)
					out.leaf.push_back(x > j ? x - 1 : x);
			if (out.leaf.empty())
				return std::nullopt;
			return out;
		}
		std::vector<FaceTree> kids;
		for (const auto& c : f.children)
			if (auto r = self(self, c))
				kids.push_back(std::move(*r));
		if (kids.empty())
			return std::nullopt;
		if (kids.size() == 1)
			return std::move(kids[0]);
		return FaceTree::node(std::move(kids));
	};
	return *go(go, face);
}

// --- census ------------------------------------------------------------------------------

struct Census {
	int n = 0;
	int dimension = 0;                       // of Γ_n
	std::vector<unsigned long long> f;       // f[d] = number of d-faces of the boundary, d = 0..n-2
	unsigned long long vertices = 0;
	unsigned long long facets = 0;
	long long euler_boundary = 0;
	long long euler_expected = 0;            // 1 + (-1)^n
	bool counts_match_formulas = false;      // vertices = n! C_{n-1}, facets = Σ m! S(n, m)
	bool middle_counts_unverified = false;   // faces strictly between vertices and facets exist
};

inline Census boundary_census(int n)
{
	if (n < 1 || n > 5)
		throw std::invalid_argument("census is limited to 1 <= n <= 5");
	Census c;
	c.n = n;
	c.dimension = n - 1;
	c.f.assign(static_cast<std::size_t>(std::max(n - 1, 0)), 0);
	for (const auto& face : enumerate_faces(n)) {
		const int d = face_dimension(face);
		if (d < n - 1)
			++c.f[static_cast<std::size_t>(d)];
	}
	c.vertices = c.f.empty() ? 0 : c.f.front();
	c.facets = c.f.empty() ? 0 : c.f.back();
	for (std::size_t d = 0; d < c.f.size(); ++d)
		c.euler_boundary += (d % 2 == 0 ? 1 : -1) * static_cast<long long>(c.f[d]);
	c.euler_expected = 1 + (n % 2 == 0 ? 1 : -1);
	unsigned long long facet_formula = 0;
	for (int m = 2; m <= n; ++m)
		facet_formula += factorial(m) * stirling2(n, m);
	c.counts_match_formulas = n == 1 || (c.vertices == factorial(n) * catalan(n - 1) && c.facets == facet_formula);
	c.middle_counts_unverified = n >= 4;
	return c;
}

}  // namespace dnalg::operahedra
