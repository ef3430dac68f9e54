#include "oscsum/trees.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace oscsum {

namespace {

struct Ctx {
  const ProblemSpec& spec;
  TreeExpansion expansion;
  int N;  // black-bullet mode budget
  long long count = 0;
  long long max_trees = 0;
};

template <typename F>
void for_each_mode_in_ball(int d, int radius, F&& fn) {
  Mode nu(d);
  auto rec = [&](auto&& self, int i, int budget) -> void {
    if (i == d) {
      fn(nu);
      return;
    }
    for (int v = -budget; v <= budget; ++v) {
      nu[i] = v;
      self(self, i + 1, budget - std::abs(v));
    }
    nu[i] = 0;
  };
  rec(rec, 0, radius);
}

// Emits every subtree whose exiting line carries momentum nu and whose order
// contribution (non-zero-momentum vertices plus black bullets) is k.
template <typename Sink>
void gen(Ctx& c, int k, const Mode& nu, Sink&& sink) {
  const int d = nu.dim();
  if (k < 0) return;
  if (k == 0) {
    if (nu.is_zero()) {
      TreeNode white;
      white.kind = TreeNode::Kind::WhiteBullet;
      white.mode = Mode(d);
      white.momentum = Mode(d);
      sink(std::move(white));
    }
    return;
  }
  if (nu.l1() > k * c.N) return;  // at most k black bullets of size <= N below

  if (k == 1 && !nu.is_zero() && nu.l1() <= c.N &&
      c.spec.forcing.at(nu) != Complex(0.0, 0.0)) {
    TreeNode black;
    black.kind = TreeNode::Kind::BlackBullet;
    black.mode = nu;
    black.momentum = nu;
    sink(std::move(black));
  }

  // Vertex with a single entering line; only with nonzero momentum, and only
  // in the expansion whose recursion keeps the second-derivative term.
  if (c.expansion == TreeExpansion::Formal && !nu.is_zero() && k >= 2) {
    gen(c, k - 1, nu, [&](TreeNode&& child) {
      TreeNode v;
      v.kind = TreeNode::Kind::Vertex;
      v.mode = Mode(d);
      v.momentum = nu;
      v.children.push_back(std::move(child));
      sink(std::move(v));
    });
  }

  // Vertex with two (ordered) entering lines.  A zero-momentum vertex does
  // not count toward the order, and none of its entering lines may exit a
  // white bullet.
  const bool v0 = nu.is_zero();
  const int kk = k - (v0 ? 0 : 1);
  if (kk < 1) return;
  for (int k1 = 0; k1 <= kk; ++k1) {
    const int k2 = kk - k1;
    if (v0 && (k1 == 0 || k2 == 0)) continue;  // order-0 subtrees are white bullets
    const int r1 = std::min(k1 * c.N, nu.l1() + k2 * c.N);
    for_each_mode_in_ball(d, r1, [&](const Mode& nu1) {
      Mode nu2 = nu - nu1;
      if (nu2.l1() > k2 * c.N) return;
      gen(c, k1, nu1, [&](TreeNode&& c1) {
        gen(c, k2, nu2, [&](TreeNode&& c2) {
          TreeNode v;
          v.kind = TreeNode::Kind::Vertex;
          v.mode = Mode(d);
          v.momentum = nu;
          v.children.reserve(2);
          v.children.push_back(c1);  // copy: c1 is reused across inner emissions
          v.children.push_back(std::move(c2));
          sink(std::move(v));
        });
      });
    });
  }
}

}  // namespace

long long enumerate_trees(int k, const Mode& nu, TreeExpansion expansion,
                          const ProblemSpec& spec, int mode_budget,
                          const std::function<void(const Tree&)>& visit,
                          long long max_trees) {
  if (k < 1) throw PreconditionError("enumerate_trees: k must be >= 1");
  if (nu.dim() != spec.freq.dim())
    throw DimensionMismatchError("enumerate_trees: mode dimension mismatch");
  Ctx c{spec, expansion, mode_budget, 0, max_trees};
  gen(c, k, nu, [&](TreeNode&& root) {
    if (++c.count > c.max_trees)
      throw BudgetError("enumerate_trees: more than " + std::to_string(c.max_trees) +
                            " trees in class (k=" + std::to_string(k) + ", nu=" + nu.str() +
                            ")",
                        c.count);
    Tree t{std::move(root), k, expansion};
    visit(t);
  });
  return c.count;
}

Complex tree_value(const Tree& t, const ProblemSpec& spec) {
  const double c0 = spec.c0;
  const Complex eps = spec.epsilon;
  const bool resummed = t.expansion == TreeExpansion::Resummed;

  auto rec = [&](auto&& self, const TreeNode& n) -> Complex {
    Complex prop(1.0, 0.0);
    if (!n.momentum.is_zero()) {
      double sd = small_divisor(spec.freq, n.momentum);
      if (sd == 0.0)
        throw ResonanceError("tree_value: zero divisor at momentum " + n.momentum.str());
      if (resummed) {
        Complex one_plus = Complex(1.0, 0.0) + Complex(0.0, 1.0) * eps * sd;
        if (std::abs(one_plus) < 1e-30)
          throw SingularityError("tree_value: dressed propagator pole at momentum " +
                                 n.momentum.str());
        prop = 1.0 / (Complex(0.0, sd) * one_plus);
      } else {
        prop = 1.0 / Complex(0.0, sd);
      }
    }

    Complex factor(1.0, 0.0);
    switch (n.kind) {
      case TreeNode::Kind::WhiteBullet:
        factor = Complex(c0, 0.0);
        break;
      case TreeNode::Kind::BlackBullet:
        factor = spec.forcing.at(n.mode);
        if (resummed) factor *= eps;
        break;
      case TreeNode::Kind::Vertex:
        if (n.fanin() == 1) {
          if (resummed)
            throw PreconditionError("tree_value: single-entry vertices do not occur here");
          double sd = small_divisor(spec.freq, n.momentum);
          factor = -Complex(0.0, sd) * Complex(0.0, sd);
        } else if (n.fanin() == 2) {
          if (n.in_v0())
            factor = Complex(-1.0 / (2.0 * c0), 0.0);
          else
            factor = resummed ? -eps : Complex(-1.0, 0.0);
        } else {
          throw PreconditionError("tree_value: vertex fan-in must be 1 or 2");
        }
        break;
    }

    Complex acc = prop * factor;
    for (const TreeNode& ch : n.children) acc *= self(self, ch);
    return acc;
  };
  return rec(rec, t.root);
}

Complex sum_class(int k, const Mode& nu, TreeExpansion expansion, const ProblemSpec& spec,
                  int mode_budget, long long max_trees) {
  Complex acc(0.0, 0.0);
  enumerate_trees(
      k, nu, expansion, spec, mode_budget,
      [&](const Tree& t) { acc += tree_value(t, spec); }, max_trees);
  return acc;
}

TreeCountAudit audit_tree_counts(const Tree& t) {
  TreeCountAudit a;
  int max_fanin = 0;

  auto walk = [&](auto&& self, const TreeNode& n) -> void {
    switch (n.kind) {
      case TreeNode::Kind::WhiteBullet:
        ++a.E;
        ++a.E_W;
        break;
      case TreeNode::Kind::BlackBullet:
        ++a.E;
        ++a.E_B;
        break;
      case TreeNode::Kind::Vertex:
        ++a.V;
        max_fanin = std::max(max_fanin, n.fanin());
        if (n.fanin() == 1) ++a.V1;
        if (n.fanin() == 2) ++a.V2;
        if (n.in_v0()) ++a.V0;
        break;
    }
    if (n.momentum.is_zero())
      ++a.L0;
    else if (n.is_vertex() && n.fanin() == 1)
      ++a.L1;
    else
      ++a.L2;
    for (const TreeNode& ch : n.children) self(self, ch);
  };
  walk(walk, t.root);

  a.k = a.V - a.V0 + a.E_B;
  a.branching = a.V == 0 ? 2 : std::max(max_fanin, 1);

  auto fail = [&](const std::string& what) {
    a.pass = false;
    a.violations.push_back(what);
  };
  if (a.E > (a.branching - 1) * a.V + 1) fail("endpoint count exceeds (s-1)|V|+1");
  if (a.k >= 1) {
    if (a.L1 + a.L2 != a.k) fail("|L1|+|L2| differs from the order");
    if (a.V1 > a.k) fail("|V1| exceeds the order");
    if (a.V0 > a.k - 1) fail("|V0| exceeds order-1");
    if (a.E > a.k) fail("endpoint count exceeds the order");
    if (a.E + a.V > 2 * a.k - 1) fail("node count exceeds 2k-1");
  }
  return a;
}

std::string tree_shape_key(const TreeNode& n) {
  // Unordered, label-free fingerprint: endpoints are leaves, children keys
  // are sorted so mirror arrangements collapse onto one shape.
  if (n.children.empty()) return "e";
  std::vector<std::string> keys;
  keys.reserve(n.children.size());
  for (const TreeNode& ch : n.children) keys.push_back(tree_shape_key(ch));
  std::sort(keys.begin(), keys.end());
  std::string out = "(";
  for (auto& s : keys) out += s;
  out += ")";
  return out;
}

std::string tree_to_dot(const Tree& t, const ProblemSpec& spec) {
  (void)spec;
  std::ostringstream out;
  out << "digraph tree {\n  rankdir=RL;\n  root [shape=none,label=\"root\"];\n";
  int next_id = 0;
  auto walk = [&](auto&& self, const TreeNode& n, const std::string& parent) -> void {
    std::string id = "n" + std::to_string(next_id++);
    switch (n.kind) {
      case TreeNode::Kind::Vertex:
        out << "  " << id << " [shape=circle,label=\"\"];\n";
        break;
      case TreeNode::Kind::WhiteBullet:
        out << "  " << id << " [shape=circle,style=filled,fillcolor=white,label=\"0\"];\n";
        break;
      case TreeNode::Kind::BlackBullet:
        out << "  " << id << " [shape=point,width=0.15];\n";
        break;
    }
    out << "  " << id << " -> " << parent << " [label=\"" << n.momentum.str() << "\"];\n";
    for (const TreeNode& ch : n.children) self(self, ch, id);
  };
  walk(walk, t.root, "root");
  out << "}\n";
  return out.str();
}

}  // namespace oscsum
