#pragma once

// Rooted labeled trees behind the order-by-order expansion: streaming
// enumeration, tree values, structural counting audits.  The sum of tree
// values over a class (k, nu) is an independent combinatorial oracle for the
// recursion coefficients at low order.
//
// Children are ordered (planar equivalence): mirror arrangements of the two
// lines entering a vertex count as distinct trees.  This is the counting
// under which the class sums reproduce the recursion with no extra symmetry
// factors.

#include <functional>
#include <string>
#include <vector>

#include "oscsum/fourier.hpp"

namespace oscsum {

enum class TreeExpansion { Formal, Resummed };

struct TreeNode {
  enum class Kind { Vertex, WhiteBullet, BlackBullet };
  Kind kind = Kind::WhiteBullet;
  Mode mode;      // black bullets: the mode label nu_v != 0; zero otherwise
  Mode momentum;  // momentum of the line this node's exiting line carries
  std::vector<TreeNode> children;  // ordered; empty for bullets

  bool is_vertex() const { return kind == Kind::Vertex; }
  int fanin() const { return static_cast<int>(children.size()); }
  bool in_v0() const { return is_vertex() && momentum.is_zero(); }
};

struct Tree {
  TreeNode root;  // the node whose exiting line is the root line
  int order = 0;
  TreeExpansion expansion = TreeExpansion::Formal;
};

// Streams every tree of the class (k, nu) exactly once, returning the count.
// Black-bullet mode labels range over the forcing support restricted to
// |nu_v| <= mode_budget.  For nu == 0 the class carries the zero-momentum
// root constraint (the root is a two-line vertex and no line entering any
// zero-momentum vertex exits a white bullet).  Throws BudgetError (with the
// count so far) if more than max_trees trees would be produced.
long long enumerate_trees(int k, const Mode& nu, TreeExpansion expansion,
                          const ProblemSpec& spec, int mode_budget,
                          const std::function<void(const Tree&)>& visit,
                          long long max_trees = 20000000);

// Product of propagators over lines and node factors over nodes.
Complex tree_value(const Tree& t, const ProblemSpec& spec);

// Sum of tree values over the class (k, nu); equals the corresponding
// recursion coefficient (oracle equivalence).
Complex sum_class(int k, const Mode& nu, TreeExpansion expansion, const ProblemSpec& spec,
                  int mode_budget, long long max_trees = 20000000);

// Structural counters and the counting relations they must satisfy.
struct TreeCountAudit {
  int E = 0, E_B = 0, E_W = 0;  // endpoints, black, white
  int V = 0, V0 = 0, V1 = 0, V2 = 0;
  int L0 = 0, L1 = 0, L2 = 0;  // zero-momentum lines, lines exiting V1, rest
  int k = 0;                   // V - V0 + E_B
  int branching = 2;
  bool pass = true;
  std::vector<std::string> violations;
};

TreeCountAudit audit_tree_counts(const Tree& t);

// DOT dump for documentation; node shape encodes the kind, edge labels the
// momentum.  Not load-bearing.
std::string tree_to_dot(const Tree& t, const ProblemSpec& spec);

// Canonical shape key with mode labels erased (kinds and arity only, as an
// unordered-shape fingerprint); used to test the shape-count bound 2^(2k-1).
std::string tree_shape_key(const TreeNode& n);

}  // namespace oscsum
