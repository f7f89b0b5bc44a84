#include "pisim/jordan.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <tuple>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "pisim/errors.hpp"

namespace pisim {
namespace {

Complex snap(Complex z, double radius) {
  const double r = std::abs(z);
  if (r <= radius) return Complex{0.0, 0.0};
  if (std::abs(r - 1.0) <= radius) z /= r;
  // Adding +0.0 turns negative zeros positive so equal specs print equally.
  return Complex{z.real() + 0.0, z.imag() + 0.0};
}

double canonical_argument(Complex z, double radius) {
  if (z == Complex{}) return 0.0;
  double a = std::arg(z);
  if (a < -std::numbers::pi + radius) a += 2.0 * std::numbers::pi;
  return a;
}

/// Indices of `eigs` in canonical order. Moduli are grouped into levels by
/// single linkage at `radius` so that rounding cannot reorder eigenvalues of
/// (numerically) equal modulus.
std::vector<std::size_t> canonical_order(const std::vector<Complex>& eigs, double radius) {
  std::vector<std::size_t> idx(eigs.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return std::abs(eigs[a]) > std::abs(eigs[b]);
  });
  std::vector<std::size_t> out;
  out.reserve(idx.size());
  std::size_t start = 0;
  while (start < idx.size()) {
    std::size_t end = start + 1;
    while (end < idx.size() &&
           std::abs(eigs[idx[end - 1]]) - std::abs(eigs[idx[end]]) <= radius) {
      ++end;
    }
    std::vector<std::size_t> level(idx.begin() + static_cast<std::ptrdiff_t>(start),
                                   idx.begin() + static_cast<std::ptrdiff_t>(end));
    std::stable_sort(level.begin(), level.end(), [&](std::size_t a, std::size_t b) {
      return canonical_argument(eigs[a], radius) < canonical_argument(eigs[b], radius);
    });
    out.insert(out.end(), level.begin(), level.end());
    start = end;
  }
  return out;
}

// Unitary staircase reduction of a (numerically) nilpotent matrix N:
// reduced = basis^* N basis is block strictly upper triangular with diagonal
// block sizes weyr[0], weyr[1], ..., and the leading weyr[0] + ... + weyr[k-1]
// coordinates span null(N^k).
struct Staircase {
  std::vector<int> weyr;
  ComplexMat basis;
  ComplexMat reduced;

  int total() const { return std::accumulate(weyr.begin(), weyr.end(), 0); }
};

Staircase staircase(const ComplexMat& n, double cutoff) {
  const Index s = n.rows();
  Staircase out{{}, ComplexMat::Identity(s, s), n};
  Index off = 0;
  while (off < s) {
    const Index m = s - off;
    const ComplexMat trailing = out.reduced.bottomRightCorner(m, m);
    Eigen::JacobiSVD<ComplexMat> svd(trailing, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    Index d = 0;
    for (Index i = 0; i < m; ++i) {
      if (sv(i) <= cutoff) ++d;
    }
    if (d == 0) break;
    ComplexMat v(m, m);
    v.leftCols(d) = svd.matrixV().rightCols(d);
    v.rightCols(m - d) = svd.matrixV().leftCols(m - d);
    out.reduced.rightCols(m) = out.reduced.rightCols(m) * v;
    out.reduced.bottomRows(m) = v.adjoint() * out.reduced.bottomRows(m);
    out.basis.rightCols(m) = out.basis.rightCols(m) * v;
    out.weyr.push_back(static_cast<int>(d));
    off += d;
  }
  return out;
}

bool weyr_is_concave(const std::vector<int>& weyr) {
  for (std::size_t k = 1; k < weyr.size(); ++k) {
    if (weyr[k] > weyr[k - 1]) return false;
  }
  return true;
}

std::vector<int> segre_from_weyr(const std::vector<int>& weyr) {
  std::vector<int> sizes(weyr.empty() ? 0 : static_cast<std::size_t>(weyr.front()), 0);
  for (int d : weyr) {
    for (int b = 0; b < d; ++b) ++sizes[static_cast<std::size_t>(b)];
  }
  return sizes;
}

struct Cluster {
  Index lo = 0;
  Index hi = 0;
  Complex mean;
  Staircase stairs;

  Index size() const { return hi - lo; }
};

struct ClusteredSchur {
  SchurForm schur;
  std::vector<Cluster> clusters;
  double cutoff = 0.0;
};

struct DendroNode {
  Index left = -1;
  Index right = -1;
  double height = 0.0;
  Index lo = 0;
  Index hi = 0;
};

class UnionFind {
 public:
  explicit UnionFind(Index n) : parent_(static_cast<std::size_t>(n)) {
    std::iota(parent_.begin(), parent_.end(), Index{0});
  }
  Index find(Index x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(Index a, Index b) { parent_[find(a)] = find(b); }

 private:
  std::vector<Index> parent_;
};

void assign_leaf_order(std::vector<DendroNode>& nodes, Index id, std::vector<Index>& order) {
  DendroNode& node = nodes[id];
  node.lo = static_cast<Index>(order.size());
  if (node.left < 0) {
    order.push_back(id);
  } else {
    assign_leaf_order(nodes, node.left, order);
    assign_leaf_order(nodes, node.right, order);
  }
  nodes[id].hi = static_cast<Index>(order.size());
}

ComplexMat shifted_block(const ComplexMat& t, Index lo, Index hi, Complex* mean) {
  const Index k = hi - lo;
  ComplexMat block = t.block(lo, lo, k, k);
  const Complex mu = block.diagonal().mean();
  block.diagonal().array() -= mu;
  if (mean != nullptr) *mean = mu;
  return block;
}

ClusteredSchur cluster_schur(const ComplexMat& a, const Tolerances& tol) {
  tol.validate();
  require_finite(a, "jordan_structure");
  require_square(a, "jordan_structure");
  const Index n = a.rows();

  ClusteredSchur out{schur_upper_triangularize(a, tol), {}, 0.0};
  out.cutoff = tol.rank_rel * spectral_norm(a);
  if (n == 0) return out;

  // Single-linkage dendrogram over the Schur eigenvalues.
  const ComplexVec eig = out.schur.triangular.diagonal();
  std::vector<std::tuple<double, Index, Index>> edges;
  edges.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) edges.emplace_back(std::abs(eig(i) - eig(j)), i, j);
  }
  std::sort(edges.begin(), edges.end());

  std::vector<DendroNode> nodes(static_cast<std::size_t>(n));
  std::vector<Index> node_of(static_cast<std::size_t>(n));
  std::iota(node_of.begin(), node_of.end(), Index{0});
  UnionFind uf(n);
  for (const auto& [dist, i, j] : edges) {
    const Index ri = uf.find(i);
    const Index rj = uf.find(j);
    if (ri == rj) continue;
    DendroNode merged;
    merged.left = node_of[ri];
    merged.right = node_of[rj];
    merged.height = dist;
    nodes.push_back(merged);
    uf.unite(ri, rj);
    node_of[uf.find(ri)] = static_cast<Index>(nodes.size()) - 1;
  }
  const Index root = static_cast<Index>(nodes.size()) - 1;

  std::vector<Index> leaf_order;
  leaf_order.reserve(static_cast<std::size_t>(n));
  assign_leaf_order(nodes, root, leaf_order);
  reorder_schur(out.schur, leaf_order);

  // Top-down: keep the largest subtrees whose shifted block is nilpotent.
  std::vector<Index> pending{root};
  while (!pending.empty()) {
    const Index id = pending.back();
    pending.pop_back();
    const DendroNode& node = nodes[id];
    Cluster cluster;
    cluster.lo = node.lo;
    cluster.hi = node.hi;
    const ComplexMat shifted =
        shifted_block(out.schur.triangular, node.lo, node.hi, &cluster.mean);
    cluster.stairs = staircase(shifted, out.cutoff);
    if (cluster.stairs.total() == cluster.size()) {
      out.clusters.push_back(std::move(cluster));
      continue;
    }
    if (node.left < 0 || node.height <= tol.cluster_abs) {
      std::ostringstream msg;
      msg << "eigenvalues near " << cluster.mean << " lie within cluster radius "
          << tol.cluster_abs << " but do not form a single numerical eigenvalue";
      throw ClusterAmbiguity(msg.str());
    }
    pending.push_back(node.right);
    pending.push_back(node.left);
  }
  std::sort(out.clusters.begin(), out.clusters.end(),
            [](const Cluster& x, const Cluster& y) { return x.lo < y.lo; });

  const ComplexVec sorted_eig = out.schur.triangular.diagonal();
  for (std::size_t p = 0; p < out.clusters.size(); ++p) {
    for (std::size_t q = p + 1; q < out.clusters.size(); ++q) {
      const Cluster& cp = out.clusters[p];
      const Cluster& cq = out.clusters[q];
      for (Index i = cp.lo; i < cp.hi; ++i) {
        for (Index j = cq.lo; j < cq.hi; ++j) {
          if (std::abs(sorted_eig(i) - sorted_eig(j)) <= 2.0 * tol.cluster_abs) {
            std::ostringstream msg;
            msg << "eigenvalue clusters at " << cp.mean << " and " << cq.mean
                << " are closer than 2 * cluster_abs = " << 2.0 * tol.cluster_abs;
            throw ClusterAmbiguity(msg.str());
          }
        }
      }
    }
  }
  for (const Cluster& c : out.clusters) {
    if (!weyr_is_concave(c.stairs.weyr)) {
      std::ostringstream msg;
      msg << "nullity sequence at " << c.mean << " is not concave";
      throw NumericalFailure(msg.str());
    }
  }
  return out;
}

// Jordan chains of a staircase-reduced nilpotent matrix, longest first.
// Columns of the result are x_1..x_L per chain with m x_1 = 0, m x_i = x_{i-1}.
ComplexMat jordan_chains(const ComplexMat& m, const std::vector<int>& weyr) {
  const Index a = m.rows();
  std::vector<Index> offset(weyr.size(), 0);
  for (std::size_t j = 1; j < weyr.size(); ++j) offset[j] = offset[j - 1] + weyr[j - 1];

  struct Chain {
    ComplexVec top;
    int length;
  };
  std::vector<Chain> chains;
  for (std::size_t level = weyr.size(); level-- > 0;) {
    const Index dj = weyr[level];
    const Index existing = static_cast<Index>(chains.size());
    if (dj < existing) throw NumericalFailure("jordan chains: non-concave Weyr sequence");
    if (dj == existing) continue;

    ComplexMat basis;
    if (existing == 0) {
      basis = ComplexMat::Identity(dj, dj);
    } else {
      ComplexMat z(dj, existing);
      for (Index c = 0; c < existing; ++c) {
        ComplexVec v = chains[static_cast<std::size_t>(c)].top;
        const int steps = chains[static_cast<std::size_t>(c)].length - static_cast<int>(level) - 1;
        for (int s = 0; s < steps; ++s) v = m * v;
        z.col(c) = v.segment(offset[level], dj);
      }
      Eigen::HouseholderQR<ComplexMat> qr(z);
      const ComplexMat q = qr.householderQ() * ComplexMat::Identity(dj, dj);
      basis = q.rightCols(dj - existing);
    }
    for (Index c = 0; c < basis.cols(); ++c) {
      ComplexVec top = ComplexVec::Zero(a);
      top.segment(offset[level], dj) = basis.col(c);
      chains.push_back({std::move(top), static_cast<int>(level) + 1});
    }
  }

  ComplexMat k(a, a);
  Index col = 0;
  for (const Chain& chain : chains) {
    std::vector<ComplexVec> seq(static_cast<std::size_t>(chain.length));
    seq.back() = chain.top;
    for (int i = chain.length - 2; i >= 0; --i) {
      seq[static_cast<std::size_t>(i)] = m * seq[static_cast<std::size_t>(i) + 1];
    }
    for (const auto& v : seq) k.col(col++) = v;
  }
  return k;
}

}  // namespace

int JordanEigenBlocks::algebraic_multiplicity() const {
  return std::accumulate(sizes.begin(), sizes.end(), 0);
}

JordanSpec JordanSpec::canonical(std::vector<JordanEigenBlocks> blocks, const Tolerances& tol) {
  tol.validate();
  std::vector<Complex> eigs;
  eigs.reserve(blocks.size());
  int dimension = 0;
  for (auto& entry : blocks) {
    if (!std::isfinite(entry.eigenvalue.real()) || !std::isfinite(entry.eigenvalue.imag())) {
      throw InvalidInput("JordanSpec: non-finite eigenvalue");
    }
    if (entry.sizes.empty()) throw InvalidInput("JordanSpec: eigenvalue without blocks");
    for (int s : entry.sizes) {
      if (s <= 0) throw InvalidInput("JordanSpec: block sizes must be positive");
      dimension += s;
    }
    std::sort(entry.sizes.begin(), entry.sizes.end(), std::greater<>());
    entry.eigenvalue = snap(entry.eigenvalue, tol.cluster_abs);
    eigs.push_back(entry.eigenvalue);
  }
  for (std::size_t i = 0; i < eigs.size(); ++i) {
    for (std::size_t j = i + 1; j < eigs.size(); ++j) {
      if (std::abs(eigs[i] - eigs[j]) <= tol.cluster_abs) {
        std::ostringstream msg;
        msg << "JordanSpec: eigenvalues " << eigs[i] << " and " << eigs[j]
            << " are not separated by more than cluster_abs";
        throw InvalidInput(msg.str());
      }
    }
  }
  JordanSpec spec;
  spec.dimension_ = dimension;
  for (std::size_t i : canonical_order(eigs, tol.cluster_abs)) {
    spec.blocks_.push_back(std::move(blocks[i]));
  }
  return spec;
}

const JordanEigenBlocks* JordanSpec::find(Complex lambda, double radius) const {
  const JordanEigenBlocks* best = nullptr;
  double best_dist = radius;
  for (const auto& entry : blocks_) {
    const double d = std::abs(entry.eigenvalue - lambda);
    if (d <= best_dist) {
      best = &entry;
      best_dist = d;
    }
  }
  return best;
}

int JordanSpec::block_count(Complex lambda, double radius) const {
  const auto* entry = find(lambda, radius);
  return entry == nullptr ? 0 : entry->geometric_multiplicity();
}

bool JordanSpec::equivalent(const JordanSpec& other, double radius) const {
  if (dimension_ != other.dimension_ || blocks_.size() != other.blocks_.size()) return false;
  std::vector<bool> used(other.blocks_.size(), false);
  for (const auto& entry : blocks_) {
    const auto* match = other.find(entry.eigenvalue, radius);
    if (match == nullptr) return false;
    const auto pos = static_cast<std::size_t>(match - other.blocks_.data());
    if (used[pos] || match->sizes != entry.sizes) return false;
    used[pos] = true;
  }
  return true;
}

ComplexMat jordan_block(int size, Complex lambda) {
  if (size < 0) throw InvalidInput("jordan_block: negative size");
  ComplexMat j = ComplexMat::Zero(size, size);
  for (int i = 0; i < size; ++i) {
    j(i, i) = lambda;
    if (i + 1 < size) j(i, i + 1) = 1.0;
  }
  return j;
}

ComplexMat jordan_matrix(const JordanSpec& spec) {
  std::vector<ComplexMat> parts;
  for (const auto& entry : spec.blocks()) {
    for (int s : entry.sizes) parts.push_back(jordan_block(s, entry.eigenvalue));
  }
  return direct_sum(parts);
}

int nullity_at(const ComplexMat& a, Complex lambda, const Tolerances& tol) {
  require_finite(a, "nullity_at");
  require_square(a, "nullity_at");
  ComplexMat shifted = a;
  shifted.diagonal().array() -= lambda;
  return static_cast<int>(a.rows()) - rank_with_tol(shifted, tol);
}

JordanAnalysis jordan_analysis(const ComplexMat& a, const Tolerances& tol) {
  const ClusteredSchur cs = cluster_schur(a, tol);

  std::vector<Complex> eigs;
  for (const Cluster& c : cs.clusters) eigs.push_back(snap(c.mean, tol.cluster_abs));

  std::vector<JordanEigenBlocks> blocks;
  JordanAnalysis out;
  for (std::size_t i : canonical_order(eigs, tol.cluster_abs)) {
    const Cluster& c = cs.clusters[i];
    blocks.push_back({eigs[i], segre_from_weyr(c.stairs.weyr)});
    std::vector<int> seq{0};
    for (int d : c.stairs.weyr) seq.push_back(seq.back() + d);
    out.nullity_sequences.push_back(std::move(seq));
  }
  out.spec = JordanSpec::canonical(std::move(blocks), tol);
  return out;
}

JordanSpec jordan_structure(const ComplexMat& a, const Tolerances& tol) {
  return jordan_analysis(a, tol).spec;
}

JordanTransform jordan_transform(const ComplexMat& a, const JordanSpec& spec,
                                 const Tolerances& tol) {
  ClusteredSchur cs = cluster_schur(a, tol);
  const Index n = a.rows();
  if (spec.dimension() != n) {
    throw InvalidInput("jordan_transform: spec dimension does not match the matrix");
  }

  // Match every spec eigenvalue with one cluster.
  std::vector<std::size_t> cluster_of;
  std::vector<bool> used(cs.clusters.size(), false);
  for (const auto& entry : spec.blocks()) {
    std::size_t best = cs.clusters.size();
    double best_dist = 2.0 * tol.cluster_abs;
    for (std::size_t c = 0; c < cs.clusters.size(); ++c) {
      const double d = std::abs(snap(cs.clusters[c].mean, tol.cluster_abs) - entry.eigenvalue);
      if (!used[c] && d <= best_dist) {
        best = c;
        best_dist = d;
      }
    }
    if (best == cs.clusters.size() ||
        segre_from_weyr(cs.clusters[best].stairs.weyr) != entry.sizes) {
      std::ostringstream msg;
      msg << "jordan_transform: spec entry at " << entry.eigenvalue
          << " does not match the Jordan structure of the matrix";
      throw InvalidInput(msg.str());
    }
    used[best] = true;
    cluster_of.push_back(best);
  }
  if (cluster_of.size() != cs.clusters.size()) {
    throw InvalidInput("jordan_transform: spec does not cover every eigenvalue");
  }

  // Bring clusters into spec order.
  std::vector<Index> order;
  std::vector<Index> offset;
  for (std::size_t c : cluster_of) {
    offset.push_back(static_cast<Index>(order.size()));
    for (Index i = cs.clusters[c].lo; i < cs.clusters[c].hi; ++i) order.push_back(i);
  }
  offset.push_back(n);
  reorder_schur(cs.schur, order);
  ComplexMat& t = cs.schur.triangular;

  // Decouple clusters: Y^{-1} T Y block diagonal.
  ComplexMat y = ComplexMat::Identity(n, n);
  for (std::size_t c = 0; c + 1 < cluster_of.size(); ++c) {
    const Index lo = offset[c];
    const Index len = offset[c + 1] - lo;
    const Index rest = n - lo - len;
    const ComplexMat x = solve_triangular_sylvester(
        t.block(lo, lo, len, len), t.block(lo + len, lo + len, rest, rest),
        -t.block(lo, lo + len, len, rest));
    y.rightCols(rest) += y.block(0, lo, n, len) * x;
    t.block(lo, lo + len, len, rest).setZero();
  }

  // Jordan chains inside each diagonal block.
  std::vector<ComplexMat> chain_blocks;
  for (std::size_t c = 0; c < cluster_of.size(); ++c) {
    const ComplexMat shifted = shifted_block(t, offset[c], offset[c + 1], nullptr);
    const Staircase st = staircase(shifted, cs.cutoff);
    if (st.total() != shifted.rows() || !weyr_is_concave(st.weyr) ||
        segre_from_weyr(st.weyr) != spec.blocks()[c].sizes) {
      throw NumericalFailure("jordan_transform: block structure changed after reordering");
    }
    chain_blocks.push_back(st.basis * jordan_chains(st.reduced, st.weyr));
  }

  JordanTransform out;
  out.transform = cs.schur.unitary * y * direct_sum(chain_blocks);
  // Each chain may be rescaled without changing J; balancing them keeps
  // cond(P) near ||X|| instead of ||X||^2 when the decoupling X is large.
  Index pos = 0;
  for (const auto& entry : spec.blocks()) {
    for (int size : entry.sizes) {
      auto chain = out.transform.middleCols(pos, size);
      const double scale = chain.colwise().norm().maxCoeff();
      if (scale > 0.0) chain /= scale;
      pos += size;
    }
  }
  out.cond = condition_number(out.transform);
  const ComplexMat j = jordan_matrix(spec);
  const ComplexMat similar = out.transform.partialPivLu().solve(a * out.transform);
  out.residual = (similar - j).norm();
  out.bound = tol.residual_abs * out.cond * (1.0 + a.norm());
  if (!(out.residual <= out.bound)) {
    std::ostringstream msg;
    msg << "jordan_transform: residual " << out.residual << " exceeds bound " << out.bound
        << " (cond " << out.cond << ")";
    throw NumericalFailure(msg.str());
  }
  return out;
}

SimilarityCertificate similarity_between(const ComplexMat& a, const ComplexMat& b,
                                         const Tolerances& tol) {
  return similarity_between(a, jordan_structure(a, tol), b, jordan_structure(b, tol), tol);
}

SimilarityCertificate similarity_between(const ComplexMat& a, const JordanSpec& spec_a,
                                         const ComplexMat& b, const JordanSpec& spec_b,
                                         const Tolerances& tol) {
  require_square(a, "similarity_between");
  require_square(b, "similarity_between");
  if (a.rows() != b.rows() || !spec_a.equivalent(spec_b, tol.cluster_abs)) {
    throw NotSimilar("similarity_between: Jordan structures differ");
  }
  const JordanTransform pa = jordan_transform(a, spec_a, tol);
  const JordanTransform pb = jordan_transform(b, spec_b, tol);

  // Permutation carrying A's Jordan layout onto B's.
  auto layout_offsets = [](const JordanSpec& s) {
    std::vector<Index> off;
    Index pos = 0;
    for (const auto& e : s.blocks()) {
      off.push_back(pos);
      pos += e.algebraic_multiplicity();
    }
    return off;
  };
  const auto off_a = layout_offsets(spec_a);
  const auto off_b = layout_offsets(spec_b);
  const Index n = a.rows();
  ComplexMat perm = ComplexMat::Zero(n, n);
  for (std::size_t i = 0; i < spec_a.blocks().size(); ++i) {
    const auto& entry = spec_a.blocks()[i];
    const auto* match = spec_b.find(entry.eigenvalue, tol.cluster_abs);
    const auto j = static_cast<std::size_t>(match - spec_b.blocks().data());
    for (Index k = 0; k < entry.algebraic_multiplicity(); ++k) perm(off_b[j] + k, off_a[i] + k) = 1.0;
  }

  SimilarityCertificate out;
  out.similarity = pb.transform * perm * inverse(pa.transform);
  out.cond = condition_number(out.similarity);
  out.residual = (out.similarity * a * inverse(out.similarity) - b).norm();
  out.bound = tol.residual_abs * out.cond * out.cond * (1.0 + a.norm());
  if (!(out.residual <= out.bound)) {
    std::ostringstream msg;
    msg << "similarity_between: residual " << out.residual << " exceeds bound " << out.bound;
    throw NumericalFailure(msg.str());
  }
  return out;
}

}  // namespace pisim
