#include "disktau/stable_graphs.hpp"

#include "disktau/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <array>
#include <bit>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <sstream>
#include <tuple>

namespace disktau {

namespace {

constexpr std::uint64_t kBoundaryShift = 32;

int bit_of(LabelKind kind, int index) {
  if (index < 1 || index > Label::kMaxIndex)
    throw CapError("label index " + std::to_string(index) + " outside 1.." +
                   std::to_string(Label::kMaxIndex));
  return (kind == LabelKind::boundary ? static_cast<int>(kBoundaryShift) : 0) + index - 1;
}

bool is_open(const Vertex& v) { return v.kind == VertexKind::open; }

// Neighbors of each vertex as (neighbor, edge index), in edge order.
struct Adjacency {
  struct Rows {
    std::vector<int> start;
    std::vector<std::pair<int, int>> items;
    std::size_t size() const { return start.size() - 1; }
    std::span<const std::pair<int, int>> operator[](int v) const {
      return {items.data() + start[v], items.data() + start[v + 1]};
    }
  } nb;

  explicit Adjacency(const StableGraph& g) {
    const std::size_t n = g.vertices.size();
    nb.start.assign(n + 2, 0);
    for (auto [a, b] : g.edges) {
      ++nb.start[a + 2];
      ++nb.start[b + 2];
    }
    for (std::size_t v = 2; v < n + 2; ++v) nb.start[v] += nb.start[v - 1];
    nb.items.resize(2 * g.edges.size());
    for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
      auto [a, b] = g.edges[e];
      nb.items[nb.start[a + 1]++] = {b, e};
      nb.items[nb.start[b + 1]++] = {a, e};
    }
    nb.start.pop_back();
  }
};

void check_vertex(const StableGraph& g, int v) {
  if (v < 0 || v >= static_cast<int>(g.vertices.size()))
    throw NotInGraphError("vertex " + std::to_string(v) + " not in graph");
}

void check_edge(const StableGraph& g, int e) {
  if (e < 0 || e >= static_cast<int>(g.edges.size()))
    throw NotInGraphError("edge " + std::to_string(e) + " not in graph");
}

// Vertices reachable from start without crossing the edge `skip`.
std::vector<int> side_of(const Adjacency& adj, int start, int skip) {
  std::vector<int> out{start};
  std::vector<char> seen(adj.nb.size(), 0);
  seen[start] = 1;
  for (std::size_t i = 0; i < out.size(); ++i)
    for (auto [w, e] : adj.nb[out[i]])
      if (e != skip && !seen[w]) {
        seen[w] = 1;
        out.push_back(w);
      }
  return out;
}

Label union_of_labels(const StableGraph& g, const std::vector<int>& vs) {
  Label out;
  for (int v : vs) {
    for (const auto& x : g.vertices[v].lB) out |= x;
    for (const auto& x : g.vertices[v].lI) out |= x;
  }
  return out;
}

int boundary_label_count(const StableGraph& g, const std::vector<int>& vs) {
  int n = 0;
  for (int v : vs) n += static_cast<int>(g.vertices[v].lB.size());
  return n;
}

// Each component rooted at the holder of its smallest label, with subtree
// unions of labels (labels of a component are disjoint, so complements are
// differences).
struct RootedForest {
  std::vector<int> parent, parent_edge, comp, order;
  std::vector<std::uint64_t> sub_bits;
  std::vector<int> sub_count, sub_boundary;
  std::vector<std::uint64_t> comp_bits, comp_ref;
  std::vector<int> comp_count, comp_boundary, comp_root;

  RootedForest(const StableGraph& g, const Adjacency& adj) {
    const int n = static_cast<int>(g.vertices.size());
    parent.assign(n, -1);
    parent_edge.assign(n, -1);
    comp.assign(n, -1);
    sub_bits.assign(n, 0);
    sub_count.assign(n, 1);
    sub_boundary.assign(n, 0);
    std::vector<std::uint64_t> own(n, 0);
    std::vector<std::uint64_t> min_label(n, ~std::uint64_t{0});
    for (int v = 0; v < n; ++v) {
      for (const auto& x : g.vertices[v].lB) {
        own[v] |= x.bits();
        min_label[v] = std::min(min_label[v], x.bits());
      }
      for (const auto& x : g.vertices[v].lI) {
        own[v] |= x.bits();
        min_label[v] = std::min(min_label[v], x.bits());
      }
    }
    order.reserve(n);
    std::vector<int> members;
    members.reserve(n);
    for (int s = 0; s < n; ++s) {
      if (comp[s] != -1) continue;
      const int c = static_cast<int>(comp_root.size());
      members.assign(1, s);
      comp[s] = c;
      int root = s;
      for (std::size_t i = 0; i < members.size(); ++i) {
        int v = members[i];
        if (min_label[v] < min_label[root]) root = v;
        for (auto [w, e] : adj.nb[v])
          if (comp[w] == -1) {
            comp[w] = c;
            members.push_back(w);
          }
      }
      comp_root.push_back(root);
      comp_ref.push_back(min_label[root]);
      comp_count.push_back(static_cast<int>(members.size()));
      const std::size_t start = order.size();
      order.push_back(root);
      for (std::size_t i = start; i < order.size(); ++i) {
        int v = order[i];
        for (auto [w, e] : adj.nb[v]) {
          if (e == parent_edge[v]) continue;
          parent[w] = v;
          parent_edge[w] = e;
          order.push_back(w);
        }
      }
      std::uint64_t total = 0;
      int nb = 0;
      for (int v : members) {
        total |= own[v];
        nb += static_cast<int>(g.vertices[v].lB.size());
      }
      comp_bits.push_back(total);
      comp_boundary.push_back(nb);
    }
    for (int v = 0; v < n; ++v) {
      sub_bits[v] = own[v];
      sub_boundary[v] = static_cast<int>(g.vertices[v].lB.size());
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it)
      if (parent[*it] != -1) {
        sub_bits[parent[*it]] |= sub_bits[*it];
        sub_count[parent[*it]] += sub_count[*it];
        sub_boundary[parent[*it]] += sub_boundary[*it];
      }
  }

  // Labels beyond edge e as seen from its endpoint v.
  std::uint64_t far_bits(int v, int e, int w) const {
    if (parent_edge[v] == e) return comp_bits[comp[v]] & ~sub_bits[v];
    return sub_bits[w];
  }
  int far_count(int v, int e, int w) const {
    if (parent_edge[v] == e) return comp_count[comp[v]] - sub_count[v];
    return sub_count[w];
  }
  // Boundary labels on the near side of e, v included.
  int near_boundary(int v, int e, int w) const {
    if (parent_edge[v] == e) return sub_boundary[v];
    return comp_boundary[comp[v]] - sub_boundary[w];
  }
};


void sort_labels(std::vector<Label>& xs) { std::sort(xs.begin(), xs.end()); }

}  // namespace

Label::Label(const std::vector<BaseLabel>& elements) {
  for (const auto& b : elements) bits_ |= std::uint64_t{1} << bit_of(b.kind, b.index);
}

Label Label::interior(int i) { return Label(std::uint64_t{1} << bit_of(LabelKind::interior, i)); }
Label Label::boundary(int i) { return Label(std::uint64_t{1} << bit_of(LabelKind::boundary, i)); }

int Label::size() const { return std::popcount(bits_); }

std::vector<BaseLabel> Label::elements() const {
  std::vector<BaseLabel> out;
  for (int b = 0; b < 64; ++b)
    if (bits_ >> b & 1)
      out.push_back(b < static_cast<int>(kBoundaryShift)
                        ? BaseLabel{LabelKind::interior, b + 1}
                        : BaseLabel{LabelKind::boundary, b - static_cast<int>(kBoundaryShift) + 1});
  return out;
}

std::string Label::to_string() const {
  std::string out = "{";
  bool first = true;
  for (const auto& b : elements()) {
    if (!first) out += ",";
    first = false;
    out += std::to_string(b.index);
    if (b.kind == LabelKind::boundary) out += "b";
  }
  return out + "}";
}

StableGraph StableGraph::gamma(int k, int l) {
  Vertex v;
  v.kind = VertexKind::open;
  for (int i = 1; i <= k; ++i) v.lB.push_back(Label::boundary(i));
  for (int i = 1; i <= l; ++i) v.lI.push_back(Label::interior(i));
  StableGraph g;
  g.vertices.push_back(std::move(v));
  return g;
}

bool is_boundary_edge(const StableGraph& g, int e) {
  check_edge(g, e);
  auto [a, b] = g.edges[e];
  return is_open(g.vertices[a]) && is_open(g.vertices[b]);
}

int k_of(const StableGraph& g, int v) {
  check_vertex(g, v);
  if (!is_open(g.vertices[v])) return 0;
  int k = static_cast<int>(g.vertices[v].lB.size());
  for (auto [a, b] : g.edges)
    if ((a == v || b == v) && is_open(g.vertices[a]) && is_open(g.vertices[b])) ++k;
  return k;
}

int l_of(const StableGraph& g, int v) {
  check_vertex(g, v);
  int l = static_cast<int>(g.vertices[v].lI.size());
  for (auto [a, b] : g.edges)
    if ((a == v || b == v) && !(is_open(g.vertices[a]) && is_open(g.vertices[b]))) ++l;
  return l;
}

int k_of(const StableGraph& g) {
  int k = 0;
  for (const auto& v : g.vertices)
    if (is_open(v)) k += static_cast<int>(v.lB.size());
  return k;
}

int l_of(const StableGraph& g) {
  int l = 0;
  for (const auto& v : g.vertices) l += static_cast<int>(v.lI.size());
  return l;
}

std::vector<std::vector<int>> components(const StableGraph& g) {
  Adjacency adj(g);
  std::vector<char> seen(g.vertices.size(), 0);
  std::vector<std::vector<int>> out;
  for (int s = 0; s < static_cast<int>(g.vertices.size()); ++s) {
    if (seen[s]) continue;
    auto c = side_of(adj, s, -1);
    for (int v : c) seen[v] = 1;
    std::sort(c.begin(), c.end());
    out.push_back(std::move(c));
  }
  return out;
}

namespace {

// With labels false only the forest, kind, open-connectivity and stability
// conditions are checked.
ValidationResult check_graph(const StableGraph& g, bool labels) {
  ValidationResult r;
  auto fail = [&](std::string msg) {
    r.ok = false;
    r.diagnostics.push_back(std::move(msg));
  };
  const int n = static_cast<int>(g.vertices.size());

  std::set<std::pair<int, int>> seen_edges;
  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  bool edges_ok = true;
  for (auto [a, b] : g.edges) {
    if (a < 0 || b < 0 || a >= n || b >= n) {
      fail("edge (" + std::to_string(a) + "," + std::to_string(b) + ") has an unknown endpoint");
      edges_ok = false;
      continue;
    }
    if (a == b) {
      fail("edge at vertex " + std::to_string(a) + " is a loop");
      edges_ok = false;
      continue;
    }
    if (!seen_edges.insert({std::min(a, b), std::max(a, b)}).second) {
      fail("edge (" + std::to_string(a) + "," + std::to_string(b) + ") is repeated");
      edges_ok = false;
      continue;
    }
    if (find(a) == find(b)) {
      fail("edges do not form a forest");
      edges_ok = false;
      continue;
    }
    uf[find(a)] = find(b);
  }
  if (!edges_ok) return r;

  for (int v = 0; v < n; ++v) {
    const Vertex& x = g.vertices[v];
    if (!is_open(x) && !x.lB.empty())
      fail("closed vertex " + std::to_string(v) + " has boundary labels");
    for (const auto* ls : {&x.lB, &x.lI})
      for (const auto& lab : *ls)
        if (lab.empty()) fail("vertex " + std::to_string(v) + " has an empty label");
  }

  std::map<Label, int> owner;
  for (int v = 0; v < n && labels; ++v)
    for (const auto* ls : {&g.vertices[v].lB, &g.vertices[v].lI})
      for (const auto& lab : *ls)
        if (!owner.emplace(lab, v).second) fail("label " + lab.to_string() + " is not unique");

  Adjacency adj(g);
  auto comps = components(g);
  std::vector<std::vector<Label>> comp_labels;
  for (const auto& c : comps) {
    // Open vertices of a component are connected through open vertices.
    std::vector<int> open;
    for (int v : c)
      if (is_open(g.vertices[v])) open.push_back(v);
    if (!open.empty()) {
      std::vector<char> reach(n, 0);
      std::vector<int> stack{open.front()};
      reach[open.front()] = 1;
      while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (auto [w, e] : adj.nb[v])
          if (is_open(g.vertices[w]) && !reach[w]) {
            reach[w] = 1;
            stack.push_back(w);
          }
      }
      for (int v : open)
        if (!reach[v]) {
          fail("open vertices " + std::to_string(open.front()) + " and " + std::to_string(v) +
               " are joined only through closed vertices");
          break;
        }
    }
    std::vector<Label> labs;
    for (int v : c)
      for (const auto* ls : {&g.vertices[v].lB, &g.vertices[v].lI})
        labs.insert(labs.end(), ls->begin(), ls->end());
    std::uint64_t acc = 0;
    for (const auto& lab : labs) {
      if (!labels) break;
      if (acc & lab.bits()) {
        fail("labels of the component of vertex " + std::to_string(c.front()) + " overlap");
        break;
      }
      acc |= lab.bits();
    }
    comp_labels.push_back(std::move(labs));
  }

  // Distinct components share no non-trivial union of proper label subsets.
  // Such a union is a union of overlap classes whose two sides agree.
  for (std::size_t p = 0; labels && p < comp_labels.size(); ++p)
    for (std::size_t q = p + 1; q < comp_labels.size(); ++q) {
      const auto& A = comp_labels[p];
      const auto& B = comp_labels[q];
      std::uint64_t supp_a = 0, supp_b = 0;
      for (const auto& x : A) supp_a |= x.bits();
      for (const auto& x : B) supp_b |= x.bits();
      std::vector<char> used_a(A.size(), 0), used_b(B.size(), 0);
      for (std::size_t s = 0; s < A.size(); ++s) {
        if (used_a[s] || !(A[s].bits() & supp_b)) continue;
        std::uint64_t ua = 0, ub = 0;
        std::vector<std::size_t> qa{s}, qb;
        used_a[s] = 1;
        while (!qa.empty() || !qb.empty()) {
          if (!qa.empty()) {
            std::size_t i = qa.back();
            qa.pop_back();
            ua |= A[i].bits();
            for (std::size_t j = 0; j < B.size(); ++j)
              if (!used_b[j] && (B[j].bits() & A[i].bits())) {
                used_b[j] = 1;
                qb.push_back(j);
              }
          } else {
            std::size_t j = qb.back();
            qb.pop_back();
            ub |= B[j].bits();
            for (std::size_t i = 0; i < A.size(); ++i)
              if (!used_a[i] && (A[i].bits() & B[j].bits())) {
                used_a[i] = 1;
                qa.push_back(i);
              }
          }
        }
        if (ua == ub && ua != supp_a && ua != supp_b) {
          fail("components of vertices " + std::to_string(comps[p].front()) + " and " +
               std::to_string(comps[q].front()) + " share the label union " +
               Label::from_bits(ua).to_string());
          break;
        }
      }
    }

  for (int v = 0; v < n; ++v) {
    const int k = k_of(g, v), l = l_of(g, v);
    if (is_open(g.vertices[v]) ? k + 2 * l < 3 : l < 3)
      fail("vertex " + std::to_string(v) + " is unstable (k=" + std::to_string(k) +
           ", l=" + std::to_string(l) + ")");
  }
  return r;
}

}  // namespace

ValidationResult validate_graph(const StableGraph& g) { return check_graph(g, true); }

StableGraph canonical(const StableGraph& g) {
  const int n = static_cast<int>(g.vertices.size());
  Adjacency adj(g);
  RootedForest f(g, adj);
  // Per vertex: kind, then own boundary labels, own interior labels, far
  // sides of boundary edges and of interior edges, each sorted and compared
  // lexicographically in that order.
  std::vector<std::uint64_t> buf;
  std::vector<std::array<std::size_t, 5>> seg(n);
  for (int v = 0; v < n; ++v) {
    const Vertex& x = g.vertices[v];
    auto& o = seg[v];
    o[0] = buf.size();
    for (const auto& y : x.lB) buf.push_back(y.bits());
    o[1] = buf.size();
    for (const auto& y : x.lI) buf.push_back(y.bits());
    o[2] = buf.size();
    for (auto [w, e] : adj.nb[v])
      if (is_open(x) && is_open(g.vertices[w])) buf.push_back(f.far_bits(v, e, w));
    o[3] = buf.size();
    for (auto [w, e] : adj.nb[v])
      if (!(is_open(x) && is_open(g.vertices[w]))) buf.push_back(f.far_bits(v, e, w));
    o[4] = buf.size();
    for (int i = 0; i < 4; ++i) std::sort(buf.begin() + o[i], buf.begin() + o[i + 1]);
  }
  auto less = [&](int a, int b) {
    const int ka = is_open(g.vertices[a]) ? 0 : 1, kb = is_open(g.vertices[b]) ? 0 : 1;
    if (ka != kb) return ka < kb;
    for (int i = 0; i < 4; ++i) {
      auto a0 = buf.begin() + seg[a][i], a1 = buf.begin() + seg[a][i + 1];
      auto b0 = buf.begin() + seg[b][i], b1 = buf.begin() + seg[b][i + 1];
      if (std::lexicographical_compare(a0, a1, b0, b1)) return true;
      if (std::lexicographical_compare(b0, b1, a0, a1)) return false;
    }
    return false;
  };
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::sort(perm.begin(), perm.end(), less);
  std::vector<int> pos(n);
  for (int i = 0; i < n; ++i) pos[perm[i]] = i;
  StableGraph out;
  out.vertices.reserve(n);
  for (int i = 0; i < n; ++i) {
    Vertex v = g.vertices[perm[i]];
    sort_labels(v.lB);
    sort_labels(v.lI);
    out.vertices.push_back(std::move(v));
  }
  for (auto [a, b] : g.edges) {
    int x = pos[a], y = pos[b];
    out.edges.push_back({std::min(x, y), std::max(x, y)});
  }
  std::sort(out.edges.begin(), out.edges.end());
  return out;
}

std::string canonical_key(const StableGraph& g) {
  StableGraph c = canonical(g);
  std::string out;
  auto put64 = [&](std::uint64_t x) { out.append(reinterpret_cast<const char*>(&x), sizeof x); };
  for (const auto& v : c.vertices) {
    out.push_back(is_open(v) ? 'o' : 'c');
    out.push_back(static_cast<char>(v.lB.size()));
    out.push_back(static_cast<char>(v.lI.size()));
    for (const auto& x : v.lB) put64(x.bits());
    for (const auto& x : v.lI) put64(x.bits());
  }
  out.push_back('|');
  for (auto [a, b] : c.edges) {
    out.push_back(static_cast<char>(a));
    out.push_back(static_cast<char>(b));
  }
  return out;
}

GraphDims graph_dims(const StableGraph& g) {
  auto r = check_graph(g, false);
  if (!r) throw InvalidGraphError("invalid graph: " + r.diagnostics.front());
  GraphDims d;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v)
    d.real_dim += is_open(g.vertices[v]) ? k_of(g, v) + 2 * l_of(g, v) - 3 : 2 * (l_of(g, v) - 3);
  d.complex_dim = frac(d.real_dim, 2);
  return d;
}

StableGraph smooth(const StableGraph& g, const std::vector<int>& edge_indices) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<char> in_s(g.edges.size(), 0);
  for (int e : edge_indices) {
    check_edge(g, e);
    if (in_s[e]) throw NotInGraphError("edge " + std::to_string(e) + " listed twice");
    in_s[e] = 1;
  }
  std::vector<int> uf(n);
  std::iota(uf.begin(), uf.end(), 0);
  auto find = [&](int x) {
    while (uf[x] != x) x = uf[x] = uf[uf[x]];
    return x;
  };
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (in_s[e]) uf[find(g.edges[e].first)] = find(g.edges[e].second);
  std::vector<int> index(n, -1);
  StableGraph out;
  for (int v = 0; v < n; ++v) {
    int r = find(v);
    if (index[r] == -1) {
      index[r] = static_cast<int>(out.vertices.size());
      out.vertices.push_back(Vertex{VertexKind::closed, {}, {}});
    }
    Vertex& m = out.vertices[index[r]];
    const Vertex& x = g.vertices[v];
    if (is_open(x)) m.kind = VertexKind::open;
    m.lB.insert(m.lB.end(), x.lB.begin(), x.lB.end());
    m.lI.insert(m.lI.end(), x.lI.begin(), x.lI.end());
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e)
    if (!in_s[e]) {
      int a = index[find(g.edges[e].first)], b = index[find(g.edges[e].second)];
      out.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  return canonical(out);
}

namespace {

// Edge identity independent of vertex numbering: the component's reference
// label, the labels and vertex count beyond the edge away from the reference,
// and the edge type.
using EdgeKey = std::tuple<std::uint64_t, std::uint64_t, int, int>;

struct Flag {
  enum Type { own_boundary, own_interior, edge } type;
  std::uint64_t image = 0;
  int edge_index = -1;
  int neighbor = -1;
  bool boundary = false;  // boundary label or boundary edge
  int far_count = 0;
  bool holds_ref = false;
};

void degenerate(const StableGraph& g, int depth_left,
                const std::function<void(const StableGraph&)>& visit) {
  if (depth_left <= 0) return;
  const int n = static_cast<int>(g.vertices.size());
  Adjacency adj(g);
  RootedForest f(g, adj);

  std::vector<EdgeKey> keys(g.edges.size());
  for (int v = 0; v < n; ++v)
    if (f.parent[v] != -1) {
      const int e = f.parent_edge[v];
      const bool boundary = is_open(g.vertices[v]) && is_open(g.vertices[f.parent[v]]);
      keys[e] = {f.comp_ref[f.comp[v]], f.sub_bits[v], f.sub_count[v], boundary ? 1 : 0};
    }

  for (int v = 0; v < n; ++v) {
    const Vertex& x = g.vertices[v];
    const std::uint64_t ref = f.comp_ref[f.comp[v]];

    // Largest key among the edges that survive, after splitting v.
    std::vector<char> above(g.edges.size(), 0);
    for (int u = v; f.parent[u] != -1; u = f.parent[u]) above[f.parent_edge[u]] = 1;
    std::optional<EdgeKey> max_key;
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      EdgeKey k = keys[e];
      if (above[e]) ++std::get<2>(k);
      if (!max_key || k > *max_key) max_key = k;
    }

    std::vector<Flag> flags;
    for (const auto& lab : x.lB)
      flags.push_back({Flag::own_boundary, lab.bits(), -1, -1, true, 0, lab.bits() == ref});
    for (const auto& lab : x.lI)
      flags.push_back({Flag::own_interior, lab.bits(), -1, -1, false, 0, lab.bits() == ref});
    for (auto [w, e] : adj.nb[v]) {
      Flag fl{Flag::edge, f.far_bits(v, e, w), e, w, is_open(x) && is_open(g.vertices[w]),
              f.far_count(v, e, w), e == f.parent_edge[v]};
      flags.push_back(fl);
    }
    const int nf = static_cast<int>(flags.size());
    if (nf < 2 || nf > 24) continue;

    std::vector<std::pair<VertexKind, VertexKind>> kinds;
    if (is_open(x))
      kinds = {{VertexKind::open, VertexKind::open},
               {VertexKind::open, VertexKind::closed},
               {VertexKind::closed, VertexKind::open}};
    else
      kinds = {{VertexKind::closed, VertexKind::closed}};

    for (std::uint32_t mask = 2; mask < (std::uint32_t{1} << nf); mask += 2) {
      int kb[2] = {0, 0}, li[2] = {0, 0};
      std::uint64_t bits[2] = {0, 0};
      int count[2] = {1, 1};
      int ref_side = -1;
      for (int i = 0; i < nf; ++i) {
        const int s = mask >> i & 1;
        (flags[i].boundary ? kb : li)[s]++;
        bits[s] |= flags[i].image;
        count[s] += flags[i].far_count;
        if (flags[i].holds_ref) ref_side = s;
      }
      if (ref_side == -1) continue;
      for (auto [ka, kbk] : kinds) {
        const VertexKind kk[2] = {ka, kbk};
        bool ok = true;
        for (int s = 0; s < 2 && ok; ++s)
          if (kk[s] == VertexKind::closed && kb[s] > 0) ok = false;
        if (!ok) continue;
        const bool new_boundary = ka == VertexKind::open && kbk == VertexKind::open;
        for (int s = 0; s < 2 && ok; ++s) {
          const int k = kb[s] + (new_boundary ? 1 : 0);
          const int l = li[s] + (new_boundary ? 0 : 1);
          if (kk[s] == VertexKind::open ? k + 2 * l < 3 : l < 3) ok = false;
        }
        if (!ok) continue;
        const int far = 1 - ref_side;
        EdgeKey new_key{ref, bits[far], count[far], new_boundary ? 1 : 0};
        if (max_key && !(new_key > *max_key)) continue;

        StableGraph child;
        child.vertices = g.vertices;
        const int b_index = n;
        Vertex side[2];
        for (int s = 0; s < 2; ++s) side[s].kind = kk[s];
        child.edges = g.edges;
        for (int i = 0; i < nf; ++i) {
          const int s = mask >> i & 1;
          const Flag& fl = flags[i];
          if (fl.type == Flag::own_boundary)
            side[s].lB.push_back(Label::from_bits(fl.image));
          else if (fl.type == Flag::own_interior)
            side[s].lI.push_back(Label::from_bits(fl.image));
          else if (s == 1) {
            auto& ed = child.edges[fl.edge_index];
            int other = ed.first == v ? ed.second : ed.first;
            ed = {std::min(other, b_index), std::max(other, b_index)};
          }
        }
        child.vertices[v] = std::move(side[0]);
        child.vertices.push_back(std::move(side[1]));
        child.edges.push_back({v, b_index});
        visit(child);
        degenerate(child, depth_left - 1, visit);
      }
    }
  }
}

}  // namespace

void for_each_degeneration(const StableGraph& g, int max_codim,
                           const std::function<void(const StableGraph&)>& visit) {
  auto r = validate_graph(g);
  if (!r) throw InvalidGraphError("invalid graph: " + r.diagnostics.front());
  degenerate(g, max_codim, [&](const StableGraph& c) { visit(canonical(c)); });
}

std::vector<StableGraph> degenerations(const StableGraph& g, int max_codim) {
  std::vector<std::pair<std::string, StableGraph>> found;
  for_each_degeneration(g, max_codim,
                        [&](const StableGraph& c) { found.push_back({canonical_key(c), c}); });
  std::sort(found.begin(), found.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<StableGraph> out;
  out.reserve(found.size());
  for (auto& p : found) out.push_back(std::move(p.second));
  return out;
}

std::vector<StableGraph> enumerate_boundary(int k, int l, std::optional<int> codim,
                                            bool boundary_edge_only) {
  if (k < 0 || l < 0 || k + 2 * l < 3) throw PreconditionError("enumerate_boundary needs k+2l >= 3");
  StableGraph g0 = StableGraph::gamma(k, l);
  auto all = degenerations(g0, codim ? *codim : 1 << 20);
  std::vector<StableGraph> out;
  for (auto& g : all) {
    if (codim && static_cast<int>(g.edges.size()) != *codim) continue;
    if (boundary_edge_only) {
      bool any = false;
      for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) any = any || is_boundary_edge(g, e);
      if (!any) continue;
    }
    out.push_back(std::move(g));
  }
  return out;
}

Label label_of_flag(const StableGraph& g, int v, const Label& x) {
  check_vertex(g, v);
  const Vertex& vx = g.vertices[v];
  if (std::find(vx.lB.begin(), vx.lB.end(), x) != vx.lB.end() ||
      std::find(vx.lI.begin(), vx.lI.end(), x) != vx.lI.end())
    return x;
  throw NotInGraphError("label " + x.to_string() + " is not a label of vertex " + std::to_string(v));
}

Label label_of_flag(const StableGraph& g, int v, int edge_index) {
  check_vertex(g, v);
  check_edge(g, edge_index);
  auto [a, b] = g.edges[edge_index];
  if (a != v && b != v)
    throw NotInGraphError("edge " + std::to_string(edge_index) + " is not at vertex " +
                          std::to_string(v));
  Adjacency adj(g);
  return union_of_labels(g, side_of(adj, a == v ? b : a, edge_index));
}

Legality edge_legality(const StableGraph& g, int edge_index, int v) {
  check_vertex(g, v);
  check_edge(g, edge_index);
  auto [a, b] = g.edges[edge_index];
  if (a != v && b != v)
    throw NotInGraphError("edge " + std::to_string(edge_index) + " is not at vertex " +
                          std::to_string(v));
  if (!is_boundary_edge(g, edge_index))
    throw PreconditionError("legality is defined for boundary edges only");
  Adjacency adj(g);
  return boundary_label_count(g, side_of(adj, v, edge_index)) % 2 == 1 ? Legality::illegal
                                                                       : Legality::legal;
}

bool in_odd_family(const StableGraph& g) {
  for (const auto& c : components(g)) {
    bool has_open = false;
    for (int v : c) has_open = has_open || is_open(g.vertices[v]);
    if (has_open && boundary_label_count(g, c) % 2 == 0) return false;
  }
  return true;
}

StableGraph base_graph(const StableGraph& g) {
  if (!in_odd_family(g)) throw DomainError("base_graph needs every open component to have odd k");
  Adjacency adj(g);
  RootedForest f(g, adj);
  StableGraph out;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const Vertex& x = g.vertices[v];
    Vertex nv{x.kind, x.lB, x.lI};
    for (auto [w, e] : adj.nb[v]) {
      const Label far = Label::from_bits(f.far_bits(v, e, w));
      if (is_open(x) && is_open(g.vertices[w])) {
        if (f.near_boundary(v, e, w) % 2 == 0) nv.lB.push_back(far);
      } else {
        nv.lI.push_back(far);
      }
    }
    if (2 * static_cast<int>(nv.lI.size()) + static_cast<int>(nv.lB.size()) >= 3)
      out.vertices.push_back(std::move(nv));
  }
  return canonical(out);
}

StableGraph span_subgraph(const StableGraph& g, const std::vector<int>& vertices) {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<int> index(n, -1);
  StableGraph out;
  for (int v : vertices) {
    check_vertex(g, v);
    if (index[v] != -1) continue;
    index[v] = static_cast<int>(out.vertices.size());
    out.vertices.push_back(g.vertices[v]);
  }
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [a, b] = g.edges[e];
    if (index[a] != -1 && index[b] != -1) {
      out.edges.push_back({std::min(index[a], index[b]), std::max(index[a], index[b])});
      continue;
    }
    for (auto [in, far] : {std::pair{a, b}, std::pair{b, a}}) {
      if (index[in] == -1) continue;
      Label lab = label_of_flag(g, in, e);
      if (is_boundary_edge(g, e))
        out.vertices[index[in]].lB.push_back(lab);
      else
        out.vertices[index[in]].lI.push_back(lab);
    }
  }
  return canonical(out);
}

std::vector<int> unstable_vertices(const StableGraph& g) {
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const int k = k_of(g, v), l = l_of(g, v);
    if (is_open(g.vertices[v]) ? k + 2 * l < 3 : l < 3) out.push_back(v);
  }
  return out;
}

StableGraph stabilize_at(const StableGraph& g, int v) {
  check_vertex(g, v);
  const Vertex& x = g.vertices[v];
  std::vector<std::pair<int, int>> inc;  // (neighbor, edge)
  for (int e = 0; e < static_cast<int>(g.edges.size()); ++e) {
    auto [a, b] = g.edges[e];
    if (a == v) inc.push_back({b, e});
    if (b == v) inc.push_back({a, e});
  }
  int boundary_edges = 0;
  for (auto [w, e] : inc) boundary_edges += is_boundary_edge(g, e) ? 1 : 0;
  const int interior_edges = static_cast<int>(inc.size()) - boundary_edges;
  const int nb = static_cast<int>(x.lB.size()), ni = static_cast<int>(x.lI.size());

  StableGraph h = g;
  std::optional<std::pair<int, int>> new_edge;
  if (nb == 0 && ni == 0 && inc.size() == 2 &&
      (is_open(x) ? boundary_edges == 2 : interior_edges == 2)) {
    new_edge = {inc[0].first, inc[1].first};
  } else if (is_open(x) && inc.size() == 1 && boundary_edges == 1 && nb == 1 && ni == 0) {
    h.vertices[inc[0].first].lB.push_back(x.lB[0]);
  } else if (!is_open(x) && inc.size() == 1 && interior_edges == 1 && ni == 1) {
    h.vertices[inc[0].first].lI.push_back(x.lI[0]);
  } else if (inc.size() == 1 && nb == 0 && ni == 0) {
  } else {
    throw PreconditionError("no stabilization rule applies at vertex " + std::to_string(v));
  }

  StableGraph out;
  for (int u = 0; u < static_cast<int>(h.vertices.size()); ++u)
    if (u != v) out.vertices.push_back(std::move(h.vertices[u]));
  auto shift = [v](int u) { return u > v ? u - 1 : u; };
  for (auto [a, b] : h.edges)
    if (a != v && b != v) out.edges.push_back({shift(a), shift(b)});
  if (new_edge) {
    int a = shift(new_edge->first), b = shift(new_edge->second);
    out.edges.push_back({std::min(a, b), std::max(a, b)});
  }
  return out;
}

StableGraph stabilize(const StableGraph& g) {
  StableGraph h = g;
  for (auto un = unstable_vertices(h); !un.empty(); un = unstable_vertices(h))
    h = stabilize_at(h, un.front());
  return canonical(h);
}

StableGraph forget_interior(const StableGraph& g, const Label& i) {
  int holder = -1;
  for (int v = 0; v < static_cast<int>(g.vertices.size()); ++v) {
    const auto& li = g.vertices[v].lI;
    if (std::find(li.begin(), li.end(), i) != li.end()) holder = v;
  }
  if (holder == -1) return canonical(g);
  for (const auto& c : components(g)) {
    if (std::find(c.begin(), c.end(), holder) == c.end()) continue;
    bool has_open = false;
    int k = 0, l = 0;
    for (int v : c) {
      has_open = has_open || is_open(g.vertices[v]);
      k += static_cast<int>(g.vertices[v].lB.size());
      l += static_cast<int>(g.vertices[v].lI.size());
    }
    if (has_open ? k + 2 * (l - 1) < 3 : l - 1 < 3)
      throw PreconditionError("forgetting " + i.to_string() + " leaves an unstable component");
  }
  StableGraph h = g;
  auto& li = h.vertices[holder].lI;
  li.erase(std::find(li.begin(), li.end(), i));
  return stabilize(h);
}

std::string to_string(const StableGraph& g) {
  std::ostringstream os;
  for (std::size_t v = 0; v < g.vertices.size(); ++v) {
    const Vertex& x = g.vertices[v];
    if (v) os << "; ";
    os << "v" << v << (is_open(x) ? " open" : " closed") << " B[";
    for (std::size_t i = 0; i < x.lB.size(); ++i) os << (i ? "," : "") << x.lB[i].to_string();
    os << "] I[";
    for (std::size_t i = 0; i < x.lI.size(); ++i) os << (i ? "," : "") << x.lI[i].to_string();
    os << "]";
  }
  os << " | edges";
  for (auto [a, b] : g.edges) os << " " << a << "-" << b;
  return os.str();
}

namespace {

using nlohmann::json;

json label_json(const Label& x) {
  json arr = json::array();
  for (const auto& b : x.elements())
    arr.push_back({{b.kind == LabelKind::boundary ? "boundary" : "interior", b.index}});
  return arr;
}

json graph_json(const StableGraph& g0) {
  StableGraph g = canonical(g0);
  json vs = json::array();
  for (const auto& v : g.vertices) {
    json lb = json::array(), li = json::array();
    for (const auto& x : v.lB) lb.push_back(label_json(x));
    for (const auto& x : v.lI) li.push_back(label_json(x));
    vs.push_back({{"kind", is_open(v) ? "open" : "closed"}, {"lB", lb}, {"lI", li}});
  }
  json es = json::array();
  for (auto [a, b] : g.edges) es.push_back({a, b});
  return {{"vertices", vs}, {"edges", es}};
}

Label parse_label(const json& j) {
  if (!j.is_array() || j.empty()) throw ParseError("a label must be a non-empty array");
  std::vector<BaseLabel> bs;
  for (const auto& b : j) {
    if (!b.is_object() || b.size() != 1) throw ParseError("a base label must be a one-key object");
    auto it = b.begin();
    if (!it.value().is_number_integer()) throw ParseError("a base label index must be an integer");
    const int idx = it.value().get<int>();
    if (idx < 1 || idx > Label::kMaxIndex) throw ParseError("base label index out of range");
    if (it.key() == "interior")
      bs.push_back({LabelKind::interior, idx});
    else if (it.key() == "boundary")
      bs.push_back({LabelKind::boundary, idx});
    else
      throw ParseError("unknown base label kind '" + it.key() + "'");
  }
  return Label(bs);
}

StableGraph parse_graph(const json& j) {
  if (!j.is_object() || !j.contains("vertices")) throw ParseError("a graph needs a vertices array");
  StableGraph g;
  for (const auto& vj : j.at("vertices")) {
    Vertex v;
    const std::string kind = vj.value("kind", "");
    if (kind == "open")
      v.kind = VertexKind::open;
    else if (kind == "closed")
      v.kind = VertexKind::closed;
    else
      throw ParseError("vertex kind must be open or closed");
    if (vj.contains("lB"))
      for (const auto& x : vj.at("lB")) v.lB.push_back(parse_label(x));
    if (vj.contains("lI"))
      for (const auto& x : vj.at("lI")) v.lI.push_back(parse_label(x));
    g.vertices.push_back(std::move(v));
  }
  if (j.contains("edges"))
    for (const auto& e : j.at("edges")) {
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() || !e[1].is_number_integer())
        throw ParseError("an edge must be a pair of vertex indices");
      int a = e[0].get<int>(), b = e[1].get<int>();
      g.edges.push_back({std::min(a, b), std::max(a, b)});
    }
  return g;
}

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("malformed graph JSON: ") + e.what());
  }
}

}  // namespace

std::string graph_to_json(const StableGraph& g) { return graph_json(g).dump(); }

StableGraph graph_from_json(const std::string& text) {
  try {
    return parse_graph(parse_text(text));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph: ") + e.what());
  }
}

std::vector<StableGraph> graphs_from_json(const std::string& text) {
  json j = parse_text(text);
  std::vector<StableGraph> out;
  try {
    if (j.is_array())
      for (const auto& x : j) out.push_back(parse_graph(x));
    else
      out.push_back(parse_graph(j));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("malformed graph: ") + e.what());
  }
  return out;
}

std::string graphs_to_json(const std::vector<StableGraph>& gs) {
  json arr = json::array();
  for (const auto& g : gs) arr.push_back(graph_json(g));
  return arr.dump();
}

}  // namespace disktau
