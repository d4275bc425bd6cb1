#pragma once

#include "disktau/rational.hpp"

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace disktau {

enum class LabelKind { interior, boundary };

struct BaseLabel {
  LabelKind kind = LabelKind::interior;
  int index = 1;
  friend auto operator<=>(const BaseLabel&, const BaseLabel&) = default;
};

// A non-empty finite set of base labels.  Indices run over 1..32 for each
// kind; interior i occupies bit i-1 and boundary i occupies bit 31+i.
class Label {
 public:
  static constexpr int kMaxIndex = 32;

  Label() = default;
  explicit Label(const std::vector<BaseLabel>& elements);
  static Label interior(int i);
  static Label boundary(int i);
  static Label from_bits(std::uint64_t bits) { return Label(bits); }

  std::uint64_t bits() const { return bits_; }
  bool empty() const { return bits_ == 0; }
  int size() const;
  bool intersects(const Label& o) const { return (bits_ & o.bits_) != 0; }
  bool contains(const Label& o) const { return (bits_ & o.bits_) == o.bits_; }
  std::vector<BaseLabel> elements() const;
  // "{1,2b}": interior indices bare, boundary indices with a trailing b.
  std::string to_string() const;

  Label operator|(const Label& o) const { return Label(bits_ | o.bits_); }
  Label& operator|=(const Label& o) {
    bits_ |= o.bits_;
    return *this;
  }
  friend auto operator<=>(const Label&, const Label&) = default;

 private:
  explicit Label(std::uint64_t bits) : bits_(bits) {}
  std::uint64_t bits_ = 0;
};

enum class VertexKind { open, closed };

struct Vertex {
  VertexKind kind = VertexKind::open;
  std::vector<Label> lB;  // empty for closed vertices
  std::vector<Label> lI;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

// A pre-stable graph.  Edges are vertex-index pairs with first < second.
// Operations that return graphs return them in canonical form.
struct StableGraph {
  std::vector<Vertex> vertices;
  std::vector<std::pair<int, int>> edges;

  // One open vertex with boundary labels 1..k and interior labels 1..l.
  static StableGraph gamma(int k, int l);
  friend bool operator==(const StableGraph&, const StableGraph&) = default;
};

struct ValidationResult {
  bool ok = true;
  std::vector<std::string> diagnostics;
  explicit operator bool() const { return ok; }
};

ValidationResult validate_graph(const StableGraph& g);

// Vertices sorted by (kind, own labels, edge images), labels sorted, edges
// remapped and sorted.  Labeled stable graphs are rigid, so equal canonical
// forms mean equal graphs.
StableGraph canonical(const StableGraph& g);
// Compact byte encoding of the canonical form.
std::string canonical_key(const StableGraph& g);

bool is_boundary_edge(const StableGraph& g, int e);
int k_of(const StableGraph& g, int v);  // |B(v)|
int l_of(const StableGraph& g, int v);  // |I(v)|
int k_of(const StableGraph& g);         // |B(g)|
int l_of(const StableGraph& g);         // |I(g)|
// Vertex sets of the connected components, each sorted.
std::vector<std::vector<int>> components(const StableGraph& g);

struct GraphDims {
  long real_dim = 0;
  Rational complex_dim;
};

// Sum of k+2l-3 over open vertices and 2(l-3) over closed vertices.
// Throws InvalidGraphError when the forest, kind, connectivity or stability
// conditions fail.  Label uniqueness is not required: a base graph can repeat
// a label across components.
GraphDims graph_dims(const StableGraph& g);

// Contracts the edges with the given indices.  Throws NotInGraphError on a
// bad index.
StableGraph smooth(const StableGraph& g, const std::vector<int>& edge_indices);

// Visits every stable graph that smooths to g along a non-empty edge set,
// each exactly once, in canonical form, with at most max_codim new edges.
void for_each_degeneration(const StableGraph& g, int max_codim,
                           const std::function<void(const StableGraph&)>& visit);
// The boundary of g, sorted by canonical key.
std::vector<StableGraph> degenerations(const StableGraph& g, int max_codim = 1 << 20);
// The boundary of gamma(k, l), optionally restricted to |E| = codim and to
// graphs with a boundary edge.
std::vector<StableGraph> enumerate_boundary(int k, int l, std::optional<int> codim = std::nullopt,
                                            bool boundary_edge_only = false);

// i_v on an own label of v: the label itself.
Label label_of_flag(const StableGraph& g, int v, const Label& x);
// i_v on an edge at v: the union of all labels beyond the edge.
Label label_of_flag(const StableGraph& g, int v, int edge_index);

enum class Legality { legal, illegal };

// Illegal for v iff the component of v after deleting e has an odd number of
// boundary labels.  e must be a boundary edge at v.
Legality edge_legality(const StableGraph& g, int edge_index, int v);

// Every component with an open vertex has an odd number of boundary labels.
bool in_odd_family(const StableGraph& g);

// The edgeless graph of vertices with 2l(v) + |lB(v) + legal edges| >= 3,
// legal edges becoming boundary labels and interior edges interior labels.
// When g has an interior edge, the closed side receives the union of the far
// labels, which may equal a label kept elsewhere; the result is then not
// label-unique.  Throws DomainError outside the odd family.
StableGraph base_graph(const StableGraph& g);

// The graph spanned by the given vertices with cut edges turned into labels.
StableGraph span_subgraph(const StableGraph& g, const std::vector<int>& vertices);

// Vertices that violate stability.
std::vector<int> unstable_vertices(const StableGraph& g);
// One stabilization step at an unstable vertex.  The result is not
// canonicalized, so orders of steps can be compared.
StableGraph stabilize_at(const StableGraph& g, int v);
StableGraph stabilize(const StableGraph& g);

// Removes interior label i and stabilizes.  Requires k + 2(l-1) >= 3.
StableGraph forget_interior(const StableGraph& g, const Label& i);

std::string to_string(const StableGraph& g);
// {"vertices":[{"kind":"open","lB":[[{"boundary":1}]],"lI":[]}],"edges":[[0,1]]}
std::string graph_to_json(const StableGraph& g);
StableGraph graph_from_json(const std::string& text);
// A single graph object or an array of them.
std::vector<StableGraph> graphs_from_json(const std::string& text);
std::string graphs_to_json(const std::vector<StableGraph>& gs);

}  // namespace disktau
