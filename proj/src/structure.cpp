#include "ergokit/structure.hpp"

#include <algorithm>
#include <sstream>

namespace ergokit {

Digraph support_digraph(const StochasticKernel& p) {
  const int n = p.size();
  Digraph g;
  g.n = n;
  g.adj.resize(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p(i, j) > 0.0) g.adj[i].push_back(j);
  return g;
}

std::vector<int> ClassDecomposition::closed_class_indices() const {
  std::vector<int> out;
  for (std::size_t k = 0; k < classes.size(); ++k)
    if (closed[k]) out.push_back(static_cast<int>(k));
  return out;
}

int ClassDecomposition::closed_class_count() const {
  return static_cast<int>(std::count(closed.begin(), closed.end(), true));
}

namespace {

// Iterative Tarjan; the recursion-free frame stack keeps deep chains (long
// transient paths) safe.
std::vector<std::vector<int>> strongly_connected_components(const Digraph& g) {
  const int n = g.n;
  std::vector<int> index(n, -1), lowlink(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  std::vector<std::vector<int>> components;
  int next_index = 0;

  struct Frame {
    int v;
    std::size_t edge;
  };
  std::vector<Frame> frames;

  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = lowlink[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;

    while (!frames.empty()) {
      Frame& f = frames.back();
      int v = f.v;
      if (f.edge < g.adj[v].size()) {
        int w = g.adj[v][f.edge++];
        if (index[w] == -1) {
          index[w] = lowlink[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          lowlink[v] = std::min(lowlink[v], index[w]);
        }
      } else {
        frames.pop_back();
        if (!frames.empty())
          lowlink[frames.back().v] = std::min(lowlink[frames.back().v],
                                              lowlink[v]);
        if (lowlink[v] == index[v]) {
          std::vector<int> comp;
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp.push_back(w);
          } while (w != v);
          components.push_back(std::move(comp));
        }
      }
    }
  }
  return components;
}

}  // namespace

ClassDecomposition class_decomposition(const StochasticKernel& p) {
  const int n = p.size();
  Digraph g = support_digraph(p);
  std::vector<std::vector<int>> comps = strongly_connected_components(g);

  // Canonical order: ascending smallest member. Deterministic, and gives
  // witness selection "the two closed classes with smallest minimal state"
  // for free.
  for (auto& c : comps) std::sort(c.begin(), c.end());
  std::sort(comps.begin(), comps.end(),
            [](const std::vector<int>& a, const std::vector<int>& b) {
              return a.front() < b.front();
            });

  std::vector<int> class_of(n, -1);
  for (std::size_t k = 0; k < comps.size(); ++k)
    for (int v : comps[k]) class_of[v] = static_cast<int>(k);

  ClassDecomposition dec;
  dec.transient_states = StateSet(n);
  for (std::size_t k = 0; k < comps.size(); ++k) {
    bool closed = true;
    for (int v : comps[k]) {
      for (int w : g.adj[v]) {
        if (class_of[w] != static_cast<int>(k)) {
          closed = false;
          break;
        }
      }
      if (!closed) break;
    }
    dec.classes.push_back(StateSet::from_indices(n, comps[k]));
    dec.closed.push_back(closed);
    if (!closed)
      for (int v : comps[k]) dec.transient_states.insert(v);
  }
  return dec;
}

bool is_absorbing(const StochasticKernel& p, const StateSet& a, double tol) {
  if (a.universe_size() != p.size())
    throw Error(errc::dimension_mismatch, "set universe vs kernel size");
  for (int i : a.indices())
    if (p.row_mass(i, a) < 1.0 - tol) return false;
  return true;  // vacuously true for the empty set
}

StateSet largest_absorbing_subset(const StochasticKernel& p, const StateSet& a,
                                  double tol) {
  if (a.universe_size() != p.size())
    throw Error(errc::dimension_mismatch, "set universe vs kernel size");
  StateSet s = a;
  bool changed = true;
  while (changed) {  // at most n sweeps: each removes a state or stops
    changed = false;
    StateSet next = s;
    for (int i : s.indices()) {
      if (p.row_mass(i, s) < 1.0 - tol) {
        next.erase(i);
        changed = true;
      }
    }
    s = next;
  }
  return s;
}

IndecomposabilityCertificate indecomposability_certificate(
    const StochasticKernel& p) {
  ClassDecomposition dec = class_decomposition(p);
  std::vector<int> closed = dec.closed_class_indices();
  IndecomposabilityCertificate cert;
  if (closed.size() < 2) {
    cert.verdict = IndecomposabilityCertificate::Verdict::kIndecomposable;
    return cert;
  }
  cert.verdict = IndecomposabilityCertificate::Verdict::kDecomposable;
  // Classes are already sorted by minimal state; the first two closed ones
  // form the canonical witness.
  cert.witness = {dec.classes[closed[0]], dec.classes[closed[1]]};
  verify_indecomposability_certificate(p, cert);
  return cert;
}

std::pair<StateSet, StateSet> absorbing_witness_pair(
    const StochasticKernel& p, const StateSet& separator) {
  return {largest_absorbing_subset(p, separator),
          largest_absorbing_subset(p, separator.complement())};
}

void verify_indecomposability_certificate(
    const StochasticKernel& p, const IndecomposabilityCertificate& cert) {
  using Verdict = IndecomposabilityCertificate::Verdict;
  if (cert.verdict == Verdict::kDecomposable) {
    if (!cert.witness)
      throw Error(errc::certificate_invariant,
                  "decomposable verdict without witness");
    const auto& [a, b] = *cert.witness;
    if (a.empty() || b.empty())
      throw Error(errc::certificate_invariant, "witness set empty");
    if (!a.disjoint_with(b))
      throw Error(errc::certificate_invariant, "witness sets intersect");
    if (!is_absorbing(p, a) || !is_absorbing(p, b))
      throw Error(errc::certificate_invariant, "witness set not absorbing");
  } else {
    if (cert.witness)
      throw Error(errc::certificate_invariant,
                  "indecomposable verdict carries a witness");
    if (class_decomposition(p).closed_class_count() != 1)
      throw Error(errc::certificate_invariant,
                  "indecomposable verdict but closed-class count differs from 1");
  }
}

}  // namespace ergokit
