#pragma once

// Test-only constructions and oracles. Nothing here calls the code paths it is used to check.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "simploscore/complex.hpp"
#include "simploscore/int_matrix.hpp"
#include "simploscore/midi.hpp"

namespace fixtures {

using simploscore::SimplicialComplex;

inline SimplicialComplex from_facets(const std::vector<std::vector<int>>& facets) {
  SimplicialComplex c;
  for (const auto& f : facets) c.insert(f);
  return c;
}

inline SimplicialComplex hollow_tetrahedron() { return from_facets({{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3}}); }
inline SimplicialComplex filled_tetrahedron() { return from_facets({{0, 1, 2, 3}}); }
inline SimplicialComplex isolated_vertices(int n) {
  SimplicialComplex c;
  for (int v = 0; v < n; ++v) c.insert(std::vector<int>{v});
  return c;
}

// Minimal 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7.
inline SimplicialComplex seven_vertex_torus() {
  std::vector<std::vector<int>> facets;
  for (int i = 0; i < 7; ++i) {
    facets.push_back({i, (i + 1) % 7, (i + 3) % 7});
    facets.push_back({i, (i + 2) % 7, (i + 3) % 7});
  }
  return from_facets(facets);
}

// Octahedron surface: poles 0 and 5 over the square 1-2-3-4.
inline SimplicialComplex octahedron() {
  return from_facets({{0, 1, 2}, {0, 2, 3}, {0, 3, 4}, {0, 4, 1}, {5, 1, 2}, {5, 2, 3}, {5, 3, 4}, {5, 4, 1}});
}

// Plain union-find over the 1-skeleton.
inline std::size_t connected_components(const SimplicialComplex& c) {
  const auto nodes = c.nodes();
  std::vector<std::size_t> parent(nodes.size());
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto id = [&](int v) { return static_cast<std::size_t>(std::find(nodes.begin(), nodes.end(), v) - nodes.begin()); };
  std::size_t components = nodes.size();
  for (const auto& e : c.simplices(1)) {
    const auto a = find(id(e.vertices()[0]));
    const auto b = find(id(e.vertices()[1]));
    if (a != b) {
      parent[a] = b;
      --components;
    }
  }
  return components;
}

// Gaussian elimination over exact rationals.
inline std::size_t rational_rank(const simploscore::IntMatrix& m) {
  using Q = boost::multiprecision::cpp_rational;
  std::vector<std::vector<Q>> a(m.rows(), std::vector<Q>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r) {
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m(r, c);
  }
  std::size_t rank = 0;
  for (std::size_t c = 0; c < m.cols() && rank < m.rows(); ++c) {
    std::size_t piv = rank;
    while (piv < m.rows() && a[piv][c] == 0) ++piv;
    if (piv == m.rows()) continue;
    std::swap(a[piv], a[rank]);
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (r == rank || a[r][c] == 0) continue;
      const Q f = a[r][c] / a[rank][c];
      for (std::size_t j = c; j < m.cols(); ++j) a[r][j] -= f * a[rank][j];
    }
    ++rank;
  }
  return rank;
}

// Random chords (1-4 notes) and random transition edges over at most max_vertices pitches.
inline SimplicialComplex random_complex(std::mt19937_64& rng, int max_vertices = 12) {
  std::uniform_int_distribution<int> vertex_count(1, max_vertices);
  const int n = vertex_count(rng);
  std::vector<int> pool(static_cast<std::size_t>(n));
  std::iota(pool.begin(), pool.end(), 60);
  std::uniform_int_distribution<int> chord_count(0, 14);
  std::uniform_int_distribution<int> chord_size(1, std::min(4, n));
  std::uniform_int_distribution<int> edge_count(0, 2 * n);
  std::uniform_int_distribution<int> pick(0, n - 1);

  SimplicialComplex c;
  c.insert(std::vector<int>{pool[static_cast<std::size_t>(pick(rng))]});
  for (int i = chord_count(rng); i > 0; --i) {
    std::shuffle(pool.begin(), pool.end(), rng);
    c.insert(std::vector<int>(pool.begin(), pool.begin() + chord_size(rng)));
  }
  for (int i = edge_count(rng); i > 0; --i) {
    const int a = pool[static_cast<std::size_t>(pick(rng))];
    const int b = pool[static_cast<std::size_t>(pick(rng))];
    if (a != b) c.insert(std::vector<int>{a, b});
  }
  return c;
}

// Random simple graph on n vertices with no triangles (edges rejected if they close one).
inline SimplicialComplex random_triangle_free_graph(std::mt19937_64& rng, int n) {
  std::vector<std::vector<bool>> adj(static_cast<std::size_t>(n), std::vector<bool>(static_cast<std::size_t>(n)));
  SimplicialComplex c;
  for (int v = 0; v < n; ++v) c.insert(std::vector<int>{v});
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> tries(0, 3 * n);
  for (int t = tries(rng); t > 0; --t) {
    const auto a = static_cast<std::size_t>(pick(rng));
    const auto b = static_cast<std::size_t>(pick(rng));
    if (a == b || adj[a][b]) continue;
    bool closes = false;
    for (std::size_t w = 0; w < adj.size(); ++w) closes = closes || (adj[a][w] && adj[b][w]);
    if (closes) continue;
    adj[a][b] = adj[b][a] = true;
    c.insert(std::vector<int>{static_cast<int>(a), static_cast<int>(b)});
  }
  return c;
}

// Random pure 2-complex: a set of triangles and nothing else.
inline SimplicialComplex random_pure_2_complex(std::mt19937_64& rng, int n) {
  std::uniform_int_distribution<int> pick(0, n - 1);
  std::uniform_int_distribution<int> count(1, 3 * n);
  SimplicialComplex c;
  for (int t = count(rng); t > 0; --t) {
    const int a = pick(rng);
    const int b = pick(rng);
    const int d = pick(rng);
    if (a == b || b == d || a == d) continue;
    c.insert(std::vector<int>{a, b, d});
  }
  if (c.empty()) c.insert(std::vector<int>{0, 1, 2});
  return c;
}

// Two 8-measure themes in binary form with repeats: A A B B, 4/4, one quarter note per beat.
// Every measure of a theme's first statement changes the Euler characteristic; repeats add nothing.
inline std::vector<std::uint8_t> binary_form_midi(int ppq = 480) {
  std::vector<std::vector<int>> theme_a;
  theme_a.push_back({60, 61, 60, 60});
  for (int m = 1; m < 8; ++m) theme_a.push_back({61 + m, 60 + m, 60, 60});
  std::vector<std::vector<int>> theme_b;
  theme_b.push_back({72, 73, 60, 72});
  for (int m = 1; m < 8; ++m) theme_b.push_back({73 + m, 72 + m, 72, 72});

  std::vector<std::vector<int>> measures;
  for (const auto* theme : {&theme_a, &theme_a, &theme_b, &theme_b}) {
    measures.insert(measures.end(), theme->begin(), theme->end());
  }
  simploscore::MidiTrackSpec track;
  track.time_signature = {{4, 4}};
  track.tempo_us_per_quarter = 500000;
  std::int64_t tick = 0;
  for (const auto& m : measures) {
    for (int p : m) {
      track.notes.push_back({tick, ppq, 0, p, 80});
      tick += ppq;
    }
  }
  const simploscore::MidiTrackSpec tracks[] = {track};
  return simploscore::write_midi(0, ppq, tracks);
}

}  // namespace fixtures
