#include "simploscore/complex.hpp"

#include <algorithm>
#include <string>

#include "simploscore/errors.hpp"

namespace simploscore {

Simplex::Simplex(std::vector<int> ascending_vertices) : vertices_(std::move(ascending_vertices)) {
  if (vertices_.empty()) throw DomainError("a simplex needs at least one vertex");
  for (std::size_t i = 1; i < vertices_.size(); ++i) {
    if (vertices_[i - 1] >= vertices_[i]) {
      throw DomainError("simplex vertices must be strictly ascending");
    }
  }
}

std::pair<Simplex, int> Simplex::canonical(std::span<const int> vertices) {
  std::vector<int> v(vertices.begin(), vertices.end());
  // Insertion sort; each adjacent swap flips the orientation.
  int sign = 1;
  for (std::size_t i = 1; i < v.size(); ++i) {
    for (std::size_t j = i; j > 0 && v[j - 1] > v[j]; --j) {
      std::swap(v[j - 1], v[j]);
      sign = -sign;
    }
  }
  return {Simplex(std::move(v)), sign};
}

Simplex Simplex::facet(std::size_t p) const {
  if (vertices_.size() < 2) throw DomainError("a vertex has no facets");
  std::vector<int> v;
  v.reserve(vertices_.size() - 1);
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    if (i != p) v.push_back(vertices_[i]);
  }
  return Simplex(std::move(v));
}

bool SimplicialComplex::register_simplex(const Simplex& s) {
  const auto k = static_cast<std::size_t>(s.dimension());
  if (registries_.size() <= k) registries_.resize(k + 1);
  Registry& reg = registries_[k];
  auto [it, inserted] = reg.index.emplace(s.vertices(), reg.simplices.size());
  if (!inserted) return false;
  reg.simplices.push_back(s);
  reg.cofaces.emplace_back();
  if (k > 0) {
    // Faces are registered before cofaces, so every facet lookup succeeds.
    Registry& lower = registries_[k - 1];
    for (std::size_t p = 0; p <= k; ++p) {
      lower.cofaces[lower.index.at(s.facet(p).vertices())].push_back(it->second);
    }
  }
  return true;
}

std::vector<Simplex> SimplicialComplex::insert(std::span<const int> vertices) {
  std::vector<int> v(vertices.begin(), vertices.end());
  std::sort(v.begin(), v.end());
  if (v.empty()) throw DomainError("cannot insert an empty simplex");
  if (std::adjacent_find(v.begin(), v.end()) != v.end()) {
    throw DomainError("simplex vertices must be distinct");
  }
  if (v.size() > 20) throw DomainError("simplex too large to enumerate faces");

  // Enumerate all nonempty subsets, grouped by size, lexicographic within a size.
  const std::size_t n = v.size();
  std::vector<Simplex> created;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<bool> mask(n, false);
    std::fill(mask.begin(), mask.begin() + static_cast<std::ptrdiff_t>(size), true);
    std::vector<std::vector<int>> faces;
    do {
      std::vector<int> face;
      for (std::size_t i = 0; i < n; ++i) {
        if (mask[i]) face.push_back(v[i]);
      }
      faces.push_back(std::move(face));
    } while (std::prev_permutation(mask.begin(), mask.end()));
    std::sort(faces.begin(), faces.end());
    for (auto& f : faces) {
      Simplex s(std::move(f));
      if (register_simplex(s)) created.push_back(std::move(s));
    }
  }
  return created;
}

std::vector<Simplex> SimplicialComplex::insert_element(const MusicalElement& element) {
  if (element.pitches.empty()) throw DomainError("musical element without pitches");
  return insert(element.pitches);
}

std::vector<Simplex> SimplicialComplex::insert_transition(const TransitionPair& pair) {
  if (pair.from == pair.to) {
    const int v[] = {pair.from};
    return insert(v);
  }
  const int v[] = {pair.from, pair.to};
  return insert(v);
}

std::vector<std::size_t> SimplicialComplex::simplex_counts() const {
  std::vector<std::size_t> counts;
  counts.reserve(registries_.size());
  for (const auto& r : registries_) counts.push_back(r.simplices.size());
  return counts;
}

std::size_t SimplicialComplex::count(int k) const {
  if (k < 0 || k >= static_cast<int>(registries_.size())) return 0;
  return registries_[static_cast<std::size_t>(k)].simplices.size();
}

std::span<const Simplex> SimplicialComplex::simplices(int k) const {
  if (k < 0 || k >= static_cast<int>(registries_.size())) return {};
  return registries_[static_cast<std::size_t>(k)].simplices;
}

const Simplex& SimplicialComplex::simplex(int k, std::size_t id) const {
  auto s = simplices(k);
  if (id >= s.size()) throw DomainError("simplex id out of range");
  return s[id];
}

bool SimplicialComplex::contains(const Simplex& s) const {
  const int k = s.dimension();
  if (k < 0 || k >= static_cast<int>(registries_.size())) return false;
  return registries_[static_cast<std::size_t>(k)].index.contains(s.vertices());
}

std::size_t SimplicialComplex::index_of(const Simplex& s) const {
  const int k = s.dimension();
  if (k >= 0 && k < static_cast<int>(registries_.size())) {
    const auto& idx = registries_[static_cast<std::size_t>(k)].index;
    if (auto it = idx.find(s.vertices()); it != idx.end()) return it->second;
  }
  std::string label = "[";
  for (int v : s.vertices()) label += std::to_string(v) + " ";
  if (label.size() > 1) label.pop_back();
  throw DomainError("simplex " + label + "] is not in the complex");
}

std::span<const std::size_t> SimplicialComplex::coface_ids(const Simplex& s) const {
  const std::size_t id = index_of(s);
  return registries_[static_cast<std::size_t>(s.dimension())].cofaces[id];
}

std::vector<int> SimplicialComplex::nodes() const {
  std::vector<int> out;
  for (const auto& s : simplices(0)) out.push_back(s.vertices().front());
  return out;
}

bool SimplicialComplex::check_closure() const {
  for (std::size_t k = 1; k < registries_.size(); ++k) {
    for (const auto& s : registries_[k].simplices) {
      for (std::size_t p = 0; p <= k; ++p) {
        if (!registries_[k - 1].index.contains(s.facet(p).vertices())) return false;
      }
    }
  }
  return true;
}

StarAndFaces star_and_faces(const SimplicialComplex& complex, const Simplex& s) {
  StarAndFaces out;
  for (std::size_t id : complex.coface_ids(s)) out.cofaces.push_back(complex.simplex(s.dimension() + 1, id));
  if (s.dimension() > 0) {
    for (std::size_t p = 0; p < s.vertices().size(); ++p) out.faces.push_back(s.facet(p));
  }
  return out;
}

nlohmann::json to_json(const SimplicialComplex& complex) {
  nlohmann::json out;
  out["nodes"] = complex.nodes();
  nlohmann::json by_dim = nlohmann::json::object();
  for (int k = 0; k <= complex.dimension(); ++k) {
    auto arr = nlohmann::json::array();
    for (const auto& s : complex.simplices(k)) arr.push_back(s.vertices());
    by_dim[std::to_string(k)] = std::move(arr);
  }
  out["simplices"] = std::move(by_dim);
  return out;
}

}  // namespace simploscore
