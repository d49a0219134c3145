#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include <json.hpp>

#include "simploscore/score.hpp"

namespace simploscore {

// Oriented simplex in canonical (ascending) vertex order. Vertices are MIDI pitches.
class Simplex {
 public:
  Simplex() = default;

  // Input must already be strictly ascending.
  explicit Simplex(std::vector<int> ascending_vertices);

  // Sorts an arbitrary vertex order; the sign is (-1)^(parity of the sorting permutation).
  static std::pair<Simplex, int> canonical(std::span<const int> vertices);

  const std::vector<int>& vertices() const { return vertices_; }
  int dimension() const { return static_cast<int>(vertices_.size()) - 1; }

  // The face with the p-th vertex removed.
  Simplex facet(std::size_t p) const;

  friend auto operator<=>(const Simplex&, const Simplex&) = default;

 private:
  std::vector<int> vertices_;
};

// Simplicial complex closed under taking faces, with insertion-ordered registries per dimension.
class SimplicialComplex {
 public:
  // Inserts the simplex and every face. Returns the simplices that were not present before,
  // in the order they were registered (dimension ascending, lexicographic within a dimension).
  std::vector<Simplex> insert(std::span<const int> vertices);

  std::vector<Simplex> insert_element(const MusicalElement& element);
  std::vector<Simplex> insert_transition(const TransitionPair& pair);

  // -1 for the empty complex.
  int dimension() const { return static_cast<int>(registries_.size()) - 1; }
  bool empty() const { return registries_.empty(); }

  // (N_0, ..., N_d); empty for the empty complex.
  std::vector<std::size_t> simplex_counts() const;
  std::size_t count(int k) const;

  std::span<const Simplex> simplices(int k) const;
  const Simplex& simplex(int k, std::size_t id) const;

  bool contains(const Simplex& s) const;
  // Registry index of s within its dimension; throws DomainError when absent.
  std::size_t index_of(const Simplex& s) const;

  // Ids (within dimension k+1) of the simplices that have s as a facet.
  std::span<const std::size_t> coface_ids(const Simplex& s) const;

  std::vector<int> nodes() const;

  // True when every face of every stored simplex is stored.
  bool check_closure() const;

  friend bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
    return a.registries_ == b.registries_;
  }

 private:
  struct Registry {
    std::vector<Simplex> simplices;
    std::vector<std::vector<std::size_t>> cofaces;
    std::map<std::vector<int>, std::size_t> index;

    friend bool operator==(const Registry& a, const Registry& b) { return a.simplices == b.simplices; }
  };

  bool register_simplex(const Simplex& s);

  std::vector<Registry> registries_;
};

struct StarAndFaces {
  std::vector<Simplex> cofaces;
  std::vector<Simplex> faces;
};

// Cofaces of dimension dim+1 and faces of dimension dim-1.
StarAndFaces star_and_faces(const SimplicialComplex& complex, const Simplex& s);

// {nodes: [...], simplices: {"0": [[v...]...], "1": ...}}
nlohmann::json to_json(const SimplicialComplex& complex);

}  // namespace simploscore
