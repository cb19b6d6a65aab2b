#pragma once

// Filtered Vietoris-Rips and Cech complexes.
//
// Simplices enter the filtration at their value (closed convention): the
// complex at scale r holds every simplex with value <= r. The open-ball
// convention yields half-open (b, d] intervals with the same endpoints, so
// diagrams computed here are interchangeable with it for finite inputs.

#include "lifespan/metric_core.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

namespace lifespan {

using Vertex = std::uint32_t;

struct Simplex {
  std::vector<Vertex> vertices;  // strictly increasing
  double value = 0.0;

  int dim() const { return static_cast<int>(vertices.size()) - 1; }
};

enum class ComplexFlavor { VietorisRips, Cech, Custom };

std::string_view to_string(ComplexFlavor flavor);

/// Simplices sorted by (value, dimension, lexicographic vertices), closed
/// under faces, with monotone values.
class FilteredComplex {
 public:
  FilteredComplex(std::vector<Simplex> simplices, std::size_t vertex_count, int max_dim, double max_value,
                  ComplexFlavor flavor);

  std::span<const Simplex> simplices() const { return simplices_; }
  const Simplex& operator[](std::size_t i) const { return simplices_[i]; }
  std::size_t size() const { return simplices_.size(); }
  std::size_t vertex_count() const { return vertex_count_; }
  int max_dim() const { return max_dim_; }
  double max_value() const { return max_value_; }
  ComplexFlavor flavor() const { return flavor_; }

  /// Filtration index of the simplex with these (sorted) vertices.
  std::optional<std::size_t> find(std::span<const Vertex> vertices) const;

  /// Throws Error if face closure, monotonicity or ordering is broken.
  void validate() const;

  /// One simplex per line: `value;v0,v1,...,vk`.
  std::string dump() const;

 private:
  std::uint64_t key(std::span<const Vertex> vertices) const;

  std::vector<Simplex> simplices_;
  std::size_t vertex_count_;
  int max_dim_;
  double max_value_;
  ComplexFlavor flavor_;
  std::vector<std::vector<std::uint64_t>> binomial_;
  std::vector<std::unordered_map<std::uint64_t, std::uint32_t>> index_;  // per dimension
};

/// Simplex value = max pairwise distance; includes simplices with value <= max_value.
FilteredComplex vietoris_rips(const FiniteMetricSpace& ms, int max_dim, double max_value);
/// Default cap: rad(ms) (+ kTolerance), beyond which the complex is a cone.
FilteredComplex vietoris_rips(const FiniteMetricSpace& ms, int max_dim);

/// Simplex value = radius of the minimum enclosing ball of its vertices.
FilteredComplex cech(const PointCloud& cloud, int max_dim, double max_value);
/// Default cap: circumradius (+ kTolerance).
FilteredComplex cech(const PointCloud& cloud, int max_dim);

/// Generic clique-style builder: `value` receives the sorted vertex set and
/// must be monotone under inclusion. Used for nerves of arbitrary covers.
FilteredComplex build_filtration(std::size_t vertex_count, int max_dim, double max_value,
                                 const std::function<double(std::span<const Vertex>)>& value,
                                 ComplexFlavor flavor = ComplexFlavor::Custom);

/// Checks C_r within V_2r within C_2r on the sampled scales.
bool validate_interleaving(const FilteredComplex& vr, const FilteredComplex& cech_complex,
                           std::span<const double> sample_values);

}  // namespace lifespan
