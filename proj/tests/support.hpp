#pragma once
// Random instance generators shared by the unit tests and the acceptance run.
#include <algorithm>
#include <random>
#include <vector>

#include "typesemi/lsc.hpp"

namespace typesemi::testing {

// Partition topology: points fall into blocks, opens are all unions of blocks.
inline FiniteSpace random_regular_space(std::mt19937& rng, int max_points, int max_blocks) {
  int n = std::uniform_int_distribution<int>(1, max_points)(rng);
  int b = std::uniform_int_distribution<int>(1, std::min(n, max_blocks))(rng);
  std::vector<PointSet> blocks(static_cast<std::size_t>(b), 0);
  for (int x = 0; x < n; ++x) {
    int k = x < b ? x : std::uniform_int_distribution<int>(0, b - 1)(rng);
    blocks[static_cast<std::size_t>(k)] |= PointSet{1} << x;
  }
  std::vector<std::string> names;
  for (int x = 0; x < n; ++x) names.push_back("p" + std::to_string(x + 1));
  return make_space(names, blocks);
}

// Lattice generated by a few random subsets; usually not regular.
inline FiniteSpace random_lattice_space(std::mt19937& rng, int max_points, int generators) {
  int n = std::uniform_int_distribution<int>(1, max_points)(rng);
  std::vector<PointSet> gens;
  std::uniform_int_distribution<PointSet> pick(0, (PointSet{1} << n) - 1);
  for (int i = 0; i < generators; ++i) gens.push_back(pick(rng));
  std::vector<std::string> names;
  for (int x = 0; x < n; ++x) names.push_back("p" + std::to_string(x + 1));
  return make_space(names, gens);
}

inline PointSet random_open(std::mt19937& rng, const FiniteSpace& sp) {
  return sp.opens[std::uniform_int_distribution<std::size_t>(0, sp.opens.size() - 1)(rng)];
}

inline PointSet random_closed(std::mt19937& rng, const FiniteSpace& sp) {
  return sp.all() & ~random_open(rng, sp);
}

inline LscFn random_fn(std::mt19937& rng, const FiniteSpace& sp, int max_terms) {
  int t = std::uniform_int_distribution<int>(0, max_terms)(rng);
  std::vector<PointSet> terms;
  for (int i = 0; i < t; ++i) terms.push_back(random_open(rng, sp));
  return normal_form(sp, terms);
}

}  // namespace typesemi::testing

#include "typesemi/groupoid.hpp"

namespace typesemi::testing {

inline PartialBijection random_bijection(std::mt19937& rng, int n) {
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), rng);
  PartialBijection b{std::vector<int>(static_cast<std::size_t>(n), -1)};
  for (int x = 0; x < n; ++x)
    if (std::uniform_int_distribution<int>(0, 3)(rng) != 0) b.map[x] = perm[x];
  return b;
}

inline GroupoidModel random_groupoid(std::mt19937& rng, int max_points, int max_gens, bool all_restrictions = false) {
  int n = std::uniform_int_distribution<int>(1, max_points)(rng);
  int m = std::uniform_int_distribution<int>(0, max_gens)(rng);
  std::vector<std::string> pts, names;
  std::vector<PartialBijection> gens;
  for (int x = 0; x < n; ++x) pts.push_back(std::to_string(x + 1));
  for (int i = 0; i < m; ++i) {
    gens.push_back(random_bijection(rng, n));
    names.push_back("b" + std::to_string(i + 1));
  }
  return close_inverse_semigroup(pts, names, gens, 200000, all_restrictions);
}

inline LscFn random_mass(std::mt19937& rng, const GroupoidModel& g, int max_value) {
  std::vector<int> v(static_cast<std::size_t>(g.size()));
  for (auto& x : v) x = std::uniform_int_distribution<int>(0, max_value)(rng);
  return lsc_of(g, v);
}

}  // namespace typesemi::testing
