#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <vector>

#include "ccdo/problem.hpp"

namespace ccdo {

using Rng = std::mt19937_64;

/// Independent stream derived from a base seed and a path of indices, e.g.
/// (seed, repetition, phase). Equal paths give equal streams.
Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path);

double uniform(Rng& rng, double lo, double hi);
std::size_t uniform_index(Rng& rng, std::size_t n);
bool coin(Rng& rng, double p = 0.5);

template <class Tag>
Point<Tag> random_point(const Box& box, Rng& rng) {
  Point<Tag> p(box.size());
  for (std::size_t i = 0; i < box.size(); ++i) p[i] = uniform(rng, box.lower(i), box.upper(i));
  return p;
}

struct GaussianMutation {
  double scale = 0.1;  // sigma as a fraction of each coordinate's range
  double rate = 0.5;   // per-coordinate probability
};

/// Perturbs each coordinate with probability `rate` by N(0, scale * width),
/// then clamps to the box.
void gaussian_mutation(std::span<double> x, const Box& box, GaussianMutation m, Rng& rng);

/// Per coordinate, with probability `rate`: a*p1 + (1-a)*p2 with a ~ U[0,1];
/// otherwise copies p1.
std::vector<double> intermediate_crossover(std::span<const double> p1, std::span<const double> p2,
                                           double rate, Rng& rng);

}  // namespace ccdo
