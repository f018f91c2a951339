#include "ccdo/rng.hpp"

#include <stdexcept>

namespace ccdo {

Rng make_stream(std::uint64_t seed, std::initializer_list<std::uint64_t> path) {
  std::vector<std::uint32_t> words;
  words.reserve(2 * (path.size() + 1));
  auto push = [&words](std::uint64_t v) {
    words.push_back(static_cast<std::uint32_t>(v));
    words.push_back(static_cast<std::uint32_t>(v >> 32));
  };
  push(seed);
  for (std::uint64_t p : path) push(p);
  std::seed_seq seq(words.begin(), words.end());
  return Rng(seq);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

std::size_t uniform_index(Rng& rng, std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

void gaussian_mutation(std::span<double> x, const Box& box, GaussianMutation m, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (coin(rng, m.rate)) x[i] += normal(rng) * m.scale * box.width(i);
  }
  box.clamp(x);
}

std::vector<double> intermediate_crossover(std::span<const double> p1, std::span<const double> p2,
                                           double rate, Rng& rng) {
  std::vector<double> child(p1.begin(), p1.end());
  for (std::size_t i = 0; i < child.size(); ++i) {
    if (coin(rng, rate)) {
      const double a = uniform(rng, 0.0, 1.0);
      child[i] = a * p1[i] + (1.0 - a) * p2[i];
    }
  }
  return child;
}

}  // namespace ccdo
