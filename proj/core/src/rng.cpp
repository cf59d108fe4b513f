#include "anisofield/rng.hpp"

#include <cmath>

namespace anisofield {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::string_view label,
                          std::uint64_t index) {
  return splitmix64(splitmix64(master ^ fnv1a64(label)) + index);
}

std::vector<double> RngStream::unit_vector(int d) {
  std::vector<double> v(static_cast<std::size_t>(d));
  if (d == 1) {
    v[0] = static_cast<double>(sign());
    return v;
  }
  double norm2 = 0.0;
  do {
    norm2 = 0.0;
    for (auto& x : v) {
      x = normal();
      norm2 += x * x;
    }
  } while (norm2 == 0.0);
  const double inv = 1.0 / std::sqrt(norm2);
  for (auto& x : v) x *= inv;
  return v;
}

}  // namespace anisofield
