// Randomized test systems: n <= 3, m <= 4, residue entries in {-2..2}.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

#include "system.hpp"

namespace oscillate {

struct CorpusOptions {
  std::size_t max_rank = 3;
  std::size_t max_poles = 4;
  long entry_bound = 2;
  bool spectral_class = true;
  bool gaussian_entries = false;  // residue entries in Z[i] instead of Z
};

struct CorpusEntry {
  FuchsianSystem system;
  std::vector<GaussianRational> combination;
};

inline CorpusEntry random_system(std::mt19937_64& rng, const CorpusOptions& opt = {}) {
  std::uniform_int_distribution<long> entry(-opt.entry_bound, opt.entry_bound);
  std::uniform_int_distribution<std::size_t> rank(1, opt.max_rank);
  std::uniform_int_distribution<std::size_t> poles(2, opt.max_poles);
  std::uniform_int_distribution<long> coord(-2, 2);
  std::uniform_int_distribution<int> coin(0, 2);
  auto random_entry = [&]() {
    return opt.gaussian_entries ? GaussianRational(Rational(entry(rng)), Rational(entry(rng)))
                                : GaussianRational(entry(rng));
  };
  for (;;) {
    CorpusEntry e;
    FuchsianSystem& s = e.system;
    s.n = rank(rng);
    const std::size_t m = poles(rng);
    const bool with_infinity = coin(rng) == 0;
    while (s.poles.size() < m) {
      SpherePoint p = with_infinity && s.poles.size() + 1 == m
                          ? SpherePoint::infinity()
                          : SpherePoint(GaussianRational(Rational(coord(rng)), Rational(coord(rng))));
      bool fresh = true;
      for (const auto& q : s.poles) fresh = fresh && q != p;
      if (fresh) s.poles.push_back(p);
    }
    ExactMatrix sum(s.n, s.n);
    for (std::size_t j = 0; j + 1 < m; ++j) {
      ExactMatrix a(s.n, s.n);
      for (std::size_t r = 0; r < s.n; ++r)
        for (std::size_t c = 0; c < s.n; ++c) a(r, c) = random_entry();
      sum += a;
      s.residues.push_back(a);
    }
    ExactMatrix last(s.n, s.n);
    bool ok = true;
    for (std::size_t r = 0; r < s.n; ++r)
      for (std::size_t c = 0; c < s.n; ++c) {
        last(r, c) = -sum(r, c);
        if (abs(last(r, c).re) > opt.entry_bound || abs(last(r, c).im) > opt.entry_bound) ok = false;
      }
    s.residues.push_back(last);
    if (!ok) continue;
    bool any_nonzero = false;
    for (const auto& a : s.residues) any_nonzero = any_nonzero || !a.is_zero();
    if (!any_nonzero) continue;
    if (opt.spectral_class && !spectral_class_check(s).in_class) continue;
    for (std::size_t i = 0; i < s.n; ++i) e.combination.push_back(GaussianRational(entry(rng)));
    bool comb = false;
    for (const auto& c : e.combination) comb = comb || !c.is_zero();
    if (!comb) continue;
    return e;
  }
}

inline std::vector<CorpusEntry> corpus(std::size_t count, std::uint64_t seed = 0x5eed, const CorpusOptions& opt = {}) {
  std::mt19937_64 rng(seed);
  std::vector<CorpusEntry> out;
  while (out.size() < count) out.push_back(random_system(rng, opt));
  return out;
}

}  // namespace oscillate
