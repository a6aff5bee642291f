// Numeric check of a certificate: count zeros of y = c.x in every region of
// the slit plan by the argument principle and compare with the bound.
#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "bounds.hpp"
#include "numerics.hpp"

namespace oscillate {

struct VerifyOptions {
  unsigned seeds = 3;
  std::uint64_t seed = 0x5eed;
  long double tol = 1e-12L;
  /// Perturbation levels tried when y vanishes on a region boundary.
  unsigned max_perturbation = 8;
};

struct SeedCount {
  long count = 0;
  long double winding = 0;
  long double margin = 0;
  long double rel_error = 0;
  unsigned precision_bits = 64;
  std::size_t samples = 0;
  std::vector<Complex> initial;
};

struct RegionCount {
  std::size_t region = 0;
  RegionKind kind = RegionKind::Middle;
  long disk = -1;
  Integer bound = 0;
  unsigned perturbation = 0;
  std::vector<SeedCount> seeds;
  long max_count = 0;
  bool dominated = true;
};

struct ZeroCountReport {
  std::vector<RegionCount> regions;
  Integer total_bound = 0;
  long total_max_count = 0;
  bool all_dominated = true;
  VerifyOptions options;
  /// Monodromy of the symmetrized operators, one entry per pole disk.
  std::vector<std::vector<EigenEnclosure>> monodromy;
};

namespace detail {

inline std::vector<Complex> random_initial(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Complex> v;
  for (std::size_t i = 0; i < n; ++i) {
    long double re = u(rng), im = u(rng);
    v.emplace_back(re, im);
  }
  return v;
}

inline std::vector<Complex> covector_of(const std::vector<GaussianRational>& c) {
  std::vector<Complex> v;
  for (const auto& z : c) v.push_back(to_complex(z));
  return v;
}

inline long region_match(const BoundCertificate& cert, const Region& r) {
  for (std::size_t i = 0; i < cert.plan.regions.size(); ++i)
    if (cert.plan.regions[i].kind == r.kind && cert.plan.regions[i].disk == r.disk) return static_cast<long>(i);
  return -1;
}

}  // namespace detail

/// Count zeros of y in every region of the certificate's plan for several
/// random solutions.  On a zero on the boundary the plan is perturbed and the
/// region's bound taken from the perturbed certificate.
inline ZeroCountReport verify_certificate(const BoundCertificate& cert, const VerifyOptions& vo = {}) {
  ZeroCountReport rep;
  rep.options = vo;
  const FuchsianSystem& ns = cert.normalized;
  const auto cov = detail::covector_of(cert.combination);
  ArgumentOptions ao;
  ao.transport.tol = vo.tol;
  std::mt19937_64 rng(vo.seed);
  std::vector<BoundCertificate> perturbed;  // level k at index k - 1
  auto certificate_at = [&](unsigned k) -> const BoundCertificate& {
    if (k == 0) return cert;
    while (perturbed.size() < k)
      perturbed.push_back(assemble_bound(cert.input, cert.combination, cert.constants,
                                         cert.perturbation + static_cast<unsigned>(perturbed.size()) + 1));
    return perturbed[k - 1];
  };
  for (std::size_t ri = 0; ri < cert.plan.regions.size(); ++ri) {
    RegionCount rc;
    rc.region = ri;
    rc.kind = cert.plan.regions[ri].kind;
    rc.disk = cert.plan.regions[ri].disk;
    rc.bound = cert.regions[ri].bound;
    for (unsigned s = 0; s < vo.seeds; ++s) {
      SolutionSeed seed{cov, detail::random_initial(rng, ns.n)};
      for (unsigned k = rc.perturbation;; ++k) {
        const BoundCertificate& c = certificate_at(k);
        long idx = k == 0 ? static_cast<long>(ri) : detail::region_match(c, cert.plan.regions[ri]);
        if (idx < 0) throw Error(ErrorCode::InternalInconsistency, "perturbed plan lost a region");
        try {
          ZeroCount zc = count_zeros_region(ns, seed, c.plan.regions[static_cast<std::size_t>(idx)].boundary, ao);
          if (k != rc.perturbation) {
            // bound and earlier seeds refer to the unperturbed boundary; redo with the new one
            rc.perturbation = k;
            rc.bound = c.regions[static_cast<std::size_t>(idx)].bound;
            std::vector<SeedCount> old = std::move(rc.seeds);
            rc.seeds.clear();
            for (const auto& o : old) {
              SolutionSeed again{cov, o.initial};
              ZeroCount z2 =
                  count_zeros_region(ns, again, c.plan.regions[static_cast<std::size_t>(idx)].boundary, ao);
              rc.seeds.push_back({z2.count, z2.winding, z2.margin, z2.trace.rel_error, z2.trace.precision_bits,
                                  z2.trace.samples, o.initial});
            }
          }
          rc.seeds.push_back({zc.count, zc.winding, zc.margin, zc.trace.rel_error, zc.trace.precision_bits,
                              zc.trace.samples, seed.initial});
          break;
        } catch (const Error& e) {
          if (e.code() != ErrorCode::ZeroOnBoundary || k >= vo.max_perturbation) throw;
        }
      }
    }
    for (const auto& sc : rc.seeds) rc.max_count = std::max(rc.max_count, sc.count);
    rc.dominated = Integer(rc.max_count) <= rc.bound;
    rep.all_dominated = rep.all_dominated && rc.dominated;
    rep.total_bound += rc.bound;
    rep.total_max_count += rc.max_count;
    rep.regions.push_back(std::move(rc));
  }
  for (const auto& ps : cert.symmetries) rep.monodromy.push_back(ps.eigenvalues);
  return rep;
}

}  // namespace oscillate
