#pragma once

#include <cstdint>
#include <random>

#include "fanoscope/forms.hpp"
#include "fanoscope/threefold.hpp"

namespace fanoscope {

// Seeded generator shared by every sampler; a seed fixes all draws.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }
  Elt element(const Field& F) { return static_cast<Elt>(below(F.size())); }
  Elt nonzero(const Field& F) { return static_cast<Elt>(1 + below(F.size() - 1)); }

 private:
  std::mt19937_64 engine_;
};

HomogeneousForm random_form(const Field& F, int nvars, int degree, Rng& rng);

// Uniform Q0, Q1 in 5 variables (before the monomial re-split).
NormalizedThreefold random_threefold(const Field& F, Rng& rng);

struct GeneralSample {
  NormalizedThreefold nf;
  GeneralityCertificate cert;
  int attempts = 0;
};

// Rejection sampling until certify_generality passes (and Z is reduced when
// requested). Throws InternalInconsistency after max_attempts.
GeneralSample sample_general_threefold(const Field& F, Rng& rng, bool require_reduced_Z = false, int scan_depth = 2,
                                       int max_attempts = 1000);

}  // namespace fanoscope
