#include "fanoscope/sampling.hpp"

#include <functional>

#include "fanoscope/error.hpp"

namespace fanoscope {

HomogeneousForm random_form(const Field& F, int nvars, int degree, Rng& rng) {
  HomogeneousForm f(F, nvars, degree);
  Exponent e{};
  std::function<void(int, int)> fill = [&](int i, int left) {
    if (i == nvars - 1) {
      e[i] = static_cast<std::uint8_t>(left);
      f.add_term(e, rng.element(F));
      return;
    }
    for (int a = left; a >= 0; --a) {
      e[i] = static_cast<std::uint8_t>(a);
      fill(i + 1, left - a);
    }
  };
  fill(0, degree);
  return f;
}

NormalizedThreefold random_threefold(const Field& F, Rng& rng) {
  const HomogeneousForm Q0 = random_form(F, 5, 2, rng);
  const HomogeneousForm Q1 = random_form(F, 5, 2, rng);
  return from_quadrics(Q0, Q1);
}

GeneralSample sample_general_threefold(const Field& F, Rng& rng, bool require_reduced_Z, int scan_depth,
                                       int max_attempts) {
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    NormalizedThreefold nf = random_threefold(F, rng);
    GeneralityCertificate cert = certify_generality(nf, scan_depth);
    if (!cert.general() || (require_reduced_Z && !cert.Z_reduced)) continue;
    return GeneralSample{std::move(nf), std::move(cert), attempt};
  }
  throw Error(ErrorCode::InternalInconsistency, "no general threefold within the attempt budget");
}

}  // namespace fanoscope
