#pragma once

#include <cstdint>
#include <random>

#include "strata/value_function.hpp"

namespace strata {

// Thrown when a value function's declared stability constants disagree with
// the privacy parameters it is being released under.
struct CertificateMismatchError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Sensitivity of the layered estimate for a gamma-uniformly-stable trainer:
// L^2 kappa^2 / (n lambda) * H_{n-1}.
double sensitivity(int n, double L, double kappa, double lambda);

// Laplace scale after amplification by sampling with probability p:
// sens / ln((e^eps - 1)/p + 1); p = 1 degrades to sens / eps.
double noise_scale(double sens, double epsilon, double p);

// Inverse-CDF Laplace draw: -scale * sign(u) * ln(1 - 2|u|), u uniform on
// (-1/2, 1/2).
double laplace_sample(double scale, std::uint64_t seed);
double laplace_sample(double scale, std::mt19937_64& rng);

// Noise calibration for one private release.
struct PrivacyParams {
    double epsilon = 1.0;
    StabilityCertificate stability;  // L, kappa, lambda
    double p = 1.0;          // data-access probability (amplification when < 1)
    double sens = 0.0;
    double sigma = 0.0;

    // Derives (p, sens, sigma) from the query parameters. p comes from
    // data_touch_bound; when it clamps to 1 amplification is disabled.
    static PrivacyParams derive(double epsilon, const StabilityCertificate& cert,
                                int n, double alpha, double beta, double c);
};

struct PrivateEstimate {
    double value = 0.0;       // released: layered estimate + Laplace noise
    double sigma = 0.0;
    double p = 1.0;
    double sens = 0.0;
    double epsilon = 0.0;
    ShapleyEstimate base;     // non-private estimate and instrumentation
};

// Algorithm-2 release: layered estimate plus one Laplace(0, sigma) draw from
// the seed's noise child. The value function must carry a stability
// certificate matching `params`; one call consumes one epsilon budget, and
// composition across repeated queries is the caller's responsibility.
PrivateEstimate private_layered_estimate(const ValueFunction& v, int n, int i,
                                         double alpha, double beta, double c,
                                         const PrivacyParams& params,
                                         std::uint64_t seed);

}  // namespace strata
