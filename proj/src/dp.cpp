#include "strata/dp.hpp"

#include <cmath>
#include <stdexcept>

#include "strata/layered.hpp"
#include "strata/seeds.hpp"

namespace strata {

double sensitivity(int n, double L, double kappa, double lambda) {
    if (n < 2) throw std::domain_error("sensitivity: need n >= 2");
    if (!(L > 0.0 && kappa > 0.0 && lambda > 0.0))
        throw std::domain_error("sensitivity: stability constants must be positive");
    double harmonic = 0.0;
    for (int k = 1; k <= n - 1; ++k) harmonic += 1.0 / k;
    return L * L * kappa * kappa / (static_cast<double>(n) * lambda) * harmonic;
}

double noise_scale(double sens, double epsilon, double p) {
    if (!(sens > 0.0)) throw std::domain_error("noise_scale: sensitivity must be > 0");
    if (!(epsilon > 0.0)) throw std::domain_error("noise_scale: epsilon must be > 0");
    if (!(p > 0.0 && p <= 1.0)) throw std::domain_error("noise_scale: p must be in (0,1]");
    if (p == 1.0) return sens / epsilon;  // ln(e^eps - 1 + 1) = eps
    return sens / std::log1p(std::expm1(epsilon) / p);
}

double laplace_sample(double scale, std::mt19937_64& rng) {
    if (!(scale > 0.0)) throw std::domain_error("laplace_sample: scale must be > 0");
    // u uniform on the open interval (-1/2, 1/2); the half-offset keeps the
    // log argument strictly positive.
    double u = (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53 - 0.5;
    double sign = u < 0.0 ? -1.0 : 1.0;
    return -scale * sign * std::log(1.0 - 2.0 * std::abs(u));
}

double laplace_sample(double scale, std::uint64_t seed) {
    auto rng = seeds::rng(seed);
    return laplace_sample(scale, rng);
}

PrivacyParams PrivacyParams::derive(double epsilon, const StabilityCertificate& cert,
                                    int n, double alpha, double beta, double c) {
    PrivacyParams params;
    params.epsilon = epsilon;
    params.stability = cert;
    params.p = data_touch_bound(n, alpha, beta, c);
    params.sens = sensitivity(n, cert.lipschitz_L, cert.kappa, cert.lambda);
    params.sigma = noise_scale(params.sens, epsilon, params.p);
    return params;
}

PrivateEstimate private_layered_estimate(const ValueFunction& v, int n, int i,
                                         double alpha, double beta, double c,
                                         const PrivacyParams& params,
                                         std::uint64_t seed) {
    if (!(params.sigma > 0.0))
        throw std::domain_error("private_layered_estimate: sigma must be > 0");
    if (!v.certificate())
        throw CertificateMismatchError(
            "private release requires a value function with a stability certificate");
    const StabilityCertificate& cert = *v.certificate();
    if (!cert.matches(params.stability.lipschitz_L, params.stability.kappa,
                      params.stability.lambda))
        throw CertificateMismatchError(
            "value function stability constants (L, kappa, lambda) disagree with "
            "the privacy parameters");

    PrivateEstimate out;
    out.base = layered_estimate(v, n, i, alpha, beta, c, seed);
    out.sigma = params.sigma;
    out.p = params.p;
    out.sens = params.sens;
    out.epsilon = params.epsilon;
    out.value = out.base.value() + laplace_sample(params.sigma, seeds::for_noise(seed));
    out.base.method = Method::LayeredPrivate;
    return out;
}

}  // namespace strata
