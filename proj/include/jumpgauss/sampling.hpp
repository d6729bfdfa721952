#pragma once

#include <vector>

#include "jumpgauss/measures.hpp"
#include "jumpgauss/rng.hpp"

namespace jumpgauss::sampling {

/// Smooth bump on [-1/2, 1/2]: identically 1 on |t| <= 1/4, then
/// exp(1 - 1/(1-(4|t|-1)^2)) until it vanishes at |t| = 1/2. Evaluated
/// directly; exact to machine precision.
double psi(double t);

/// Integral of psi over its support, cached after the first call.
/// Lies strictly between 1/2 and 1.
double m_psi();

/// Poisson count with the given mean. Sequential inversion below mean 10,
/// transformed rejection (PTRD) above.
std::int64_t sample_poisson(double mean, RngStream& stream);

/// Centered Gaussian draw with the given variance (Box-Muller; two uniforms
/// per draw). variance == 0 returns 0 exactly without consuming the stream.
double gaussian_increment(double variance, RngStream& stream);

/// One draw from the normalized band law 1_{I_k} nu(dz)/m_k. Exact inverse
/// CDF for the power-law family; rejection against the uniform proposal with
/// the band's density sup otherwise (iteration cap 10^6).
double sample_band_size(const measures::LevyMeasureModel& model, int k, RngStream& stream);

/// One realization of the band splitting: xi ~ Bernoulli(eps_k m(psi)),
/// V under the bump law, U under the complement law, composite
/// xi*V + (1-xi)*U distributed exactly as the band law.
struct SplitDraw {
    int xi = 0;
    double v = 0.0;
    double u = 0.0;
    double composite = 0.0;
};

SplitDraw sample_split(const measures::LevyMeasureModel& model,
                       const measures::Band& band, RngStream& stream);

/// All jumps of one band on [0, t]: Poisson(m_k t) count, sorted times,
/// i.i.d. marks from the band law.
struct BandJumpSet {
    int k = 0;
    std::vector<double> times;
    std::vector<double> sizes;
};

BandJumpSet sample_band_jumps(const measures::LevyMeasureModel& model, int k,
                              double band_mass, double t,
                              RngStream& count_stream, RngStream& time_stream,
                              RngStream& mark_stream);

} // namespace jumpgauss::sampling
