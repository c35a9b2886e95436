// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "swiptwave/channel.hpp"
#include "swiptwave/matrix.hpp"
#include "swiptwave/waveform.hpp"

namespace swipt {

/// Truncated rectifier nonlinearity: second- and fourth-order Taylor
/// coefficients plus the antenna impedance that converts received power to
/// the diode input voltage.
struct RectennaParams {
  double k2 = 0.0;
  double k4 = 0.0;
  double r_ant_ohm = 50.0;

  void validate() const;
};

/// Diode small-signal parameters, used only to derive (k2, k4) when a
/// scenario supplies them instead of the coefficients.
struct DiodeParams {
  double i_s_amp = 0.0;
  double a_volt = 0.0;
  double n_ideality = 1.0;
  double v_t_volt = 0.0;
};

/// Per-tone receiver noise powers.
struct NoiseProfile {
  std::vector<double> sigma2_watt;

  static NoiseProfile uniform(int num_tones, double sigma2);
  void validate(int num_tones) const;
};

/// Taylor coefficients k_i = i_s * exp(a/(n v_t)) / (i! (n v_t)^i) for
/// i = 2, 4.
std::pair<double, double> k_coefficients(const DiodeParams& diode);

/// DC moments of the received waveform components; `psi` holds the total
/// received phases (transmit phase plus channel phase) and `a` the channel
/// amplitudes. The fourth-order sums run over all tone quadruples whose
/// index sums match, the only products that fall on DC.
double y_p2(const Matrix& s_p, const Matrix& psi_p, const Matrix& a);
double y_p4(const Matrix& s_p, const Matrix& psi_p, const Matrix& a);
double y_i2(const Matrix& s_i, const Matrix& psi_i, const Matrix& a);
double y_i4(const Matrix& s_i, const Matrix& psi_i, const Matrix& a);

/// Rectifier DC proxy for an arbitrary-phase design: combines the four
/// moments above with the second/fourth order coefficients and the
/// power-splitting ratio, including the deterministic/random cross term.
double zdc(const WaveformDesign& design, const FrequencyResponse& channel,
           const RectennaParams& rect);

/// Same quantity on the phase-aligned fast path: amplitudes only, all
/// cosines collapsed. Kept algebraically independent of zdc() so the two
/// routes can audit each other.
double zdc_matched(const Matrix& s_p, const Matrix& s_i, double rho, const Matrix& a,
                   const RectennaParams& rect);

/// Information rate in bits per symbol with phase-aligned precoding.
double rate(const Matrix& s_i, double rho, const Matrix& a, const NoiseProfile& noise);

/// Rate for arbitrary total received phases psi_i (coherence across antennas
/// degrades when they are not aligned).
double rate_general(const Matrix& s_i, const Matrix& psi_i, double rho, const Matrix& a,
                    const NoiseProfile& noise);

/// Sampling configuration of the time-domain estimator. The carrier is
/// replaced by a surrogate at carrier_multiple * delta_f so the waveform is
/// exactly periodic; the default multiple (4N) keeps every fourth-order
/// intermodulation product distinguishable from DC. Sampling runs at
/// oversample points per carrier-plus-bandwidth cycle.
struct MonteCarloOptions {
  int carrier_multiple = 0;  // 0 = choose 4 * num_tones
  int oversample = 16;
};

struct MonteCarloReport {
  double estimate = 0.0;
  double std_error = 0.0;
  uint64_t num_symbols = 0;
  uint64_t seed = 0;
  int carrier_multiple = 0;
  double sample_rate_hz = 0.0;
  int samples_per_period = 0;
  // Cross moments between the deterministic and random components, with
  // their standard errors; all three vanish in expectation.
  double cross_pi_mean = 0.0, cross_pi_se = 0.0;
  double cross_p3i_mean = 0.0, cross_p3i_se = 0.0;
  double cross_pi3_mean = 0.0, cross_pi3_se = 0.0;
};

/// Time-domain Monte-Carlo estimate of the DC proxy: draws symbol vectors,
/// synthesizes the received waveform on the surrogate grid, averages the
/// rectified signal over one period per symbol and across symbols. Per-symbol
/// seeds derive from the master seed, so results do not depend on evaluation
/// order.
MonteCarloReport monte_carlo_zdc(const WaveformDesign& design, std::span<const PathTap> taps,
                                 const ArrayGeometry& geometry, const FrequencyGrid& grid,
                                 const RectennaParams& rect, uint64_t num_symbols, uint64_t seed,
                                 const MonteCarloOptions& options = {});

/// Ordered tone quadruples (n0, n1, n2, n3) with n0 + n1 = n2 + n3, the
/// index set of the fourth-order DC sums. Cached per tone count.
const std::vector<std::array<int, 4>>& dc_quadruples(int num_tones);

}  // namespace swipt
