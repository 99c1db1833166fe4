// SPDX-License-Identifier: Apache-2.0
//
// beamsim — spatial-lobes hybrid precoding and diversity combining simulator
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "beamsim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "beamsim/codebook.hpp"
#include "beamsim/errors.hpp"

namespace beamsim {

double LinkBudget::snr_db() const { return 10.0 * std::log10(rho / sigma_n2); }

LinkBudget LinkBudget::from_snr_db(double snr_db, double sigma_n2) {
    if (sigma_n2 <= 0.0) {
        throw ContractViolation("LinkBudget: sigma_n2 must be positive");
    }
    return LinkBudget{sigma_n2 * std::pow(10.0, snr_db / 10.0), sigma_n2};
}

double spectral_efficiency(const CMatrix &h, const CMatrix &f_t, const CMatrix &w_t,
                           const LinkBudget &budget, arma::uword n_s) {
    if (w_t.n_rows != h.n_rows || f_t.n_rows != h.n_cols || f_t.n_cols != w_t.n_cols) {
        throw ContractViolation("spectral_efficiency: dimension mismatch");
    }
    if (frobenius_norm(w_t) <= 0.0) {
        throw NumericalError("spectral_efficiency: combiner is zero (singular noise covariance)");
    }
    // Whiten R_n = sigma^2 W^H W by its clamped inverse square root; the
    // log-det of I + (rho/N_s) R_n^{-1} X is invariant under the similarity
    // transform that makes the argument Hermitian.
    const CMatrix rn = budget.sigma_n2 * (w_t.t() * w_t);
    const CMatrix rn_isqrt = inv_sqrt_hermitian_psd(rn);
    const CMatrix m = rn_isqrt * (w_t.t() * h * f_t);
    const CMatrix arg = arma::eye<CMatrix>(n_s, n_s) +
                        (budget.rho / static_cast<double>(n_s)) * (m * m.t());
    return log_det_hermitian_psd(arg);
}

double spectral_efficiency(const CMatrix &h, const HybridSolution &sol, const LinkBudget &budget,
                           arma::uword n_s) {
    return spectral_efficiency(h, sol.precoder(), sol.combiner(), budget, n_s);
}

double spectral_efficiency(const CMatrix &h, const FullDigitalSolution &sol,
                           const LinkBudget &budget, arma::uword n_s) {
    return spectral_efficiency(h, sol.f_opt, sol.w_opt, budget, n_s);
}

double mutual_information(const CMatrix &h, const CMatrix &f_rf, const CMatrix &f_bb,
                          const LinkBudget &budget, arma::uword n_s) {
    const CMatrix ft = f_rf * f_bb;
    const CMatrix hf = h * ft;
    const CMatrix arg =
        arma::eye<CMatrix>(h.n_rows, h.n_rows) +
        (budget.rho / (static_cast<double>(n_s) * budget.sigma_n2)) * (hf * hf.t());
    return log_det_hermitian_psd(arg);
}

double euclidean_objective(const CMatrix &f_opt, const CMatrix &f_rf, const CMatrix &f_bb) {
    return frobenius_norm(f_opt - f_rf * f_bb);
}

double chordal_distance(const CVector &a, const CVector &b) {
    if (std::abs(arma::norm(a) - 1.0) > 1e-9 || std::abs(arma::norm(b) - 1.0) > 1e-9) {
        throw ContractViolation("chordal_distance: inputs must be unit vectors");
    }
    const double ip = std::abs(arma::cdot(a, b));
    return std::sqrt(std::max(0.0, 1.0 - ip * ip));
}

ComplexityReport flop_estimate(const std::string &scheme, const SystemDims &dims, arma::uword p,
                               arma::uword q, arma::uword b) {
    if (scheme != "omp" && scheme != "hyp_sld") {
        throw ContractViolation("flop_estimate: scheme must be omp or hyp_sld");
    }
    if (p == 0 || q == 0 || b == 0 || b > 16) {
        throw ContractViolation("flop_estimate: invalid p, q, or b");
    }
    const double nt = static_cast<double>(dims.n_t);
    const double nr = static_cast<double>(dims.n_r);
    const double nrf = static_cast<double>(dims.n_rf_t);
    const double ns = static_cast<double>(dims.n_s);
    const double cbsz = static_cast<double>(arma::uword(1) << b);

    // OMP baseline: reference SVD + full-codebook correlation + LS refits.
    const double omp_fopt = nt * nt * nr + nr * nr * nr;
    const double omp_analog = cbsz * nt * nrf * ns;
    const double omp_digital = nrf * nrf * nt * (nrf + ns);
    const double omp_total = omp_fopt + omp_analog + omp_digital;

    ComplexityReport report;
    report.scheme = scheme;
    if (scheme == "omp") {
        report.phases = {{"reference_svd", omp_fopt},
                         {"analog_search", omp_analog},
                         {"digital_ls", omp_digital}};
        report.total = omp_total;
        report.reduction_vs_baseline = 0.0;
        return report;
    }

    // Partitioned search: each lobe scans only its own slice of the
    // codebook, so the analog term sums the actual partition sizes of the
    // default layout (half-open intervals of width pi/p on the 2^b grid).
    const auto lobes = default_lobe_layout(p, {q}, true);
    double analog = 0.0;
    const arma::uword count = arma::uword(1) << b;
    for (const auto &lobe : lobes) {
        arma::uword part = 0;
        for (arma::uword i = 0; i < count; ++i) {
            const double phi =
                2.0 * std::numbers::pi * static_cast<double>(i) / static_cast<double>(count);
            if (in_lobe_interval(phi, lobe.mean_angle, lobe.angular_spread)) {
                ++part;
            }
        }
        analog += static_cast<double>(part) * nt * static_cast<double>(q);
    }
    const double digital = static_cast<double>(p) * static_cast<double>(q) *
                           static_cast<double>(q) * static_cast<double>(q);
    report.phases = {{"partitioned_analog_search", analog}, {"per_lobe_svd", digital}};
    report.total = analog + digital;
    const double reduction = 1.0 - report.total / omp_total;
    report.reduction_vs_baseline = std::clamp(reduction, 0.0, 1.0);
    return report;
}

} // namespace beamsim
