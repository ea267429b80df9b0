#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace tmsq {

// All rates, frequencies and times are expressed in units of the effective
// mechanical frequency (tilde_omega_b = 1) and its inverse.
inline constexpr double kTildeOmegaB = 1.0;

struct SystemParams {
    double g = 0.15;       // enhanced electromechanical coupling
    double G = 0.15;       // enhanced optomechanical coupling
    double r = 0.2;        // mechanical parametric amplifier squeeze parameter
    double delta_c = 3.5;  // microwave detuning
    double delta_a = std::numeric_limits<double>::quiet_NaN();  // optical detuning; NaN -> -delta_c + energy shift
    double alpha = 0.0;    // optical drive phase
    double phi = 0.0;      // microwave drive phase

    void validate() const {
        if (!(g >= 0.0)) throw std::invalid_argument("SystemParams: g must be >= 0");
        if (!(G >= 0.0)) throw std::invalid_argument("SystemParams: G must be >= 0");
        if (!(r >= 0.0)) throw std::invalid_argument("SystemParams: r must be >= 0");
        if (!(delta_c > kTildeOmegaB))
            throw std::invalid_argument("SystemParams: delta_c must exceed the mechanical frequency");
    }
};

struct ValidityCriterion {
    bool pass = false;
    double margin = 0.0;  // signed distance to the threshold, positive = pass
};

struct ValidityReport {
    ValidityCriterion coupling_range;   // 0.1 <= g, G <= 0.3
    ValidityCriterion mpa_range;        // r <= 0.2
    ValidityCriterion large_detuning;   // min(|1-delta_a|,|1-delta_c|) / max(g e^r, G e^r) >= threshold
    double detuning_ratio = 0.0;
    double ratio_threshold = 10.0;
    bool all_pass() const { return coupling_range.pass && mpa_range.pass && large_detuning.pass; }
};

struct EffectiveModel {
    double g_eff = 0.0;
    double delta = 0.0;
    double theta = 0.0;  // alpha + phi
    ValidityReport valid;
};

// g_eff = 2 wb g G e^{2r} / (delta_c^2 - wb^2)
double effective_coupling(const SystemParams& p);

// delta = 2 (G^2 + g^2) e^{2r} wb / (wb^2 - delta_c^2); negative for delta_c > wb
double energy_shift(const SystemParams& p);

// Resolved optical detuning: the stored value, or -delta_c + delta when unset.
double resolved_delta_a(const SystemParams& p);

struct MpaFrame {
    double r;
    double tilde_omega_b;
};

// Inverts tanh(2r) = 2 Omega_b / Delta_b; errors outside the artanh domain.
MpaFrame mpa_frame(double Delta_b, double Omega_b);

ValidityReport validity_check(const SystemParams& p, double ratio_threshold = 10.0);

EffectiveModel effective_model(const SystemParams& p, double ratio_threshold = 10.0);

}  // namespace tmsq
