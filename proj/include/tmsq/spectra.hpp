#pragma once

#include <stdexcept>
#include <string>

namespace tmsq {

enum class BathMode { optical, microwave };

// One reservoir with Lorentzian spectral density
//   J(w) = gamma * lambda^2 / ((w - w0)^2 + lambda^2),
// centered on the attached mode's transition frequency. 1/lambda is the
// memory time; the Markovian limit is lambda -> infinity at fixed gamma.
struct LorentzianBath {
    double gamma = 1e-3;   // global dissipation rate
    double lambda = 1e-2;  // spectral width
    double n_bar = 0.0;    // thermal occupation at the mode frequency
    BathMode label = BathMode::optical;

    void validate() const {
        if (!(gamma >= 0.0)) throw std::invalid_argument("LorentzianBath: gamma must be >= 0");
        if (!(lambda > 0.0)) throw std::invalid_argument("LorentzianBath: lambda must be > 0");
        if (!(n_bar >= 0.0)) throw std::invalid_argument("LorentzianBath: n_bar must be >= 0");
    }
};

double spectral_density(const LorentzianBath& bath, double detuning);

// Rotating-frame memory kernel f(t) = pi * gamma * lambda * e^{-lambda t},
// the full-line frequency integral of the centered Lorentzian. Real and
// positive; integrates to the Markovian rate kappa = pi * gamma.
double memory_kernel(const LorentzianBath& bath, double t);

double markovian_rate(const LorentzianBath& bath);

// Bose factor 1/(e^x - 1) with x = hbar*omega/(kB*T); errors for x <= 0.
double thermal_occupation(double freq_over_temp);

}  // namespace tmsq
