#include "tmsq/spectra.hpp"

#include <cmath>

namespace tmsq {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double spectral_density(const LorentzianBath& bath, double detuning) {
    bath.validate();
    return bath.gamma * bath.lambda * bath.lambda /
           (detuning * detuning + bath.lambda * bath.lambda);
}

double memory_kernel(const LorentzianBath& bath, double t) {
    bath.validate();
    if (t < 0.0) throw std::invalid_argument("memory_kernel: t must be >= 0");
    return kPi * bath.gamma * bath.lambda * std::exp(-bath.lambda * t);
}

double markovian_rate(const LorentzianBath& bath) {
    return kPi * bath.gamma;
}

double thermal_occupation(double freq_over_temp) {
    if (!(freq_over_temp > 0.0))
        throw std::invalid_argument("thermal_occupation: argument must be > 0");
    return 1.0 / std::expm1(freq_over_temp);
}

}  // namespace tmsq
