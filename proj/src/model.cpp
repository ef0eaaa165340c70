#include "adiapower/model.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace adiapower {

void LossModel::validate() const {
    auto check = [](double v, const char* name) {
        if (!std::isfinite(v) || v < 0.0)
            throw std::domain_error(std::string("loss rate ") + name +
                                    " must be finite and >= 0, got " + std::to_string(v));
    };
    check(gamma_S, "gamma_S");
    check(gamma_D, "gamma_D");
    check(gamma_W, "gamma_W");
}

double resonant_frequency(const CoilPhysical& coil) {
    if (!(coil.L > 0.0) || !(coil.C > 0.0))
        throw std::domain_error("resonant_frequency requires L > 0 and C > 0");
    return 1.0 / std::sqrt(coil.L * coil.C);
}

double coupling_from_mutual(double M, double L_S, double L_D,
                            double omega_S, double omega_D) {
    if (!(L_S > 0.0) || !(L_D > 0.0))
        throw std::domain_error("coupling_from_mutual requires positive inductances");
    if (!(omega_S > 0.0) || !(omega_D > 0.0))
        throw std::domain_error("coupling_from_mutual requires positive frequencies");
    const double bound = std::sqrt(L_S * L_D);
    if (M < 0.0 || M > bound)
        throw std::domain_error("mutual inductance violates passivity bound 0 <= M <= sqrt(L_S*L_D)");
    return M * std::sqrt(omega_S * omega_D / (L_S * L_D));
}

} // namespace adiapower
