#pragma once

#include <complex>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "ramannli/link.hpp"
#include "ramannli/profile.hpp"
#include "ramannli/quadrature.hpp"

namespace ramannli {

/// rho(zeta, f) for an absolute frequency f.
using ProfileField = std::function<double(double zeta, double frequency)>;

struct MuResult {
    double value = 0.0;  ///< m^2
    double error = 0.0;
    bool converged = true;
};

/// |int_0^L sqrt(rho(z,f1) rho(z,f2) rho(z,f1+f2-f_i) / rho(z,f_i)) e^{j phi z} dz|^2
/// by adaptive quadrature. Throws DomainError on a negative profile value.
MuResult mu_numeric(double f1, double f2, double f_i, const ProfileField& rho, double phi, double length,
                    const QuadratureSpec& spec = {});

/// Link function as a function of phase mismatch only (profile of the CUT
/// used for every frequency).
class LinkFunction {
public:
    virtual ~LinkFunction() = default;
    virtual double operator()(double phi) const = 0;
};

/// Runs mu_numeric for each phi.
class QuadratureLink final : public LinkFunction {
public:
    QuadratureLink(std::function<double(double)> rho, double length, QuadratureSpec spec = {});
    double operator()(double phi) const override;

private:
    ProfileField field_;
    double length_;
    QuadratureSpec spec_;
};

/// Exact Fourier integral of rho(zeta) = sum_m c_m e^{-s_m zeta} over [0, L].
class ExponentialSumLink final : public LinkFunction {
public:
    /// (c_m, s_m) pairs.
    ExponentialSumLink(std::vector<std::pair<double, double>> terms, double length);
    double operator()(double phi) const override;
    std::complex<double> field_integral(double phi) const;
    double profile(double zeta) const;

private:
    std::vector<std::pair<double, double>> terms_;
    std::vector<double> decay_;  // e^{-s_m L}
    double length_;
};

/// The Taylor profile of one channel written as its three exponentials.
ExponentialSumLink taylor_profile_link(const ProfileParams& params, const ProfileContext& ctx, double f_i,
                                       double length);

struct OracleChannel {
    double frequency = 0.0;  ///< absolute, Hz
    double bandwidth = 0.0;
    double power = 0.0;
};

enum class PhaseModel {
    Exact,       ///< full beta2/beta3 phase of the frequency triplet
    Approximate  ///< phi_ik f1 (XPM) or phi_i f1 f2 (SPM)
};

enum class OracleMethod {
    Auto,      ///< LevelSet where it applies, Tensor otherwise
    Tensor,    ///< nested adaptive quadrature over f1 and f2
    LevelSet   ///< f1 traded for phi: outer quadrature of mu(phi) W(phi)
};

struct OracleOptions {
    bool window = true;
    PhaseModel phase = PhaseModel::Exact;
    OracleMethod method = OracleMethod::Auto;
    QuadratureSpec quad{1e-6, 0.0, 20000, 50.0};
};

struct OracleResult {
    double eta = 0.0;  ///< 1/W^2
    double error = 0.0;
    bool converged = true;
    long evaluations = 0;
    OracleMethod method = OracleMethod::Tensor;  ///< route actually taken
};

/// 2D quadrature of the XPM efficiency of interferer k on CUT i, carrying (P_k/P_i)^2.
OracleResult eta_xpm_numeric(const OracleChannel& cut, const OracleChannel& interferer, const LinkFunction& link,
                             const FiberSpan& span, const OracleOptions& options = {});

/// Half of the k = i XPM integral.
OracleResult eta_spm_numeric(const OracleChannel& cut, const LinkFunction& link, const FiberSpan& span,
                             const OracleOptions& options = {});

}  // namespace ramannli
