#pragma once

#include "cerenkov_fiber/expectation.hpp"

#include <functional>
#include <limits>
#include <optional>

namespace fiber {

enum class DilationMode { parallel, perpendicular };

/// Cutoff dilation generator. With a shell the cutoff is chi_n(|k|) xi(k-hat)
/// (xi = 1 without a cone); otherwise it is the window on [1/kappa, kappa].
struct DilationSpec {
  double kappa = std::numeric_limits<double>::infinity();
  std::optional<std::size_t> shell;
  std::optional<ConeSpec> cone;
  DilationMode mode = DilationMode::parallel;
  /// Transverse directions are taken relative to this axis.
  Vec3 perp_axis = Vec3::UnitZ();

  /// Throws InvalidArgument for finite kappa <= max(cutoff, 1) or shell n = 0.
  void validate(const FormFactor& ff) const;
  /// Cutoff F(k) of the generator.
  double cutoff(const Vec3& k) const;
};

/// Symbol (i d rho)(k) of the dilated form factor.
///   parallel:      -F [ r d/dr (F rho) + 3/2 F rho ]
///   perpendicular: -F [ k_perp . grad (F rho) + F rho ]
double dilated_form_factor(const FormFactor& ff, const DilationSpec& spec, const Vec3& k);
std::function<double(const Vec3&)> dilated_form_factor(const FormFactor& ff, const DilationSpec& spec);

/// Residual and the four signed contributions that sum to it.
struct VirialResidual {
  double residual = 0.0;
  double field_energy_term = 0.0;
  double mixed_term = 0.0;
  double momentum_term = 0.0;
  double coupling_term = 0.0;
  bool renormalized = false;
};

/// R = <dGamma(F^2 |k|)> + <dGamma(F^2 k) . P^f> - P . <dGamma(F^2 k)>
///     - g <b+(i d rho) + b(i d rho)>
/// with F the window cutoff of `spec` (shell and cone must be unset).
VirialResidual virial_residual(const FiberModel& model, const Vector& state, const Vec3& P, double g,
                               const DilationSpec& spec);

/// Sector residual
///   parallel:      <dGamma(F^2 |k|)> - gradE . <dGamma(F^2 k)> - g <b+(i d rho) + h.c.>
///   perpendicular: <dGamma(F^2 |k_perp|^2/|k|)> - gradE . <dGamma(F^2 k_perp)> - g <...>
/// with F = chi_n xi. mixed_term is zero.
VirialResidual sector_virial_residual(const FiberModel& model, const Vector& state,
                                      const Vec3& grad_E, double g, const DilationSpec& spec);

/// <H_P> - P^2/2 + 1/2 <(P^f)^2> - g <b+(i d_inf rho) + h.c.> - g <phi(rho)>.
/// Identical to the kappa = inf virial residual.
double energy_identity_residual(const FiberModel& model, const Vector& state, const Vec3& P, double g);

}  // namespace fiber
