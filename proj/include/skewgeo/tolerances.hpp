#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace skewgeo {

/// Every numeric threshold used by the checks, in one place.
struct Tolerances {
  double rank = 1e-8;                // relative singular-value cut for the pushforward
  double reorthogonalize = 0.7;      // second Gram-Schmidt pass above this coefficient ratio
  double frame = 1e-10;              // Gram matrices vs identity
  double sigma = 1e-9;               // symmetry / normality of the second fundamental form
  double gauss_split = 1e-9;
  double sff_paths = 1e-8;           // two routes to |sigma|^2
  double ambient_structure = 1e-10;  // almost contact + compatibility identities (asserted)
  double sasakian = 1e-7;            // below this the ambient counts as Sasakian
  double xi_tangent = 1e-9;
  double tf = 1e-10;                 // T/F reconstruction and antisymmetry
  double eigen_range = 1e-9;         // Q spectrum inside [-1, 0]
  double cluster = 1e-6;             // eigenvalue clustering
  double slant = 1e-8;               // slant identities and angle checks
  double constancy = 1e-8;           // angle drift across samples
  double normal_split = 1e-9;
  double block = 1e-10;              // cross-factor metric entries
  double warp = 1e-9;                // fiber block vs scalar multiple of the gauge metric
  double warp_expr = 1e-6;           // recovered f vs declared expression (relative)
  double f_constant = 1e-10;         // relative spread below which f counts as constant
  double bishop = 1e-6;
  double torsion = 1e-8;             // the two orderings of a mixed covariant derivative
  double xi_ln_f = 1e-10;
  double lemma = 1e-6;
  double mixed_tg = 1e-9;
  double theorem_margin = 1e-9;
  double degenerate_fraction = 0.1;  // run fails above this fraction of degenerate samples

  /// Named access for overrides; throws on unknown keys.
  double& at(std::string_view key);
  double at(std::string_view key) const;
  static const std::vector<std::string>& keys();
};

}  // namespace skewgeo
