#include "skewgeo/tolerances.hpp"

#include <utility>

#include "skewgeo/errors.hpp"

namespace skewgeo {

namespace {

using Field = double Tolerances::*;

const std::vector<std::pair<std::string, Field>>& table() {
  static const std::vector<std::pair<std::string, Field>> t = {
      {"rank", &Tolerances::rank},
      {"reorthogonalize", &Tolerances::reorthogonalize},
      {"frame", &Tolerances::frame},
      {"sigma", &Tolerances::sigma},
      {"gauss_split", &Tolerances::gauss_split},
      {"sff_paths", &Tolerances::sff_paths},
      {"ambient_structure", &Tolerances::ambient_structure},
      {"sasakian", &Tolerances::sasakian},
      {"xi_tangent", &Tolerances::xi_tangent},
      {"tf", &Tolerances::tf},
      {"eigen_range", &Tolerances::eigen_range},
      {"cluster", &Tolerances::cluster},
      {"slant", &Tolerances::slant},
      {"constancy", &Tolerances::constancy},
      {"normal_split", &Tolerances::normal_split},
      {"block", &Tolerances::block},
      {"warp", &Tolerances::warp},
      {"warp_expr", &Tolerances::warp_expr},
      {"f_constant", &Tolerances::f_constant},
      {"bishop", &Tolerances::bishop},
      {"torsion", &Tolerances::torsion},
      {"xi_ln_f", &Tolerances::xi_ln_f},
      {"lemma", &Tolerances::lemma},
      {"mixed_tg", &Tolerances::mixed_tg},
      {"theorem_margin", &Tolerances::theorem_margin},
      {"degenerate_fraction", &Tolerances::degenerate_fraction},
  };
  return t;
}

}  // namespace

double& Tolerances::at(std::string_view key) {
  for (const auto& [name, field] : table())
    if (name == key) return this->*field;
  throw SchemaError("tolerances." + std::string(key), "unknown tolerance key");
}

double Tolerances::at(std::string_view key) const {
  return const_cast<Tolerances*>(this)->at(key);
}

const std::vector<std::string>& Tolerances::keys() {
  static const std::vector<std::string> k = [] {
    std::vector<std::string> out;
    for (const auto& entry : table()) out.push_back(entry.first);
    return out;
  }();
  return k;
}

}  // namespace skewgeo
