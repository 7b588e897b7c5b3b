#pragma once

#include <string>
#include <string_view>

namespace ptw {

/// Wave family: Boussinesq with f(u) = u^2/2 (cnoidal), with f(u) = u^3
/// (dnoidal), and the Klein-Gordon-Zakharov system (dnoidal).
enum class Model { Boussinesq2, Boussinesq3, KGZ };

/// CLI spelling: "boussinesq2", "boussinesq3", "kgz".
std::string_view model_name(Model model);

/// Inverse of model_name. Throws std::invalid_argument on unknown names.
Model parse_model(std::string_view name);

}  // namespace ptw
