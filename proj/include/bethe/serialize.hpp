#pragma once

#include <string>

#include "json.hpp"

#include "bethe/baesolver.hpp"
#include "bethe/rootsys.hpp"

namespace bethe {

/// Root normalization convention, recorded in every report header.
std::string normalization_convention();

nlohmann::json vector_json(const Vector& v);
nlohmann::json to_json(const RootSystem& rs);
nlohmann::json to_json(const Coupling& k);
nlohmann::json to_json(const BaeSolution& s);

/// JSON has no NaN or infinity; those become null.
nlohmann::json number_json(double x);

} // namespace bethe
