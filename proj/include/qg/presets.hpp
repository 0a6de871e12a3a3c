#pragma once

#include "qg/forms.hpp"
#include "qg/ncalg.hpp"

namespace qg {

/// Built-in presentations: "gl2-quea", "gl3-quea", "gl2-qfsha",
/// "gl2-double-quea", "gl2-double-qfsha".  Cached per (name, window, degree).
PresPtr preset(const std::string& name);
PresPtr preset(const std::string& name, Window w, int degree);
std::vector<std::string> preset_names();

/// The dual pair attached to a family: "gl2" or "gl2-double".
PairingSpec preset_pairing(const std::string& family);
PairingSpec preset_pairing(const std::string& family, Window w, int degree);

/// Deep copy with re-pointed internal elements (used to widen windows and to
/// rematerialize deformed presentations).
std::shared_ptr<Presentation> clone_presentation(const Presentation& p);

/// Linear combination of cartan generators.
AlgElem cartan_combo(const Presentation* p, const std::map<int, Rat>& combo);
/// exp(h * combo), eagerly expanded to a truncated polynomial.
AlgElem cartan_exp(const Presentation* p, const std::map<int, Rat>& combo);

}  // namespace qg
