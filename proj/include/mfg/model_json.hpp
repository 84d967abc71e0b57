#ifndef MFG_MODEL_JSON_HPP
#define MFG_MODEL_JSON_HPP

#include <string>

#include "mfg/model.hpp"

namespace mfg {

/// Builds a model from the JSON document
///   { "n_x", "n_t", "t0", "T", "alpha",
///     "a": {"kind": "constant"|"affine"|"table", ...},
///     "hamiltonian": {"kind": "sqrt1p", "potential": [...]},
///     "F": {"cos_coeffs": [...]}, "G": {"cos_coeffs": [...]} }
/// Throws std::invalid_argument with a descriptive message on malformed
/// input.
MfgModel model_from_json_text(const std::string& text);
MfgModel model_from_json_file(const std::string& path);

}  // namespace mfg

#endif
