#ifndef LEVYEDGE_MODEL_IO_HPP
#define LEVYEDGE_MODEL_IO_HPP

#include "levyedge/levy_model.hpp"

#include <string>

namespace levyedge {

// Model file schema (JSON):
//   {
//     "sigma2": <number>, "rho": <number>,
//     "atoms": [{"x": <number>, "mass": <number>}, ...],
//     "density_pieces": [{"kind": "polyexp"|"tabulated",
//                         "support": [<number|"{-}inf">, <number|"inf">],
//                         "params": {...}}, ...],
//     "cramer_declared": <bool>
//   }
// polyexp params: {"poly": [...], "exp_poly": [...], "power": <number>}
// tabulated params: {"xs": [...], "values": [...], "monotone_tail": <bool>}
//
// serialize_model emits the canonical form (fixed key order, all fields
// present), so serialize -> parse -> serialize is byte-identical.

LevyTriplet parse_model(const std::string& json_text);
LevyTriplet load_model(const std::string& path);
std::string serialize_model(const LevyTriplet& triplet);
void save_model(const LevyTriplet& triplet, const std::string& path);

} // namespace levyedge

#endif
