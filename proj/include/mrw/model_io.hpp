#pragma once

#include <filesystem>
#include <string>

#include "mrw/model.hpp"

namespace mrw {

// Model file schema:
//   { "states": [labels...], "P": [[...]],
//     "kernels": [[ {"type":"point","v":x}
//                 | {"type":"lattice","h":x,"c":x,"pmf":{"<int>":p,...}}
//                 | {"type":"gaussian","mean":x,"std":x}
//                 | null, ...]] }
// Lattice atoms are ordered by ascending integer key. Throws InputError on
// any syntax or schema problem; the model itself is not validated here.
MrwModel parse_model(const std::string& text);
MrwModel load_model(const std::filesystem::path& path);

std::string model_to_json(const MrwModel& m);

}  // namespace mrw
