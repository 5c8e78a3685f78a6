#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace micromap::cli {

inline constexpr int kOk = 0;
inline constexpr int kValidation = 1;
inline constexpr int kInputError = 2;

/// Runs one command line (without the program name).
///
///   render   --spec S [--dataset D] [--atlas A] --out F [--report] [--png] [--root R]
///   validate --spec S [--dataset D] [--atlas A] [--root R]
///   lq       AREA_CAT AREA_TOTAL NAT_CAT NAT_TOTAL  (or --area-cat ... flags)
///   datasets [--root R]
///   atlases  [--root R]
///   serve    [--port P] [--host H] [--root R] [--cors ORIGIN]
///
/// D is a dataset id or a dataset directory; A is an atlas id or a .geojson file. Both
/// default to the ids named in the spec file, and the atlas then to the dataset's atlas.
/// Exit 0 on success, 1 on validation issues, 2 on I/O, parse or usage errors.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace micromap::cli
