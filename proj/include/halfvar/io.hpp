#ifndef HALFVAR_IO_HPP
#define HALFVAR_IO_HPP

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include "halfvar/examples.hpp"
#include "halfvar/path.hpp"

namespace halfvar {

/// Bad input from the user: malformed JSON, unknown generator, missing fields.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses JSON text; a syntax error becomes an InputError naming line and column.
nlohmann::json parse_json_text(const std::string& text, const std::string& source);

/// A path read from JSON. Explicit form: {"domain","dimension","breakpoints","values"}.
/// Generator form: {"generator": name, "depth": D, "seed": S}, materialized through
/// example_by_name, in which case the bundle is kept too.
struct LoadedPath {
  Path path;
  std::optional<ExampleBundle> bundle;
};

LoadedPath load_path(const nlohmann::json& j, int default_depth, std::uint64_t default_seed);
LoadedPath load_path_file(const std::string& file, int default_depth, std::uint64_t default_seed);

/// Shortest decimal that reads back to the same double ("%.17g" trimmed).
std::string format_double(double x);

/// CSV on n + 1 uniform parameters: parameter, value components, then centered
/// finite-difference first and second derivative components (one-sided at the ends).
std::string sample_csv(const std::function<Point(double)>& g, Interval dom, std::size_t dim, std::size_t n);

/// Pretty JSON with a trailing newline.
std::string dump(const nlohmann::json& j);

}  // namespace halfvar

#endif
