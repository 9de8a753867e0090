#include "halfvar/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace halfvar {

nlohmann::json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError(source + ": malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(col) +
                     ": " + e.what());
  }
}

LoadedPath load_path(const nlohmann::json& j, int default_depth, std::uint64_t default_seed) {
  if (!j.is_object()) throw InputError("path JSON must be an object");
  try {
    if (j.contains("generator")) {
      const auto name = j.at("generator").get<std::string>();
      const int depth = j.value("depth", default_depth);
      const auto seed = j.value("seed", default_seed);
      auto b = example_by_name(name, depth, seed);
      Path p = b.path;
      return {std::move(p), std::move(b)};
    }
    return {path_from_json(j), std::nullopt};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("path JSON: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("path JSON: ") + e.what());
  }
}

LoadedPath load_path_file(const std::string& file, int default_depth, std::uint64_t default_seed) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot open " + file);
  std::stringstream ss;
  ss << in.rdbuf();
  return load_path(parse_json_text(ss.str(), file), default_depth, default_seed);
}

std::string format_double(double x) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, x);
    if (std::strtod(buf, nullptr) == x) break;
  }
  return buf;
}

std::string sample_csv(const std::function<Point(double)>& g, Interval dom, std::size_t dim, std::size_t n) {
  std::string out = "s";
  for (std::size_t c = 0; c < dim; ++c) out += ",g" + std::to_string(c);
  for (std::size_t c = 0; c < dim; ++c) out += ",dg" + std::to_string(c);
  for (std::size_t c = 0; c < dim; ++c) out += ",d2g" + std::to_string(c);
  out += '\n';
  const double h = 1e-5 * dom.length();
  for (std::size_t i = 0; i <= n; ++i) {
    const double s = i == n ? dom.hi : dom.lo + dom.length() * (static_cast<double>(i) / static_cast<double>(n));
    // Stencil s0 - h, s0, s0 + h kept inside the domain.
    const double s0 = std::clamp(s, dom.lo + h, dom.hi - h);
    const Point y = g(s), ym = g(s0 - h), yc = g(s0), yp = g(s0 + h);
    out += format_double(s);
    for (std::size_t c = 0; c < dim; ++c) out += "," + format_double(y[c]);
    for (std::size_t c = 0; c < dim; ++c) {
      double d = (yp[c] - ym[c]) / (2.0 * h);
      if (s != s0) d += (s - s0) * (yp[c] - 2.0 * yc[c] + ym[c]) / (h * h);
      out += "," + format_double(d);
    }
    for (std::size_t c = 0; c < dim; ++c) out += "," + format_double((yp[c] - 2.0 * yc[c] + ym[c]) / (h * h));
    out += '\n';
  }
  return out;
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

}  // namespace halfvar
