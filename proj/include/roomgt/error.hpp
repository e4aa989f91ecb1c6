#pragma once

#include <stdexcept>
#include <string>

namespace roomgt {

// Base of every error thrown by the toolkit. The CLI maps these to exit 1.
struct error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Malformed input document. `where` is a line number or a JSON field path.
struct parse_error : error {
  parse_error(const std::string& where, const std::string& msg)
      : error(where + ": " + msg), where{where} {}
  std::string where;
};

// A document refers to something that does not exist (material id, light).
struct reference_error : error {
  reference_error(const std::string& id, const std::string& msg)
      : error(msg + " '" + id + "'"), id{id} {}
  std::string id;
};

struct io_error : error {
  using error::error;
};

}  // namespace roomgt
