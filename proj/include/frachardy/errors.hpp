#pragma once

#include <stdexcept>
#include <string>

namespace frachardy {

// Machine-readable error codes surfaced by the CLI as "E<nnn>: message".
enum ErrorCode {
  ERR_INVALID_PARAMS = 100,
  ERR_DOMAIN_UNKNOWN_TYPE = 101,
  ERR_DOMAIN_BAD_POLYGON = 102,
  ERR_DOMAIN_BAD_SHAPE = 103,
  ERR_POINT_OUTSIDE = 110,
  ERR_DEGENERATE_RAY = 111,
  ERR_POINT_ON_BOUNDARY = 112,
  ERR_MESH_FAILURE = 120,
  ERR_QUADRATURE_CONFIG = 121,
  ERR_EIGENSOLVER = 130,
  ERR_BRACKET_FAILURE = 131,
  ERR_ADAPTIVE = 132,
  ERR_IO = 140,
};

class Error : public std::runtime_error {
 public:
  Error(int code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

}  // namespace frachardy
