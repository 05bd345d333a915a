#include "tprice/errors.hpp"

#include <utility>

namespace tprice {

ConfigError::ConfigError(std::string field, const std::string& message)
    : Error(field.empty() ? message : field + " " + message),
      field_(std::move(field)) {}

}  // namespace tprice
