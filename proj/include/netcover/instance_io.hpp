#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>

#include "netcover/model.hpp"

namespace netcover {

/// Malformed instance document (syntax or schema).
class InstanceFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses the structured instance document. Edge lengths default to the
/// Euclidean distance between endpoints when omitted. Semantic checks are
/// left to validate_instance().
ProblemInstance parse_instance(const std::string& text);
ProblemInstance load_instance(const std::filesystem::path& path);

/// Serializes with explicit edge lengths.
std::string serialize_instance(const ProblemInstance& inst);

}  // namespace netcover
