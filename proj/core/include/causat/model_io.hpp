#pragma once

// JSON documents for SCMs, Bayesian networks, joint tables and DAGs.
// Probabilities are strings ("num/den" or exact decimals). Output is
// canonical: sorted keys, lowest-terms rationals, support and entries in
// lexicographic order, so a canonical file round-trips byte for byte.
// See docs/model-format.md.

#include <filesystem>
#include <string>
#include <string_view>
#include <variant>

#include "causat/model.hpp"

namespace causat {

using AnyModel = std::variant<Scm, Bn, JointTable, Dag>;

/// Parses any document by its "kind" field and validates it. Throws
/// ModelError with a description of the first problem found.
AnyModel parseModelJson(std::string_view text);
AnyModel loadModelFile(const std::filesystem::path& path);

Scm loadScm(const std::filesystem::path& path);
Dag loadDag(const std::filesystem::path& path);

std::string toJson(const Scm& scm);
std::string toJson(const Bn& bn);
std::string toJson(const JointTable& table);
std::string toJson(const Dag& dag);

/// Reads a whole file, or standard input when `path` is "-".
std::string readTextFile(const std::filesystem::path& path);
void writeTextFile(const std::filesystem::path& path, std::string_view text);

}  // namespace causat
