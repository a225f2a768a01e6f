#pragma once

#include <filesystem>
#include <string>

#include "treecolor/certifier.hpp"

namespace treecolor {

/// Certificate as JSON text. Field order is fixed, so identical certificates
/// serialize to identical bytes. Doubles use the shortest representation that
/// reads back to the same binary value.
std::string certificate_to_json(const Certificate& cert);

/// Throws ParseError naming the offending field.
Certificate certificate_from_json(const std::string& text);

void write_certificate(const Certificate& cert, const std::filesystem::path& path);

/// Reads and verifies. Throws ParseError or VerificationError.
Certificate read_certificate(const std::filesystem::path& path);

/// Write, read back and verify.
Certificate certificate_roundtrip(const Certificate& cert, const std::filesystem::path& path);

} // namespace treecolor
