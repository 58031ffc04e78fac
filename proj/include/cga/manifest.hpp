#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cga/structure.hpp"

namespace cga {

// A directory holds its manifest in this file next to the automaton files.
inline constexpr const char* kManifestFile = "manifest";

struct LoadedManifest {
  StructurePtr structure;
  std::optional<std::string> oracle;  // oracle expression recorded by `build`
};

// Accepts the manifest file or its directory. Automaton paths are relative to the manifest.
// Multiplier files load on first use. Throws ParseError with the manifest line.
LoadedManifest load_manifest(const std::filesystem::path& path);

struct SaveOptions {
  std::size_t family_size = 5;  // family members x1..xN written out
  std::optional<std::string> oracle;
};

// Writes the manifest, the normal-form automaton and every finite multiplier (and inverse).
void save_manifest(const GraphAutomaticStructure& s, const std::filesystem::path& dir, const SaveOptions& opts = {});

}  // namespace cga
