#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string_view>

namespace diracstep::io {

/// Writes through a temporary sibling file and renames it over `path` only
/// after the writer finished and the stream flushed cleanly. On any failure
/// the temporary is removed and the exception propagates; `path` is never
/// left half-written.
void write_atomically(const std::filesystem::path& path,
                      const std::function<void(std::ostream&)>& writer);

void write_atomically(const std::filesystem::path& path, std::string_view content);

}  // namespace diracstep::io
