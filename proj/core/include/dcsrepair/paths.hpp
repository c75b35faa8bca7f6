#pragma once

#include <string>

namespace dcsrepair {

// Resolution order: DCS_REPAIR_DATA_DIR env var, installed share directory,
// then the source-tree data directory (useful for development builds).
std::string default_data_dir();

std::string join_path(const std::string& dir, const std::string& rel);

}  // namespace dcsrepair
