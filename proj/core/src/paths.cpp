#include "dcsrepair/paths.hpp"

#include <cstdlib>
#include <filesystem>

namespace dcsrepair {

std::string default_data_dir() {
  if (const char* env = std::getenv("DCS_REPAIR_DATA_DIR"); env && *env) return env;
#ifdef DCSREPAIR_INSTALL_DATA_DIR
  if (std::filesystem::exists(DCSREPAIR_INSTALL_DATA_DIR)) return DCSREPAIR_INSTALL_DATA_DIR;
#endif
#ifdef DCSREPAIR_SOURCE_DATA_DIR
  if (std::filesystem::exists(DCSREPAIR_SOURCE_DATA_DIR)) return DCSREPAIR_SOURCE_DATA_DIR;
#endif
  return "data";
}

std::string join_path(const std::string& dir, const std::string& rel) {
  return (std::filesystem::path(dir) / rel).string();
}

}  // namespace dcsrepair
