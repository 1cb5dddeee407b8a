#pragma once

#include <string>
#include <vector>

#include "warpchen/scene.hpp"

namespace warpchen {

struct CatalogEntry {
  std::string name;
  std::string summary;
  std::vector<std::string> expected;  // closed-form values, one line each
  Scene scene;
};

const std::vector<CatalogEntry>& catalog_entries();
const CatalogEntry& catalog_entry(const std::string& name);  // UnknownCatalogEntry
Scene catalog(const std::string& name);

}  // namespace warpchen
