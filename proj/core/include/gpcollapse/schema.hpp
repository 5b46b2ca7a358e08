#pragma once

#include <string>

namespace gpcollapse {

inline constexpr int kSchemaVersion = 1;

/// Identifier written into every text artifact, e.g. "gpcollapse.scan/1".
inline std::string schema_id(const std::string& kind) {
  return "gpcollapse." + kind + "/" + std::to_string(kSchemaVersion);
}

/// First line of every CSV artifact.
inline std::string schema_comment(const std::string& kind) { return "# schema=" + schema_id(kind); }

}  // namespace gpcollapse
