#include "ctb/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace ctb {

nlohmann::json make_report(const std::string& command, nlohmann::json config,
                           nlohmann::json derived, nlohmann::json metrics,
                           double wall_clock_sec) {
  return nlohmann::json{{"artifact_version", kArtifactVersion},
                        {"command", command},
                        {"config", std::move(config)},
                        {"derived", std::move(derived)},
                        {"metrics", std::move(metrics)},
                        {"wall_clock_sec", wall_clock_sec}};
}

void write_text_atomic(const std::string& path, const std::string& text) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp + " for writing");
    out << text;
    if (!out.flush()) throw std::runtime_error("write failed: " + tmp);
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("rename failed: " + path);
  }
}

void write_json_atomic(const std::string& path, const nlohmann::json& j) {
  write_text_atomic(path, j.dump(2) + "\n");
}

}  // namespace ctb
