#include <sstream>

#include "ittm/compilers.hpp"

namespace ittm {

PipelineManifest pipeline_manifest(const Program& p) {
  PipelineManifest m{stretch_program(BlockLayout::three_wide()),
                     compile_simulate(p).q,
                     compression_program(BlockLayout::three_wide(), 2)};
  return m;
}

std::string pipeline_manifest_json(const std::vector<std::string>& files) {
  std::ostringstream out;
  out << "{\"programs\":[";
  for (std::size_t i = 0; i < files.size(); ++i) {
    if (i) out << ',';
    out << '"' << files[i] << '"';
  }
  out << "],\"order\":\"serial\"}\n";
  return out.str();
}

}  // namespace ittm
