#pragma once

#include <string>

#include "json.hpp"

#include "gradual/analysis.hpp"
#include "gradual/harness.hpp"

namespace gradual {

nlohmann::json to_json(const CurriculumResult& result, bool include_log = false);
nlohmann::json to_json(const TransferReport& report);
nlohmann::json to_json(const ComplexityReport& report);
nlohmann::json to_json(const SharedStructureScore& score);

std::string render_text(const CurriculumResult& result);
std::string render_text(const TransferReport& report, const std::string& check);
std::string render_text(const ComplexityReport& report);

}  // namespace gradual
