#pragma once
// nlohmann::json conversions for the model types. Keys match field names;
// absent optionals are omitted on write and accepted as missing on read.
// Readers throw nlohmann::json::exception or std::invalid_argument on
// malformed input.

#include <nlohmann/json.hpp>

#include "liteval/annotation_model.hpp"

namespace liteval {

void to_json(nlohmann::json& j, const System& v);
void from_json(const nlohmann::json& j, System& v);
void to_json(nlohmann::json& j, const SourceParagraph& v);
void from_json(const nlohmann::json& j, SourceParagraph& v);
void to_json(nlohmann::json& j, const TranslationSegment& v);
void from_json(const nlohmann::json& j, TranslationSegment& v);
void to_json(nlohmann::json& j, const Evaluator& v);
void from_json(const nlohmann::json& j, Evaluator& v);
void to_json(nlohmann::json& j, const ErrorCategory& v);
void from_json(const nlohmann::json& j, ErrorCategory& v);
void to_json(nlohmann::json& j, const ErrorSpan& v);
void from_json(const nlohmann::json& j, ErrorSpan& v);
void to_json(nlohmann::json& j, const MQMAnnotation& v);
void from_json(const nlohmann::json& j, MQMAnnotation& v);
void to_json(nlohmann::json& j, const SQMRating& v);
void from_json(const nlohmann::json& j, SQMRating& v);
void to_json(nlohmann::json& j, const BWSJudgment& v);
void from_json(const nlohmann::json& j, BWSJudgment& v);
void to_json(nlohmann::json& j, const FreeSpan& v);
void from_json(const nlohmann::json& j, FreeSpan& v);
void to_json(nlohmann::json& j, const FreeAnnotation& v);
void from_json(const nlohmann::json& j, FreeAnnotation& v);

}  // namespace liteval
