#pragma once

#include "json.hpp"

#include "ssre/harness.hpp"

namespace ssre {

inline constexpr int kSchemaVersion = 1;

nlohmann::json to_json(const Boundaries& b);
nlohmann::json to_json(const SsreOutcome& o, bool include_path = true);
nlohmann::json to_json(const DmResult& r);
nlohmann::json to_json(const StoppingTimeStats& s);
nlohmann::json to_json(const FittedMethod& m);
nlohmann::json to_json(const ScreenReport& r);
nlohmann::json to_json(const ExperimentSpec& s);
nlohmann::json to_json(const ReplicationRecord& r);
nlohmann::json to_json(const McReport& r, bool include_records = false);
nlohmann::json to_json(const Table1& t);

/// Adds `schema_version` at the top level.
nlohmann::json versioned(nlohmann::json j);

}  // namespace ssre
