#pragma once

#include "kp/cdsynth.hpp"
#include "kp/conjunction.hpp"
#include "kp/theory.hpp"

#include <json.hpp>

#include <string>

namespace kp {

// File formats: rationals always serialize as "p/q" or "n" strings, never
// floats. Keys are emitted sorted, so serialization is byte-stable.

nlohmann::json measure_to_json(const SignedMeasure& m);
SignedMeasure measure_from_json(const nlohmann::json& j);

nlohmann::json theory_to_json(const Theory& t);
Theory theory_from_json(const nlohmann::json& j);

nlohmann::json pair_to_json(const CDPair& p);
CDPair pair_from_json(const nlohmann::json& j);

nlohmann::json conjunction_to_json(const Conjunction& c);
Conjunction conjunction_from_json(const nlohmann::json& j);

// Canonical text: sorted keys, two-space indent, trailing newline.
std::string canonical_text(const nlohmann::json& j);

nlohmann::json load_json(const std::string& path);
void save_text(const std::string& path, const std::string& text);

Theory load_theory(const std::string& path);
void save_theory(const std::string& path, const Theory& t);
CDPair load_pair(const std::string& path);
SignedMeasure load_measure(const std::string& path);
Conjunction load_conjunction(const std::string& path);
void save_conjunction(const std::string& path, const Conjunction& c);

}  // namespace kp
