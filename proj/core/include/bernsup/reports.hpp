#pragma once

#include <span>
#include <string>

#include "bernsup/chaining.hpp"
#include "bernsup/inequalities.hpp"
#include "bernsup/montecarlo.hpp"
#include "bernsup/oracle.hpp"
#include "bernsup/search.hpp"

namespace bernsup {

// JSON serialization of report types. Key order is fixed and doubles are
// emitted with the library's shortest round-trip encoding, so identical runs
// produce byte-identical documents. Probabilities serialize as
// {"num": k, "den2exp": n} in exact mode and as decimals in float mode.

std::string to_json(const TailReport& rep);
std::string to_json(const MCReport& rep);
std::string to_json(const ConstantPlan& plan);
std::string to_json(const ChainingNet& net);
std::string to_json(const CheckResult& r);
std::string to_json(const SuiteReport& rep);
std::string to_json(const SearchState& st);
std::string to_json(std::span<const SharpnessRow> rows, double c, uint64_t budget, uint64_t seed);
std::string to_json(const ConstantRow& row);
std::string to_json(const FamilyBound& fb, const ConstantPlan& plan, const std::string& family_digest);

std::string suite_to_csv(const SuiteReport& rep);
std::string sharpness_to_csv(std::span<const SharpnessRow> rows);

}  // namespace bernsup
