#include "qfcm/oracle.hpp"

#include <json.hpp>

namespace qfcm {

namespace {

const char* type_name(QueryType t) {
  switch (t) {
    case QueryType::kMembership:
      return "membership";
    case QueryType::kPair:
      return "pair";
    case QueryType::kTriplet:
      return "triplet";
  }
  return "unknown";
}

}  // namespace

void QueryLedger::charge(QueryType t) {
  std::uint64_t* count = nullptr;
  const std::optional<std::uint64_t>* cap = nullptr;
  switch (t) {
    case QueryType::kMembership:
      count = &counts_.membership;
      cap = &budget_.membership;
      break;
    case QueryType::kPair:
      count = &counts_.pair;
      cap = &budget_.pair;
      break;
    case QueryType::kTriplet:
      count = &counts_.triplet;
      cap = &budget_.triplet;
      break;
  }
  if (cap->has_value() && *count >= **cap) {
    throw BudgetError(std::string(type_name(t)) + " query budget of " + std::to_string(**cap) +
                          " exhausted",
                      counts_);
  }
  ++*count;
}

void QueryLedger::log(const QueryRecord& record) {
  if (logging_) records_.push_back(record);
}

void QueryLedger::write_jsonl(std::ostream& out) const {
  for (const auto& r : records_) {
    nlohmann::json j;
    switch (r.type) {
      case QueryType::kMembership:
        j = {{"t", "mem"}, {"i", r.a}, {"j", r.b}, {"ans", r.answer}};
        break;
      case QueryType::kPair:
        j = {{"t", "pair"}, {"p", r.a}, {"q", r.b}, {"ans", r.answer}};
        break;
      case QueryType::kTriplet:
        j = {{"t", "tri"}, {"p", r.a}, {"q", r.b}, {"r", r.c}, {"ans", r.answer}};
        break;
    }
    out << j.dump() << '\n';
  }
}

}  // namespace qfcm
