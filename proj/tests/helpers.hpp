#pragma once

#include <doctest.h>

#include <string>

#include "fixtures.hpp"
#include "nctwist/triple.hpp"

namespace nctest {

inline double residual_of(const ConditionReport& rep, const std::string& name) {
  const ConditionResult* row = rep.find(name);
  REQUIRE(row != nullptr);
  return row->residual;
}

}  // namespace nctest
