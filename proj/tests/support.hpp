#pragma once

#include <doctest.h>

#include "nnrank/error.hpp"

namespace testing {

// The ErrorCode thrown by fn, or fails the test case if nothing is thrown.
template <class Fn>
nnr::ErrorCode code_of(Fn&& fn) {
  try {
    fn();
  } catch (const nnr::Error& e) {
    return e.code();
  }
  FAIL("expected an nnr::Error");
  return nnr::ErrorCode::MalformedFile;
}

}  // namespace testing
