#pragma once

#include <doctest.h>

#include "romanlens/error.hpp"

// Fails unless `expr` throws romanlens::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected)                                       \
  do {                                                                         \
    try {                                                                      \
      (void)(expr);                                                            \
      FAIL_CHECK("no error thrown, expected " #expected);                      \
    } catch (const ::romanlens::Error& error_) {                               \
      CHECK_MESSAGE(error_.kind() == (expected), error_.what());               \
    }                                                                          \
  } while (0)
