#include <doctest.h>
#include "ipod/threshold.hpp"
TEST_CASE("smoke") { CHECK(ipod::apply(ipod::ThresholdRule::soft(), 3.0, 1.0) == 2.0); }
