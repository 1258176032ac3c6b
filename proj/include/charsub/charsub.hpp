#pragma once

#include <charsub/aseq.hpp>
#include <charsub/caps.hpp>
#include <charsub/circle.hpp>
#include <charsub/classify.hpp>
#include <charsub/error.hpp>
#include <charsub/index_set.hpp>
#include <charsub/membership.hpp>
#include <charsub/metric.hpp>
#include <charsub/numeric.hpp>
#include <charsub/parse.hpp>
#include <charsub/xs.hpp>
