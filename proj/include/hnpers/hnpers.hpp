#pragma once

#include "hnpers/chambers.hpp"
#include "hnpers/distances.hpp"
#include "hnpers/harness.hpp"
#include "hnpers/hn.hpp"
#include "hnpers/invariants.hpp"
#include "hnpers/io.hpp"
#include "hnpers/module.hpp"
#include "hnpers/stability.hpp"
