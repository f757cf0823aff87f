#pragma once

#include "biord/aut.hpp"
#include "biord/cli.hpp"
#include "biord/cone.hpp"
#include "biord/errors.hpp"
#include "biord/magnus.hpp"
#include "biord/nonisolation.hpp"
#include "biord/oracle.hpp"
#include "biord/pl_map.hpp"
#include "biord/rational.hpp"
#include "biord/realization.hpp"
#include "biord/sign.hpp"
#include "biord/type_space.hpp"
#include "biord/word.hpp"
