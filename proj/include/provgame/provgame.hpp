#pragma once

#include "provgame/datalog.hpp"
#include "provgame/errors.hpp"
#include "provgame/extract.hpp"
#include "provgame/game.hpp"
#include "provgame/polynomial.hpp"
#include "provgame/querygame.hpp"
#include "provgame/render.hpp"
#include "provgame/wellfounded.hpp"
