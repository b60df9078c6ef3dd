#pragma once

#include "anchorfree/anchorfree.hpp"
#include "anchorfree/baselines.hpp"
#include "anchorfree/cooccur.hpp"
#include "anchorfree/corpus.hpp"
#include "anchorfree/eval.hpp"
#include "anchorfree/numerics.hpp"
#include "anchorfree/synth.hpp"
