#pragma once

#include "nlc/error.hpp"
#include "nlc/gallai.hpp"
#include "nlc/graph.hpp"
#include "nlc/hypergraph.hpp"
#include "nlc/io.hpp"
#include "nlc/tranquil.hpp"
#include "nlc/tutte.hpp"
