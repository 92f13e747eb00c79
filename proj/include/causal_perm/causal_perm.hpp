#ifndef CAUSAL_PERM_CAUSAL_PERM_HPP
#define CAUSAL_PERM_CAUSAL_PERM_HPP

#include "core.hpp"
#include "dag.hpp"
#include "ugraph.hpp"
#include "permutation.hpp"
#include "dseparation.hpp"
#include "moral.hpp"
#include "minimal_imap.hpp"
#include "graph_io.hpp"
#include "gaussian.hpp"
#include "data_io.hpp"
#include "oracle.hpp"
#include "rfd.hpp"
#include "benchgen.hpp"

#endif
