#pragma once

#include "certificate.hpp"
#include "delayed_tree.hpp"
#include "factorizer.hpp"
#include "minors.hpp"
#include "mixed_partition.hpp"
#include "order_chain.hpp"
#include "ordered_tree.hpp"
#include "path_system.hpp"
#include "permutation.hpp"
#include "rmq.hpp"
#include "separable.hpp"
#include "json_io.hpp"
#include "random.hpp"
