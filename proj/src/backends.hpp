#pragma once

#include <memory>

#include "finex/neighbors.hpp"

namespace finex::detail {

std::unique_ptr<NeighborProvider> make_kd_tree(const Dataset& data, double epsilon);
std::unique_ptr<NeighborProvider> make_inverted_list(const Dataset& data, double epsilon);

}  // namespace finex::detail
