#pragma once

namespace astardec::search {

/// f = g + h.
double total_cost(double g, double h);

/// Step cost between a parent and its child: the heuristic improvement when
/// the child is strictly better, zero otherwise.
double cost_increment(double h_parent, double h_child);

}  // namespace astardec::search
