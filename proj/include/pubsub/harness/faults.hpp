#ifndef PUBSUB_HARNESS_FAULTS_HPP_
#define PUBSUB_HARNESS_FAULTS_HPP_

#include <optional>
#include <string_view>
#include <vector>

#include "pubsub/harness/json_io.hpp"
#include "pubsub/harness/trace.hpp"

namespace pubsub::harness {

/// Built-in mutations of the three-node example run. `none` is the control.
enum class Fault {
  none,
  drop_receiver,
  skip_good_state_check,
  forward_to_self,
  leave_with_pending,
  duplicate_seen,
  unsorted_seen,
};

std::string_view fault_name(Fault f);
std::optional<Fault> parse_fault(std::string_view name);
std::vector<Fault> all_faults();

/**
 * Three peers on topic t. Peer 1 publishes m; peers 2 and 3 subscribe and
 * track each other, and peer 1 tracks peer 3. Events: 1 produces m, 1
 * forwards it to 3, 1 leaves, 2 and 3 unsubscribe, 3 forwards m to nobody.
 */
Scenario three_node_scenario();

/// Runs the example with fault `f` injected and checks the resulting trace.
CheckReport run_mutation(Fault f);

}  // namespace pubsub::harness

#endif  // PUBSUB_HARNESS_FAULTS_HPP_
