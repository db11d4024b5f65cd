#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace baoii {

// Mutual-knowledge state of a two-entity system. Each entity tracks whether
// its self-knowledge and its view of the peer are currently wrong ("1" bits).
// Bit order everywhere: [y1_self, y1_other, y2_self, y2_other].
struct InfoState {
    bool y1_self = false;   // entity 1's self-knowledge is wrong
    bool y1_other = false;  // entity 1's view of entity 2 is wrong
    bool y2_self = false;   // entity 2's self-knowledge is wrong
    bool y2_other = false;  // entity 2's view of entity 1 is wrong

    friend bool operator==(const InfoState&, const InfoState&) = default;
};

// Canonical order; all matrices and vectors index against it.
enum class StateName : int { O = 0, Phi, A, B, Gamma, F, Psi, Theta, E };
inline constexpr int state_count = 9;

enum class EntityId : int { one = 1, two = 2 };
constexpr EntityId other(EntityId e) {
    return e == EntityId::one ? EntityId::two : EntityId::one;
}

enum class EventKind { drift, measure_only, measure_and_transmit };

struct Event {
    EventKind kind = EventKind::drift;
    EntityId actor = EntityId::one;

    friend bool operator==(const Event&, const Event&) = default;
};

// A state is representable only if an entity that is wrong about itself is
// also seen wrongly by its peer: y1_self implies y2_other, and y2_self
// implies y1_other.
constexpr bool is_valid(const InfoState& s) {
    return (!s.y1_self || s.y2_other) && (!s.y2_self || s.y1_other);
}

// The 9 valid states in canonical order.
const std::array<InfoState, state_count>& enumerate_states();

int index_of(const InfoState& s);           // throws input_error if invalid
StateName name_of(const InfoState& s);      // throws input_error if invalid
const InfoState& state_of(StateName n);

std::string_view to_string(StateName n);    // "O", "Phi", ..., "E"
StateName parse_state_name(std::string_view text);
std::string pattern_string(const InfoState& s);   // "[b,b,b,b]"

// Deterministic event effect. Drift corrupts the actor's self bit and the
// peer's view of the actor; measuring clears the actor's self bit;
// transmitting additionally clears the peer's view. Bits already at the
// target value stay put, so an event may be a no-op.
InfoState apply_event(const InfoState& s, const Event& e);

// Reset set: the states where the viewer's penalty is zero. For entity 1
// these are the states with y1_self = y1_other = y2_self = 0 (O and Phi).
bool is_reset_state(const InfoState& s, EntityId viewer);

// 1 while the viewer's penalty accrues; complement of is_reset_state.
int penalty_gate(const InfoState& s, EntityId viewer);

// States one drift away from the viewer's reset set, canonical order.
std::vector<InfoState> first_error_states(EntityId viewer);

// Relabeling that exchanges the two entity roles (bit pairs swapped).
InfoState swap_entities(const InfoState& s);

// All six events, canonical order: drift(1), drift(2), measure(1),
// measure(2), measure+transmit(1), measure+transmit(2).
const std::array<Event, 6>& all_events();

} // namespace baoii
