#include "baoii/state_model.hpp"

#include "baoii/errors.hpp"

namespace baoii {

namespace {

constexpr std::array<InfoState, state_count> k_states = {{
    {false, false, false, false},  // O
    {false, false, false, true},   // Phi
    {true, false, false, true},    // A
    {false, true, true, false},    // B
    {false, true, true, true},     // Gamma
    {false, true, false, true},    // F
    {true, true, false, true},     // Psi
    {false, true, false, false},   // Theta
    {true, true, true, true},      // E
}};

constexpr std::array<std::string_view, state_count> k_names = {
    "O", "Phi", "A", "B", "Gamma", "F", "Psi", "Theta", "E",
};

constexpr std::array<Event, 6> k_events = {{
    {EventKind::drift, EntityId::one},
    {EventKind::drift, EntityId::two},
    {EventKind::measure_only, EntityId::one},
    {EventKind::measure_only, EntityId::two},
    {EventKind::measure_and_transmit, EntityId::one},
    {EventKind::measure_and_transmit, EntityId::two},
}};

} // namespace

const std::array<InfoState, state_count>& enumerate_states() {
    return k_states;
}

const std::array<Event, 6>& all_events() {
    return k_events;
}

int index_of(const InfoState& s) {
    for (int i = 0; i < state_count; ++i) {
        if (k_states[static_cast<std::size_t>(i)] == s) return i;
    }
    throw input_error("not a representable information state: " + pattern_string(s));
}

StateName name_of(const InfoState& s) {
    return static_cast<StateName>(index_of(s));
}

const InfoState& state_of(StateName n) {
    return k_states[static_cast<std::size_t>(n)];
}

std::string_view to_string(StateName n) {
    return k_names[static_cast<std::size_t>(n)];
}

StateName parse_state_name(std::string_view text) {
    for (int i = 0; i < state_count; ++i) {
        if (k_names[static_cast<std::size_t>(i)] == text) return static_cast<StateName>(i);
    }
    throw input_error("unknown state name: " + std::string(text));
}

std::string pattern_string(const InfoState& s) {
    std::string out = "[";
    out += s.y1_self ? '1' : '0';
    out += ',';
    out += s.y1_other ? '1' : '0';
    out += ',';
    out += s.y2_self ? '1' : '0';
    out += ',';
    out += s.y2_other ? '1' : '0';
    out += ']';
    return out;
}

InfoState apply_event(const InfoState& s, const Event& e) {
    if (!is_valid(s)) {
        throw input_error("apply_event: invalid input state " + pattern_string(s));
    }
    InfoState r = s;
    const bool actor_is_one = e.actor == EntityId::one;
    switch (e.kind) {
    case EventKind::drift:
        if (actor_is_one) {
            r.y1_self = true;
            r.y2_other = true;
        } else {
            r.y2_self = true;
            r.y1_other = true;
        }
        break;
    case EventKind::measure_only:
        if (actor_is_one) {
            r.y1_self = false;
        } else {
            r.y2_self = false;
        }
        break;
    case EventKind::measure_and_transmit:
        if (actor_is_one) {
            r.y1_self = false;
            r.y2_other = false;
        } else {
            r.y2_self = false;
            r.y1_other = false;
        }
        break;
    }
    return r;
}

bool is_reset_state(const InfoState& s, EntityId viewer) {
    if (viewer == EntityId::one) {
        return !s.y1_self && !s.y1_other && !s.y2_self;
    }
    return !s.y2_self && !s.y2_other && !s.y1_self;
}

int penalty_gate(const InfoState& s, EntityId viewer) {
    return is_reset_state(s, viewer) ? 0 : 1;
}

std::vector<InfoState> first_error_states(EntityId viewer) {
    std::vector<InfoState> out;
    for (const InfoState& s : k_states) {
        if (!is_reset_state(s, viewer)) continue;
        for (EntityId actor : {EntityId::one, EntityId::two}) {
            const InfoState t = apply_event(s, {EventKind::drift, actor});
            if (is_reset_state(t, viewer)) continue;
            bool seen = false;
            for (const InfoState& u : out) seen = seen || u == t;
            if (!seen) out.push_back(t);
        }
    }
    // canonical order
    std::vector<InfoState> ordered;
    for (const InfoState& s : k_states) {
        for (const InfoState& t : out) {
            if (s == t) ordered.push_back(s);
        }
    }
    return ordered;
}

InfoState swap_entities(const InfoState& s) {
    return {s.y2_self, s.y2_other, s.y1_self, s.y1_other};
}

} // namespace baoii
