#include "voicepilot/servo_control.hpp"

#include "voicepilot/error.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace voicepilot {

ServoAngle::ServoAngle(double degrees) : degrees_(std::clamp(degrees, 0.0, kServoSpanDeg)) {}

double angle_to_pulse(ServoAngle angle) {
    return kMinPulseMs + (angle.degrees() / kServoSpanDeg) * (kMaxPulseMs - kMinPulseMs);
}

ServoAngle pulse_to_angle(double pulse_ms) {
    if (!(pulse_ms >= kMinPulseMs && pulse_ms <= kMaxPulseMs)) {
        throw Error(ErrorKind::OutOfRange, "pulse of " + std::to_string(pulse_ms) +
                                               " ms is outside 0.5..2.5 ms");
    }
    return ServoAngle((pulse_ms - kMinPulseMs) / (kMaxPulseMs - kMinPulseMs) * kServoSpanDeg);
}

ServoChannel ServoChannel::at(ServoAngle angle, double period_ms) {
    return ServoChannel{angle, PwmChannel{angle_to_pulse(angle), period_ms}};
}

std::string_view to_string(Command cmd) {
    switch (cmd) {
    case Command::Up: return "up";
    case Command::Down: return "down";
    case Command::LeftRoll: return "left roll";
    case Command::RightRoll: return "right roll";
    case Command::Reset: return "reset";
    }
    return "?";
}

std::optional<Command> parse_command(std::string_view text) {
    std::string key;
    for (char ch : text) {
        if (ch == ' ' || ch == '_' || ch == '-') {
            continue;
        }
        key.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(ch))));
    }
    if (key == "up") return Command::Up;
    if (key == "down") return Command::Down;
    if (key == "leftroll") return Command::LeftRoll;
    if (key == "rightroll") return Command::RightRoll;
    if (key == "reset") return Command::Reset;
    return std::nullopt;
}

SurfaceState SurfaceState::neutral(double step_deg) {
    SurfaceState s;
    s.elevator = ServoChannel::at(ServoAngle(kNeutralDeg));
    s.left_aileron = ServoChannel::at(ServoAngle(kNeutralDeg));
    s.right_aileron = ServoChannel::at(ServoAngle(kNeutralDeg));
    s.step_deg = step_deg;
    return s;
}

SurfaceState apply_command(const SurfaceState& state, Command cmd, ActuationMode mode) {
    SurfaceState next = state;
    const double step = state.step_deg;
    const auto move = [&](ServoChannel& ch, double direction) {
        const double base = mode == ActuationMode::Incremental ? ch.angle.degrees() : kNeutralDeg;
        ch = ServoChannel::at(ServoAngle(base + direction * step), ch.pwm.period_ms);
    };
    const auto reset = [](ServoChannel& ch) {
        ch = ServoChannel::at(ServoAngle(kNeutralDeg), ch.pwm.period_ms);
    };

    switch (cmd) {
    case Command::Reset:
        reset(next.elevator);
        reset(next.left_aileron);
        reset(next.right_aileron);
        break;
    case Command::Up: move(next.elevator, +1.0); break;
    case Command::Down: move(next.elevator, -1.0); break;
    case Command::LeftRoll:
        move(next.left_aileron, +1.0);
        move(next.right_aileron, -1.0);
        break;
    case Command::RightRoll:
        move(next.left_aileron, -1.0);
        move(next.right_aileron, +1.0);
        break;
    }
    return next;
}

bool is_consistent(const SurfaceState& state) {
    for (const ServoChannel* ch : {&state.elevator, &state.left_aileron, &state.right_aileron}) {
        const double deg = ch->angle.degrees();
        if (deg < 0.0 || deg > kServoSpanDeg) return false;
        if (ch->pwm.pulse_ms != angle_to_pulse(ch->angle)) return false;
        if (ch->pwm.pulse_ms < kMinPulseMs || ch->pwm.pulse_ms > kMaxPulseMs) return false;
        if (!(ch->pwm.period_ms > ch->pwm.pulse_ms)) return false;
    }
    return state.step_deg > 0.0;
}

std::vector<std::uint8_t> render_pwm(const PwmChannel& channel, int sample_rate_hz, int n_periods) {
    if (sample_rate_hz < 10000) {
        throw Error(ErrorKind::InvalidArgument, "PWM rendering needs at least 10 kHz");
    }
    if (n_periods <= 0) {
        return {};
    }
    const double rate = static_cast<double>(sample_rate_hz);
    const auto period = static_cast<std::size_t>(std::llround(channel.period_ms / 1000.0 * rate));
    const auto high = std::min(
        period, static_cast<std::size_t>(std::llround(channel.pulse_ms / 1000.0 * rate)));
    std::vector<std::uint8_t> wave;
    wave.reserve(period * static_cast<std::size_t>(n_periods));
    for (int i = 0; i < n_periods; ++i) {
        wave.insert(wave.end(), high, 1);
        wave.insert(wave.end(), period - high, 0);
    }
    return wave;
}

std::string format_state(const SurfaceState& state) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "elevator=%.12g left=%.12g right=%.12g pulses=%.12g,%.12g,%.12g",
                  state.elevator.angle.degrees(), state.left_aileron.angle.degrees(),
                  state.right_aileron.angle.degrees(), state.elevator.pwm.pulse_ms,
                  state.left_aileron.pwm.pulse_ms, state.right_aileron.pwm.pulse_ms);
    return buf;
}

SurfaceState parse_state(std::string_view record, double step_deg) {
    std::istringstream in{std::string(record)};
    std::string token;
    std::optional<double> elevator, left, right;
    while (in >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) {
            throw Error(ErrorKind::InvalidArgument, "malformed state token '" + token + "'");
        }
        const std::string key = token.substr(0, eq);
        const std::string value = token.substr(eq + 1);
        try {
            if (key == "elevator") elevator = std::stod(value);
            else if (key == "left") left = std::stod(value);
            else if (key == "right") right = std::stod(value);
            else if (key != "pulses") {
                throw Error(ErrorKind::InvalidArgument, "unknown state key '" + key + "'");
            }
        } catch (const std::logic_error&) {
            throw Error(ErrorKind::InvalidArgument, "bad number in '" + token + "'");
        }
    }
    if (!elevator || !left || !right) {
        throw Error(ErrorKind::InvalidArgument, "state record needs elevator, left and right");
    }
    SurfaceState s = SurfaceState::neutral(step_deg);
    s.elevator = ServoChannel::at(ServoAngle(*elevator));
    s.left_aileron = ServoChannel::at(ServoAngle(*left));
    s.right_aileron = ServoChannel::at(ServoAngle(*right));
    return s;
}

void write_waveform_csv(std::ostream& out, const std::vector<std::uint8_t>& wave,
                        int sample_rate_hz) {
    out << "sample_index,time_ms,level\n";
    for (std::size_t i = 0; i < wave.size(); ++i) {
        out << i << ',' << (1000.0 * static_cast<double>(i) / sample_rate_hz) << ','
            << static_cast<int>(wave[i]) << '\n';
    }
}

} // namespace voicepilot
