#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace voicepilot {

inline constexpr double kMinPulseMs = 0.5;
inline constexpr double kMaxPulseMs = 2.5;
inline constexpr double kServoSpanDeg = 180.0;
inline constexpr double kNeutralDeg = 90.0;
inline constexpr double kDefaultPeriodMs = 20.0;

// Servo shaft angle, always within [0, 180] degrees.
class ServoAngle {
public:
    constexpr ServoAngle() = default;
    // Out-of-span values are clamped.
    explicit ServoAngle(double degrees);

    constexpr double degrees() const { return degrees_; }
    bool operator==(const ServoAngle&) const = default;

private:
    double degrees_ = kNeutralDeg;
};

struct PwmChannel {
    double pulse_ms = 1.5;
    double period_ms = kDefaultPeriodMs;

    bool operator==(const PwmChannel&) const = default;
};

// 0 deg <-> 0.5 ms ... 180 deg <-> 2.5 ms, linear.
double angle_to_pulse(ServoAngle angle);

// Throws Error{OutOfRange} outside [0.5, 2.5] ms.
ServoAngle pulse_to_angle(double pulse_ms);

struct ServoChannel {
    ServoAngle angle;
    PwmChannel pwm;

    static ServoChannel at(ServoAngle angle, double period_ms = kDefaultPeriodMs);
    bool operator==(const ServoChannel&) const = default;
};

enum class Command { Up, Down, LeftRoll, RightRoll, Reset };

// Incremental: each command moves the surface by step_deg from where it is.
// Absolute: each command sets the surface to neutral +/- step_deg.
enum class ActuationMode { Incremental, Absolute };

std::string_view to_string(Command cmd);

// Accepts "up", "down", "left roll", "right roll", "reset"; spaces, '_' and
// '-' are interchangeable and case is ignored.
std::optional<Command> parse_command(std::string_view text);

// Sign conventions (angles above 90 deg are trailing-edge down):
//
//   command     elevator   left aileron   right aileron
//   Up          +step      -              -
//   Down        -step      -              -
//   LeftRoll    -          +step          -step
//   RightRoll   -          -step          +step
//   Reset       90         90             90
struct SurfaceState {
    ServoChannel elevator;
    ServoChannel left_aileron;
    ServoChannel right_aileron;
    double step_deg = 15.0;

    static SurfaceState neutral(double step_deg = 15.0);
    bool operator==(const SurfaceState&) const = default;
};

SurfaceState apply_command(const SurfaceState& state, Command cmd,
                           ActuationMode mode = ActuationMode::Incremental);

// True when every channel's pulse equals angle_to_pulse(angle) and the pulse
// and period are in range.
bool is_consistent(const SurfaceState& state);

// One period: round(pulse_ms * rate / 1000) samples high, the rest of
// round(period_ms * rate / 1000) low. Throws Error{InvalidArgument} below 10 kHz.
std::vector<std::uint8_t> render_pwm(const PwmChannel& channel, int sample_rate_hz, int n_periods);

// `elevator=<deg> left=<deg> right=<deg> pulses=<ms,ms,ms>`
std::string format_state(const SurfaceState& state);

// Inverse of format_state; step_deg comes from the caller. Throws
// Error{InvalidArgument} on malformed records.
SurfaceState parse_state(std::string_view record, double step_deg = 15.0);

// sample_index,time_ms,level
void write_waveform_csv(std::ostream& out, const std::vector<std::uint8_t>& wave,
                        int sample_rate_hz);

} // namespace voicepilot
