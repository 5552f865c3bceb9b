// One-dimensional relativistic event engine. Photons leave a fixed source,
// a stationary receiver and a stationary-or-moving satellite detect them; the
// worldline intersections are solved in closed form and proper time on the
// satellite clock accumulates as coordinate time * sqrt(1 - v^2/c^2).
//
// Two closed-form stretch factors for the detection gap on the moving clock
// are provided, because they disagree:
//   dilated_interval_eq8:     delta * c / ((c - v) * sqrt(1 - v^2/c^2))
//   dilated_interval_doppler: delta * c * sqrt(1 - v^2/c^2) / (c - v)
//                           = delta * sqrt((c + v) / (c - v))
// The second is what the worldline engine itself produces; their ratio is
// 1 / (1 - v^2/c^2). Callers choose which one defines "expected dilation".

#ifndef DIQGPS_KINEMATICS_HPP
#define DIQGPS_KINEMATICS_HPP

#include <cmath>
#include <string>
#include <vector>

#include "diqgps/types.hpp"

namespace diqgps {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s

enum class DilationFormula { Eq8AsPrinted, FirstPrinciples };

inline const char* to_string(DilationFormula f) {
  return f == DilationFormula::Eq8AsPrinted ? "eq8_as_printed" : "first_principles";
}

// How the receiver learns the emission timestamp t_S0: encoded by the
// satellite alongside its detection times (source mounted on the satellite),
// or cancelled out of the position fix (satellite between source and
// receiver).
enum class TS0Variant { Encoded, SatelliteBetween };

inline const char* to_string(TS0Variant v) {
  return v == TS0Variant::Encoded ? "encoded" : "s_between";
}

template <typename Scalar = double>
struct KinematicsConfigT {
  Scalar z_source = 0;          // photon source position
  Scalar z_receiver = 0;        // stationary receiver position
  Scalar z_satellite = 0;       // satellite position at coordinate time 0
  Scalar v = 0;                 // satellite velocity, signed, |v| < c
  Scalar c = kSpeedOfLight;
  std::vector<Scalar> emission_times;  // strictly increasing coordinate times
};

using KinematicsConfig = KinematicsConfigT<double>;

template <typename Scalar = double>
struct EventTimelineT {
  struct Event {
    Scalar t_emit;
    Scalar t_detect_R;    // coordinate time (= receiver clock)
    Scalar t_detect_S;    // coordinate time of detection at the satellite
    Scalar t_proper_S;    // satellite clock reading at detection
  };
  std::vector<Event> events;
};

using EventTimeline = EventTimelineT<double>;

template <typename Scalar>
Scalar lorentz_contraction(Scalar v, Scalar c) {
  return std::sqrt(Scalar(1) - (v / c) * (v / c));
}

template <typename Scalar>
void validate_config(const KinematicsConfigT<Scalar>& config) {
  if (config.c <= 0) throw config_error("c must be positive");
  if (std::abs(config.v) >= config.c) throw config_error("|v| must be strictly below c");
  if (config.z_receiver == config.z_source)
    throw config_error("receiver must not sit on the source");
  if (config.z_satellite == config.z_source)
    throw config_error("satellite must not start on the source");
  // Collinear layout: satellite on the far side of the source from the
  // receiver, or strictly between source and receiver.
  const Scalar side_R = config.z_receiver - config.z_source;
  const Scalar side_S = config.z_satellite - config.z_source;
  if (side_R * side_S > 0 && std::abs(side_S) > std::abs(side_R))
    throw config_error("satellite must not sit beyond the receiver");
  for (std::size_t i = 1; i < config.emission_times.size(); ++i)
    if (config.emission_times[i] <= config.emission_times[i - 1])
      throw config_error("emission times must be strictly increasing");
}

// Coordinate travel time of a photon chasing a detector that is x_S away at
// emission and receding at velocity v: x_S / (c - v).
template <typename Scalar>
Scalar travel_time_moving(Scalar x_S, Scalar v, Scalar c) {
  return x_S / (c - v);
}

// Coordinate-frame gap between successive detections at the moving satellite
// when the receiver-side gap is delta_R: the travel-time difference
// delta_R * v/(c - v) plus the emission gap delta_R itself.
template <typename Scalar>
Scalar coordinate_interval_at_S(Scalar delta_R, Scalar v, Scalar c) {
  return delta_R * c / (c - v);
}

// Detection gap on the satellite clock with sqrt(1 - v^2/c^2) dividing the
// coordinate stretch.
template <typename Scalar>
Scalar dilated_interval_eq8(Scalar delta_R, Scalar v, Scalar c) {
  return delta_R * c / ((c - v) * lorentz_contraction(v, c));
}

// Detection gap on the satellite clock from the coordinate gap times the
// proper-time factor; equals delta_R * sqrt((c + v)/(c - v)), the relativistic
// Doppler stretch, and matches the worldline engine.
template <typename Scalar>
Scalar dilated_interval_doppler(Scalar delta_R, Scalar v, Scalar c) {
  return coordinate_interval_at_S(delta_R, v, c) * lorentz_contraction(v, c);
}

template <typename Scalar>
Scalar dilated_interval(DilationFormula formula, Scalar delta_R, Scalar v, Scalar c) {
  return formula == DilationFormula::Eq8AsPrinted
             ? dilated_interval_eq8(delta_R, v, c)
             : dilated_interval_doppler(delta_R, v, c);
}

// Coordinate detection time of the photon emitted toward the satellite at
// t_emit: the satellite worldline z_satellite + v*t meets the photon worldline
// leaving z_source at light speed toward the satellite's side.
template <typename Scalar>
Scalar satellite_detection_time(Scalar z_source, Scalar z_satellite, Scalar v, Scalar c,
                                Scalar t_emit) {
  const Scalar gap = (z_satellite + v * t_emit) - z_source;  // signed, at emission
  const Scalar direction = gap >= 0 ? Scalar(1) : Scalar(-1);
  return t_emit + std::abs(gap) / (c - direction * v);
}

template <typename Scalar>
Scalar receiver_detection_time(Scalar z_source, Scalar z_receiver, Scalar c,
                               Scalar t_emit) {
  return t_emit + std::abs(z_receiver - z_source) / c;
}

// Exact photon-detector intersections for every configured emission.
template <typename Scalar>
EventTimelineT<Scalar> simulate_timeline(const KinematicsConfigT<Scalar>& config) {
  validate_config(config);
  EventTimelineT<Scalar> timeline;
  timeline.events.reserve(config.emission_times.size());
  const Scalar gamma_inv = lorentz_contraction(config.v, config.c);
  for (const Scalar t_emit : config.emission_times) {
    typename EventTimelineT<Scalar>::Event event;
    event.t_emit = t_emit;
    event.t_detect_R =
        receiver_detection_time(config.z_source, config.z_receiver, config.c, t_emit);
    event.t_detect_S = satellite_detection_time(config.z_source, config.z_satellite,
                                                config.v, config.c, t_emit);
    event.t_proper_S = event.t_detect_S * gamma_inv;
    timeline.events.push_back(event);
  }
  return timeline;
}

template <typename Scalar = double>
struct PositionFix {
  Scalar z_R;
  Scalar z_S;
  Scalar separation;
};

// Positions and separation from the first detection timestamps when the
// receiver and satellite sit on opposite sides of the source:
// z_R = z_S0 + c (t_R1 - t_S0), z_S = z_S0 - c (t_S1 - t_S0),
// z_R - z_S = c (t_R1 + t_S1 - 2 t_S0).
template <typename Scalar>
PositionFix<Scalar> distance_from_timestamps(Scalar t_R1, Scalar t_S1, Scalar t_S0,
                                             Scalar z_S0, Scalar c) {
  if (t_R1 < t_S0 || t_S1 < t_S0)
    throw data_error("detection timestamp precedes the emission timestamp");
  PositionFix<Scalar> fix;
  fix.z_R = z_S0 + c * (t_R1 - t_S0);
  fix.z_S = z_S0 - c * (t_S1 - t_S0);
  fix.separation = c * (t_R1 + t_S1 - Scalar(2) * t_S0);
  return fix;
}

// Separation when the satellite sits between source and receiver; the
// emission timestamp cancels and only the clock difference remains.
template <typename Scalar>
Scalar separation_satellite_between(Scalar t_R1, Scalar t_S1, Scalar c) {
  return c * (t_R1 - t_S1);
}

struct DilationComparisonRow {
  double v_over_c;
  double coordinate_interval;    // delta * c/(c - v)
  double eq8_as_printed;         // delta * c/((c - v) sqrt(1 - v^2/c^2))
  double first_principles;       // delta * sqrt((c + v)/(c - v))
  double ratio;                  // eq8 / first_principles = 1/(1 - v^2/c^2)
};

// Side-by-side evaluation of both satellite-clock stretch conventions at the
// given speeds. delta_R is the receiver-side detection gap.
inline std::vector<DilationComparisonRow> compare_dilation_formulas(
    const std::vector<double>& v_over_c, double delta_R) {
  std::vector<DilationComparisonRow> rows;
  rows.reserve(v_over_c.size());
  for (const double beta : v_over_c) {
    if (std::abs(beta) >= 1.0) throw config_error("|v/c| must be strictly below 1");
    DilationComparisonRow row;
    row.v_over_c = beta;
    row.coordinate_interval = coordinate_interval_at_S(delta_R, beta, 1.0);
    row.eq8_as_printed = dilated_interval_eq8(delta_R, beta, 1.0);
    row.first_principles = dilated_interval_doppler(delta_R, beta, 1.0);
    row.ratio = row.eq8_as_printed / row.first_principles;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace diqgps

#endif  // DIQGPS_KINEMATICS_HPP
