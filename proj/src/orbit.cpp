#include "ntnsim/orbit.hpp"

namespace ntnsim::orbit {

// The simulator runs in double precision; instantiate once here.
template OrbitalState<double> propagate<double>(const KeplerElements&, double);
template EarthFixedState<double> eci_to_ecef<double>(const OrbitalState<double>&, double);
template TopocentricView<double> look_angles<double>(const GeodeticPosition&, const EarthFixedState<double>&,
                                                     const Vector3<double>&);
template double doppler_shift_khz<double>(double, double);

}  // namespace ntnsim::orbit
