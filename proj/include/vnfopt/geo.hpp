#ifndef VNFOPT_GEO_HPP
#define VNFOPT_GEO_HPP

namespace vnfopt {

struct GeoCoord {
    double lat_deg = 0.0;
    double lon_deg = 0.0;
};

inline constexpr double kEarthRadiusM = 6371.0e3;
inline constexpr double kSpeedOfLightMps = 299792458.0;
// signals travel at 2/3 c in fiber
inline constexpr double kFiberSpeedMps = 2.0 * kSpeedOfLightMps / 3.0;

// great-circle distance in meters (Haversine, R = 6371 km)
double haversine_m(const GeoCoord& a, const GeoCoord& b);

// propagation delay in seconds between two coordinates
double propagation_delay_s(const GeoCoord& a, const GeoCoord& b);

} // namespace vnfopt

#endif
