#include "vnfopt/geo.hpp"

#include <cmath>

namespace vnfopt {

namespace {
constexpr double kDegToRad = 0.017453292519943295;
}

double haversine_m(const GeoCoord& a, const GeoCoord& b) {
    const double lat1 = a.lat_deg * kDegToRad;
    const double lat2 = b.lat_deg * kDegToRad;
    const double dlat = (b.lat_deg - a.lat_deg) * kDegToRad;
    const double dlon = (b.lon_deg - a.lon_deg) * kDegToRad;
    const double s1 = std::sin(0.5 * dlat);
    const double s2 = std::sin(0.5 * dlon);
    const double h = s1 * s1 + std::cos(lat1) * std::cos(lat2) * s2 * s2;
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(h)));
}

double propagation_delay_s(const GeoCoord& a, const GeoCoord& b) {
    return haversine_m(a, b) / kFiberSpeedMps;
}

} // namespace vnfopt
