#include "painterly/embodiment.hpp"

#include "painterly/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace painterly {

ImageCloud extract_point_cloud(const DepthFrame& frame, const FilterConfig& cfg) {
    ImageCloud cloud;
    cloud.source = {frame.width, frame.height, frame.timestamp};
    kernels::omp::band_filter(frame, cfg, cloud.points);
    return cloud;
}

WorldPoint to_world(const ImagePoint& p, const FrameInfo& dims, const MappingConfig& map) {
    const double sign = map.mirrorX ? -1.0 : 1.0;
    return {sign * (double(p.x) - dims.width / 2.0) / map.pixelsPerMeterX + map.originOffset.x,
            (double(dims.height) - double(p.y)) / map.pixelsPerMeterY + map.originOffset.y,
            double(p.depth) * map.depthToZ + map.originOffset.z};
}

ImagePoint to_image(const WorldPoint& w, const FrameInfo& dims, const MappingConfig& map) {
    const double sign = map.mirrorX ? -1.0 : 1.0;
    const double px = sign * (w.x - map.originOffset.x) * map.pixelsPerMeterX + dims.width / 2.0;
    const double py = double(dims.height) - (w.y - map.originOffset.y) * map.pixelsPerMeterY;
    const double d = (w.z - map.originOffset.z) / map.depthToZ;
    return {static_cast<std::uint32_t>(std::lround(px)), static_cast<std::uint32_t>(std::lround(py)),
            static_cast<std::uint16_t>(std::lround(d))};
}

WorldCloud map_cloud(const ImageCloud& cloud, const MappingConfig& map, const Aabb& bounds) {
    WorldCloud out;
    out.source = cloud.source;
    kernels::omp::map_points(cloud.points, cloud.source, map, bounds, out.points);
    return out;
}

namespace {

struct Cluster {
    std::size_t count = 0;
    Vec3 sum;

    Vec3 centroid() const { return sum * (1.0 / double(count)); }
};

}  // namespace

EmitterSet detect_emitters(const WorldCloud& cloud, const EmitterParams& params) {
    EmitterSet set;
    if (cloud.empty()) return set;

    double minY = std::numeric_limits<double>::infinity();
    double maxY = -minY;
    double sumX = 0.0;
    for (const auto& p : cloud.points) {
        minY = std::min(minY, p.y);
        maxY = std::max(maxY, p.y);
        sumX += p.x;
    }
    const double h = maxY - minY;
    const double centerX = sumX / double(cloud.size());

    std::vector<WorldPoint> band;
    const double capFloor = maxY - params.capFraction * h;
    for (const auto& p : cloud.points)
        if (p.y >= capFloor) band.push_back(p);
    std::stable_sort(band.begin(), band.end(), [](const auto& a, const auto& b) { return a.x < b.x; });

    // Split the x-sorted cap band wherever neighbours are further apart than the gap.
    std::vector<Cluster> clusters;
    for (std::size_t i = 0; i < band.size(); ++i) {
        if (i == 0 || band[i].x - band[i - 1].x > params.gapThreshold) clusters.emplace_back();
        clusters.back().count += 1;
        clusters.back().sum = clusters.back().sum + band[i];
    }
    if (clusters.empty()) {
        set.fallbackAll = true;
        return set;
    }

    std::size_t headIdx = 0;
    for (std::size_t i = 1; i < clusters.size(); ++i)
        if (std::abs(clusters[i].centroid().x - centerX) < std::abs(clusters[headIdx].centroid().x - centerX))
            headIdx = i;
    set.head = clusters[headIdx].centroid();

    std::vector<std::size_t> handIdx;
    const double handFloor = minY + params.handHeightFraction * h;
    for (std::size_t i = 0; i < clusters.size(); ++i)
        if (i != headIdx && clusters[i].centroid().y >= handFloor) handIdx.push_back(i);
    std::stable_sort(handIdx.begin(), handIdx.end(),
                     [&](std::size_t a, std::size_t b) { return clusters[a].count > clusters[b].count; });
    if (handIdx.size() > 2) handIdx.resize(2);
    std::sort(handIdx.begin(), handIdx.end());  // report left to right
    for (auto i : handIdx) set.hands.push_back(clusters[i].centroid());
    return set;
}

}  // namespace painterly
