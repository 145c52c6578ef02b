#pragma once
#include <array>
#include <limits>
#include <random>
#include <vector>

#include "linesim/camera.hpp"
#include "linesim/geom2d.hpp"
#include "linesim/path.hpp"
#include "linesim/vehicle.hpp"

namespace linesim {

struct VisionConfig {
    CameraModel camera;
    int window_near_row = 400;  // lower in the image = closer to the vehicle
    int window_far_row = 100;
    int sensor_width = 640;
    int sensor_height = 480;
    double pixel_noise_sigma = 0.0;   // px
    double dropout_probability = 0.0; // per sample
    double rate = 10.0;               // Hz
    bool quantize = true;             // test hook: integer-pixel quantization
};

struct VisionSample {
    bool valid = false;
    ImagePoint near, far;          // as observed (quantized + noisy)
    double derived_angle = 0.0;    // rad
    double derived_offset = 0.0;   // m
};

struct Obstacle {
    Point2 center;
    double radius = 0.0;
    double t_on = 0.0;
    double t_off = std::numeric_limits<double>::infinity();
    bool active(double t) const { return t >= t_on && t <= t_off; }
};

struct SonarConfig {
    // Transducer axes in the vehicle frame, ordered left to right.
    std::array<double, 6> bearings = {deg2rad(75.0),  deg2rad(45.0),  deg2rad(15.0),
                                      deg2rad(-15.0), deg2rad(-45.0), deg2rad(-75.0)};
    double cone_half_angle = deg2rad(12.5);
    double min_range = 0.15;   // m
    double max_range = 10.0;   // m
    double rate = 16.0;        // Hz
    double noise_sigma = 0.0;  // m
};

struct SonarReading {
    std::array<double, 6> distances{};  // m, max_range when no echo
    double zone_left = 0.0, zone_center = 0.0, zone_right = 0.0;
};

// Intersects the followed line with the ground-plane preimages of the two
// window rows, projects, quantizes, perturbs, and back-projects. Always
// consumes the same number of random draws (4 Gaussian + 1 uniform) so the
// stream stays aligned whatever the outcome.
VisionSample vision_sample(const VisionConfig& cfg, const Path& world,
                           const VehicleState& pose, std::mt19937_64& rng);

// Per transducer: nearest point of any active obstacle disk lying inside the
// cone, clamped to [min_range, max_range], plus Gaussian noise, re-clamped.
// Zones are pairwise minima: left = (0,1), center = (2,3), right = (4,5).
SonarReading sonar_scan(const SonarConfig& cfg, const std::vector<Obstacle>& obstacles,
                        const VehicleState& pose, double t, std::mt19937_64& rng);

}  // namespace linesim
