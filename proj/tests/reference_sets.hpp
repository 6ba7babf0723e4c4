#pragma once

// Published fit outcomes used for replay checks. Phases are in radians as
// printed; totals are the reported weighted sums of squares.

#include <vector>

namespace ref {

struct PublishedFit {
  double gamma;
  double sigma;
  std::vector<double> phases_radians;
  std::vector<double> x;
  std::vector<double> ratios;
  double total;
  double cbc;
};

inline const PublishedFit kSevenLevel{
    2.18081,
    3.92036,
    {0.915274, 6.28319, 6.28319, 1.20429, 5.33637, 0.700917, 0.0},
    {0.321253, 0.676572, 0.936234, 1.65921, 1.79613, 2.1688, 2.18378},
    {1.1386, 1.16732, 0.951104, 1.13392, 1.02881, 1.067, 1.06951},
    13.703,
    8.48114};

inline const PublishedFit kTenLevel{
    1.30466,
    1.49575,
    {6.28319, 6.28319, 1.27142, 0.0493542, 6.28319, 0.0555025, 0.0000178313, 6.28319, 0.0, 6.00153e-23},
    {0.38402, 0.665384, 0.915631, 1.32033, 1.42245, 1.83676, 1.95767, 2.33568, 2.68742, 3.06041},
    {1.27306, 1.142, 1.00359, 1.03838, 0.969627, 1.02007, 1.0058, 0.978438, 1.00323, 0.984601},
    2.86609,
    2.68872};

inline const PublishedFit kTenLevelZeroPhase{
    1.25274,
    1.23289,
    std::vector<double>(10, 0.0),
    {0.406011, 0.72083, 0.88735, 1.21503, 1.38215, 1.72066, 2.07865, 2.24067, 2.81678, 2.91862},
    {1.4716, 1.20207, 1.04624, 1.0322, 0.953197, 0.985181, 0.987027, 0.9602, 1.03323, 0.995425},
    7.2358,
    6.758};

inline const PublishedFit kTwelveLevel{
    1.16902,
    1.90025,
    {5.06388, 1.19176, 5.10283, 5.10239, 1.54197, 4.87505, 5.75582, 5.07329, 6.28319, 6.28319, 0.491806, 0.0},
    {0.370638, 0.518695, 0.65557, 1.3734, 1.49501, 1.90065, 2.13024, 2.25476, 2.83058, 2.96561, 3.18434, 3.69962},
    {1.45746, 1.09132, 0.891351, 1.03399, 0.967626, 1.0088, 1.01311, 0.981312, 1.01104, 0.986514, 1.00474, 1.00054},
    4.7436,
    4.51953};

inline const PublishedFit kFifteenLevelFirst{
    1.10999,
    2.39239,
    {5.85115, 1.90972, 6.07707, 3.38707, 5.79917, 3.01828, 5.21112, 0.972974, 6.28319, 4.06528, 5.13804, 1.09178,
     5.42993, 0.0000400221, 0.887475},
    {0.427238, 0.575873, 0.674962, 0.964599, 1.67025, 1.86543, 1.99707, 2.09904, 2.87102, 2.96694, 3.12156, 3.26476,
     3.37853, 3.42232, 3.66246},
    {1.62295, 1.205, 0.970261, 0.919054, 0.964421, 1.03902, 1.01992, 0.974149, 1.00741, 0.984101, 1.00373, 1.01898,
     1.01317, 0.977452, 0.996592},
    10.8781,
    10.1905};

inline const PublishedFit kFifteenLevelSecond{
    1.10638,
    1.92895,
    {1.44074, 6.28318, 1.66813, 0.542437, 2.10471, 4.76708, 2.12488, 0.0381873, 1.27475, 0.672527, 1.10953, 1.92716,
     5.96083, 0.00013761, 0.0},
    {0.447782, 0.605638, 0.711853, 1.03604, 1.65431, 1.87966, 2.02289, 2.13206, 2.85323, 2.95601, 3.11569, 3.25825,
     3.37216, 3.41606, 3.70782},
    {},
    11.6345,
    10.9979};

inline const PublishedFit kTwentyLevel{
    1.08285,
    1.23124,
    {6.28319, 5.12918, 1.82172, 0.627236, 2.28354, 6.28057, 2.09377, 2.27574, 6.28319, 6.28319, 1.39899, 1.05003,
     4.08259, 0.00871371, 6.28319, 5.20743, 0.00527643, 6.28319, 3.08389e-7, 0.00224054},
    {0.430261, 0.581042, 0.682297, 0.990577, 1.66733, 1.8869, 2.03975, 2.16318, 2.7836, 2.8999, 3.11796, 3.36483,
     3.61917, 3.71294, 4.1214, 4.23216, 4.39019, 4.59062, 5.39774, 5.49934},
    {1.63002, 1.21105, 0.97568, 0.925948, 0.959536, 1.03755, 1.02111, 0.978159, 1.01279, 0.983753, 0.998834, 1.01199,
     1.00774, 0.97948, 1.01524, 1.00143, 0.997587, 0.993286, 1.00448, 0.994628},
    11.4018,
    10.3952};

/// Zero phases, gamma fixed, sigma 1: ratios at the jointly fitted and at the
/// smooth turning points.
struct EightLevelZeroPhase {
  double gamma = 1.41119;
  std::vector<double> fitted_x{0.662734, 1.17022, 1.58516, 2.28689, 2.32938, 3.18343, 3.21295, 3.30561};
  std::vector<double> smooth_x{1.30083, 1.87866, 2.20626, 2.64243, 2.84142, 3.20489, 3.4613, 3.64459};
  std::vector<double> fitted_ratios{1.80006, 1.55891, 1.3248, 1.32142, 1.22064, 1.23564, 1.23128, 1.21166};
  std::vector<double> smooth_ratios{1.46964, 1.34903, 1.19796, 1.26407, 1.14572, 1.23298, 1.201, 1.16905};
  double fitted_total = 181.6414;
};

inline const EightLevelZeroPhase kEightLevelZeroPhase{};

/// Smooth turning points for the first eight zeros, and for the hundredth.
inline const std::vector<double> kSmoothTurningPoints{1.30083, 1.87866, 2.20626, 2.64243,
                                                      2.84142, 3.20489, 3.4613,  3.64459};
inline constexpr double kSmoothTurningPoint100 = 15.315;

} // namespace ref
