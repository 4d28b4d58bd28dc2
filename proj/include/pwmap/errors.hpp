#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pwmap {

class map_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An orbit point fell within the critical tolerance of the critical set C.
// Carries the step at which it happened so callers can reseed.
class critical_point_error : public map_error {
public:
    critical_point_error(std::size_t step, double value)
        : map_error("orbit point at step " + std::to_string(step) +
                    " lies on the critical set (x = " + std::to_string(value) + ")"),
          step(step), value(value) {}
    std::size_t step;
    double value;
};

class out_of_domain_error : public map_error {
public:
    explicit out_of_domain_error(double value)
        : map_error("point outside [0,1]: " + std::to_string(value)), value(value) {}
    double value;
};

class not_in_branch_image_error : public map_error {
public:
    using map_error::map_error;
};

class validation_error : public map_error {
public:
    using map_error::map_error;
};

class parse_error : public map_error {
public:
    parse_error(std::size_t line, const std::string& what)
        : map_error("line " + std::to_string(line) + ": " + what), line(line) {}
    std::size_t line;
};

class depth_cap_error : public map_error {
public:
    using map_error::map_error;
};

class empty_after_burn_in_error : public map_error {
public:
    using map_error::map_error;
};

class block_too_long_error : public map_error {
public:
    using map_error::map_error;
};

class non_affine_error : public map_error {
public:
    using map_error::map_error;
};

class no_covering_error : public map_error {
public:
    using map_error::map_error;
};

class no_sign_change_error : public map_error {
public:
    using map_error::map_error;
};

// Bisection converged but the residual cannot meet the requested tolerance
// (floating-point precision floor; see README on backends).
class tolerance_error : public map_error {
public:
    using map_error::map_error;
};

} // namespace pwmap
