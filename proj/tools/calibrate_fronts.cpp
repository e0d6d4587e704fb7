// Prints the raw front-tracking constants from the calibration sweep. The
// frozen table in src/front_constants.cpp is derived from this output with
// 10% safety margins.
#include "coulombflow/hj_fronts.hpp"

#include <cstdio>

int main() {
    namespace cf = coulombflow;
    const auto dom = cf::default_calibration_domain();
    std::printf("m,c_s2,c_s3_low,c_s3_up,c_t\n");
    for (double m : {1.5, 2.0, 3.0, 4.0}) {
        const cf::FrontConstants c = cf::calibrate_front_constants(m, dom);
        std::printf("%g,%.6g,%.6g,%.6g,%.6g\n", m, c.c_s2, c.c_s3_low, c.c_s3_up, c.c_t);
        std::fflush(stdout);
    }
}
